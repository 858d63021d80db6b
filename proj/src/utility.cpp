#include "certeq/utility.hpp"

#include <algorithm>
#include <cmath>

namespace certeq {

Grid::Grid(std::vector<double> breakpoints) : points_(std::move(breakpoints)) {
    require(points_.size() >= 2, "Grid: need at least two breakpoints");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        require(std::isfinite(points_[i]), "Grid: non-finite breakpoint");
        if (i > 0)
            require(points_[i] > points_[i - 1],
                    "Grid: breakpoints must be strictly increasing");
    }
}

double Grid::mesh() const {
    double m = 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i)
        m = std::max(m, points_[i] - points_[i - 1]);
    return m;
}

std::size_t Grid::segment_of(double t, double tol) const {
    if (t < points_.front()) {
        require(t >= points_.front() - tol, "Grid: argument below span");
        return 0;
    }
    if (t > points_.back()) {
        require(t <= points_.back() + tol, "Grid: argument above span");
        return points_.size() - 2;
    }
    if (t <= points_[1]) return 0; // first segment closed at both ends
    // Later segments are (t_j, t_{j+1}]: find the first breakpoint >= t.
    auto it = std::lower_bound(points_.begin(), points_.end(), t);
    std::size_t idx = std::size_t(it - points_.begin());
    return idx - 1;
}

Grid uniform_grid(double a, double b, std::size_t n) {
    require(a < b, "uniform_grid: a must be < b");
    require(n >= 2, "uniform_grid: need N >= 2");
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = a + (b - a) * double(i) / double(n - 1);
    pts.front() = a;
    pts.back() = b;
    return Grid(std::move(pts));
}

PluReport validate_plu(const Grid& grid, const std::vector<double>& values,
                       double lipschitz) {
    PluReport rep;
    if (values.size() != grid.size()) {
        rep.issues.push_back("value count does not match grid");
        return rep;
    }
    rep.normalization_error = std::max(std::abs(values.front()),
                                       std::abs(values.back() - 1.0));
    if (rep.normalization_error > 1e-10)
        rep.issues.push_back("normalization: endpoints deviate from (0,1)");

    const auto& t = grid.breakpoints();
    double prev_slope = kInf;
    for (std::size_t j = 0; j + 1 < values.size(); ++j) {
        double s = (values[j + 1] - values[j]) / (t[j + 1] - t[j]);
        rep.monotonicity_error = std::max(rep.monotonicity_error, -s);
        rep.lipschitz_error = std::max(rep.lipschitz_error, s - lipschitz);
        if (j > 0)
            rep.concavity_error = std::max(rep.concavity_error, s - prev_slope);
        prev_slope = s;
    }
    if (rep.monotonicity_error > 1e-9)
        rep.issues.push_back("monotonicity: negative slope");
    if (rep.concavity_error > 1e-9)
        rep.issues.push_back("concavity: slopes increase");
    if (rep.lipschitz_error > 1e-9 * std::max(1.0, lipschitz))
        rep.issues.push_back("lipschitz: slope exceeds modulus");
    return rep;
}

PiecewiseLinearUtility::PiecewiseLinearUtility(Grid grid,
                                               std::vector<double> values,
                                               double lipschitz)
    : grid_(std::move(grid)), values_(std::move(values)), lipschitz_(lipschitz) {
    require(lipschitz_ > 0.0, "PLU: Lipschitz modulus must be positive");
    PluReport rep = validate_plu(grid_, values_, lipschitz_);
    // Construction tolerates only numerical dust beyond the class bounds.
    double slope_tol = 1e-7 * std::max(1.0, lipschitz_);
    require(rep.normalization_error <= 1e-10, "PLU: not normalized");
    require(rep.monotonicity_error <= slope_tol, "PLU: decreasing values");
    require(rep.concavity_error <= slope_tol, "PLU: not concave");
    require(rep.lipschitz_error <= slope_tol, "PLU: slope above modulus");

    slopes_.resize(grid_.num_segments());
    const auto& t = grid_.breakpoints();
    for (std::size_t j = 0; j < slopes_.size(); ++j)
        slopes_[j] = (values_[j + 1] - values_[j]) / (t[j + 1] - t[j]);
}

PiecewiseLinearUtility
PiecewiseLinearUtility::from_slopes(const Grid& grid,
                                    const std::vector<double>& slopes,
                                    double lipschitz, double repair_tol) {
    require(slopes.size() == grid.num_segments(),
            "from_slopes: slope count does not match grid");
    std::vector<double> s(slopes);
    double worst = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        double clipped = std::clamp(s[j], 0.0, lipschitz);
        worst = std::max(worst, std::abs(clipped - s[j]));
        s[j] = clipped;
        if (j > 0 && s[j] > s[j - 1]) {
            worst = std::max(worst, s[j] - s[j - 1]);
            s[j] = s[j - 1];
        }
    }
    require(worst <= repair_tol, "from_slopes: slopes violate class bounds");

    const auto& t = grid.breakpoints();
    std::vector<double> values(grid.size());
    values[0] = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
        values[j + 1] = values[j] + s[j] * (t[j + 1] - t[j]);
    double total = values.back();
    require(std::abs(total - 1.0) <= repair_tol,
            "from_slopes: accumulated values miss normalization");
    for (double& v : values) v /= total;
    values.back() = 1.0;
    return PiecewiseLinearUtility(grid, std::move(values), lipschitz);
}

double PiecewiseLinearUtility::evaluate(double t) const {
    std::size_t j = grid_.segment_of(t);
    const auto& bp = grid_.breakpoints();
    return values_[j] + slopes_[j] * (t - bp[j]);
}

double PiecewiseLinearUtility::evaluate_clamped(double t) const {
    return evaluate(std::clamp(t, grid_.a(), grid_.b()));
}

double PiecewiseLinearUtility::sup_gap(const PiecewiseLinearUtility& other) const {
    require(grid_ == other.grid_, "sup_gap: grids differ");
    double g = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        g = std::max(g, std::abs(values_[i] - other.values_[i]));
    return g;
}

ParametricUtility ParametricUtility::exponential(double alpha, double scale,
                                                 double shift) {
    require(alpha > 0.0, "exponential: alpha must be positive");
    require(scale > 0.0, "exponential: scale must be positive");
    ParametricUtility u;
    u.kind = UtilityKind::Exponential;
    u.alpha = alpha;
    u.scale = scale;
    u.shift = shift;
    return u;
}

ParametricUtility ParametricUtility::two_piece_linear(double gamma1,
                                                      double gamma2) {
    require(gamma1 >= 0.0 && gamma1 < gamma2,
            "two_piece_linear: need 0 <= gamma1 < gamma2");
    ParametricUtility u;
    u.kind = UtilityKind::TwoPieceLinear;
    u.gamma1 = gamma1;
    u.gamma2 = gamma2;
    return u;
}

double ParametricUtility::evaluate(double t) const {
    if (kind == UtilityKind::Exponential)
        return shift + scale * (1.0 - std::exp(-alpha * t));
    return gamma1 * std::max(t, 0.0) - gamma2 * std::max(-t, 0.0);
}

double ParametricUtility::derivative(double t) const {
    if (kind == UtilityKind::Exponential)
        return scale * alpha * std::exp(-alpha * t);
    return t < 0.0 ? gamma2 : gamma1;
}

PiecewiseLinearUtility project_to_grid(const ParametricUtility& u,
                                       const Grid& grid,
                                       double lipschitz_override) {
    const double ua = u.evaluate(grid.a());
    const double ub = u.evaluate(grid.b());
    require(ub > ua, "project_to_grid: utility is constant on the span");
    const double span = ub - ua;

    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        values[i] = (u.evaluate(grid.point(i)) - ua) / span;
    values.front() = 0.0;
    values.back() = 1.0;

    // Sampled values must already be nondecreasing and concave.
    const auto& t = grid.breakpoints();
    double prev = kInf;
    for (std::size_t j = 0; j + 1 < values.size(); ++j) {
        double s = (values[j + 1] - values[j]) / (t[j + 1] - t[j]);
        require(s >= -1e-12, "project_to_grid: utility decreases on the grid");
        require(s <= prev + 1e-12, "project_to_grid: utility not concave on the grid");
        prev = s;
    }

    double lipschitz = lipschitz_override > 0.0
                           ? lipschitz_override
                           : u.derivative(grid.a()) / span;
    return PiecewiseLinearUtility(grid, std::move(values), lipschitz);
}

} // namespace certeq
