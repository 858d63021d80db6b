#pragma once

#include <string>
#include <vector>

#include "certeq/common.hpp"

namespace certeq {

/// Strictly increasing breakpoint grid t_1 < ... < t_N, N >= 2.
class Grid {
  public:
    explicit Grid(std::vector<double> breakpoints);

    const std::vector<double>& breakpoints() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double a() const { return points_.front(); }
    double b() const { return points_.back(); }
    double point(std::size_t i) const { return points_[i]; }

    /// Mesh size: the largest breakpoint spacing.
    double mesh() const;

    /// Number of linear segments (N - 1).
    std::size_t num_segments() const { return points_.size() - 1; }

    /// Index (0-based) of the segment containing t. The first segment is
    /// closed on both sides, later segments are half-open (t_j, t_{j+1}].
    /// Arguments within `tol` of the span are clamped; outside throws.
    std::size_t segment_of(double t, double tol = 1e-9) const;

    bool operator==(const Grid& other) const { return points_ == other.points_; }

  private:
    std::vector<double> points_;
};

/// Uniformly spaced grid with N breakpoints on [a, b].
Grid uniform_grid(double a, double b, std::size_t n);

/// Diagnostic result of checking the admissibility of a piecewise linear
/// utility candidate. An empty report means the candidate is a valid
/// normalized nondecreasing concave L-Lipschitz function on its grid.
struct PluReport {
    double normalization_error = 0.0; // max(|v_1|, |v_N - 1|)
    double monotonicity_error = 0.0;  // most negative slope, as a magnitude
    double concavity_error = 0.0;     // largest slope increase between segments
    double lipschitz_error = 0.0;     // largest slope excess over L
    std::vector<std::string> issues;

    bool ok() const { return issues.empty(); }
};

/// Checks candidate breakpoint values against the class requirements
/// without constructing a utility object.
PluReport validate_plu(const Grid& grid, const std::vector<double>& values,
                       double lipschitz);

/// Continuous nondecreasing concave piecewise linear utility on a grid,
/// normalized to u(a) = 0, u(b) = 1, with slopes in [0, L].
class PiecewiseLinearUtility {
  public:
    PiecewiseLinearUtility(Grid grid, std::vector<double> values,
                           double lipschitz);

    /// Builds from segment slopes (values are accumulated from zero).
    /// Tiny constraint violations from an LP solve, up to `repair_tol`,
    /// are repaired; larger ones throw.
    static PiecewiseLinearUtility from_slopes(const Grid& grid,
                                              const std::vector<double>& slopes,
                                              double lipschitz,
                                              double repair_tol = 1e-6);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& slopes() const { return slopes_; }
    double lipschitz() const { return lipschitz_; }

    /// Function value at t in [a, b]; throws outside the span.
    double evaluate(double t) const;

    /// Function value with arguments clamped into [a, b]; the flat
    /// continuation used when data may fall outside the grid span.
    double evaluate_clamped(double t) const;

    PluReport validate() const { return validate_plu(grid_, values_, lipschitz_); }

    /// max_i |u(t_i) - v(t_i)| on the shared grid.
    double sup_gap(const PiecewiseLinearUtility& other) const;

  private:
    Grid grid_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    double lipschitz_;
};

enum class UtilityKind { Exponential, TwoPieceLinear };

/// Parametric utility:
///  - Exponential: u(t) = shift + scale * (1 - exp(-alpha t))
///  - TwoPieceLinear: u(t) = gamma1 * max(t,0) - gamma2 * max(-t,0)
struct ParametricUtility {
    UtilityKind kind = UtilityKind::Exponential;
    double alpha = 1.0, scale = 1.0, shift = 0.0; // exponential
    double gamma1 = 0.0, gamma2 = 1.0;            // two-piece linear

    static ParametricUtility exponential(double alpha, double scale = 1.0,
                                         double shift = 0.0);
    static ParametricUtility two_piece_linear(double gamma1, double gamma2);

    double evaluate(double t) const;
    double derivative(double t) const; // right derivative
    bool strictly_concave() const { return kind == UtilityKind::Exponential; }
};

/// Projection of a nondecreasing concave utility onto the grid: the
/// utility is affinely renormalized to u(a) = 0, u(b) = 1 and then
/// interpolated through its grid values. The result stays within
/// L * mesh of the renormalized input in sup norm.
///
/// `lipschitz_override`, when given, replaces the default modulus (the
/// left-endpoint slope of the renormalized utility).
PiecewiseLinearUtility project_to_grid(const ParametricUtility& u,
                                       const Grid& grid,
                                       double lipschitz_override = -1.0);

} // namespace certeq
