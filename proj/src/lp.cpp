#include "certeq/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace certeq {

void LinearProgram::add_eq(std::vector<double> row, double rhs) {
    eq_rows.push_back(std::move(row));
    eq_rhs.push_back(rhs);
}

void LinearProgram::add_le(std::vector<double> row, double rhs) {
    le_rows.push_back(std::move(row));
    le_rhs.push_back(rhs);
}

void LinearProgram::set_bounds(std::size_t j, double lo, double hi) {
    require(j < num_vars(), "set_bounds: index out of range");
    require(lo <= hi, "set_bounds: lower above upper");
    lower[j] = lo;
    upper[j] = hi;
}

void LinearProgram::check() const {
    const std::size_t n = num_vars();
    require(n > 0, "LinearProgram: no variables");
    require(lower.size() == n && upper.size() == n,
            "LinearProgram: bounds length mismatch");
    auto check_rows = [&](const std::vector<std::vector<double>>& rows,
                          const std::vector<double>& rhs, const char* what) {
        require(rows.size() == rhs.size(), std::string(what) + ": rhs length mismatch");
        for (const auto& r : rows) {
            require(r.size() == n, std::string(what) + ": row length mismatch");
            for (double v : r)
                require(std::isfinite(v), std::string(what) + ": non-finite coefficient");
        }
        for (double v : rhs)
            require(std::isfinite(v), std::string(what) + ": non-finite rhs");
    };
    check_rows(eq_rows, eq_rhs, "eq");
    check_rows(le_rows, le_rhs, "le");
    for (double v : objective)
        require(std::isfinite(v), "objective: non-finite coefficient");
    for (std::size_t j = 0; j < n; ++j)
        require(lower[j] <= upper[j], "bounds: lower above upper");
}

namespace {

enum VarState : signed char { kAtLower = 0, kAtUpper = 1, kBasic = 2, kFreeZero = 3 };

constexpr double kPivZero = 1e-10;   // column entries treated as zero
constexpr double kPivAccept = 1e-9;  // minimum acceptable pivot magnitude
constexpr int kDegenerateLimit = 40; // consecutive degenerate steps before Bland
constexpr int kRefactorEvery = 500;

} // namespace

struct SimplexSolver::Impl {
    // Standard-form data: structural, slack, then artificial columns.
    int m = 0;        // rows
    int n_struct = 0; // structural variables
    int n_real = 0;   // structural + slack
    int n_total = 0;  // + artificial
    std::vector<std::vector<std::pair<int, double>>> cols;
    std::vector<double> rhs;
    std::vector<double> lower, upper;
    std::vector<double> cost;       // phase-2 objective, minimization form
    std::vector<double> orig_cost;  // user objective (original sense)
    double sense_sign = 1.0;        // +1 minimize, -1 maximize

    std::vector<double> binv; // m*m, column-major
    std::vector<int> basis;   // row -> column
    std::vector<signed char> state;
    std::vector<double> xb; // basic values by row

    bool has_basis = false;
    int pivots_since_refactor = 0;
    double feas_scale = 1.0;
    double cost_scale = 1.0;

    // --- construction -----------------------------------------------------

    void build(const LinearProgram& lp) {
        lp.check();
        const int n = int(lp.num_vars());
        const int m_eq = int(lp.eq_rows.size());
        const int m_le = int(lp.le_rows.size());
        m = m_eq + m_le;
        require(m > 0, "SimplexSolver: no constraints");
        n_struct = n;
        n_real = n + m_le;
        n_total = n_real + m;

        cols.assign(n_total, {});
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < m_eq; ++i)
                if (lp.eq_rows[i][j] != 0.0) cols[j].push_back({i, lp.eq_rows[i][j]});
            for (int i = 0; i < m_le; ++i)
                if (lp.le_rows[i][j] != 0.0)
                    cols[j].push_back({m_eq + i, lp.le_rows[i][j]});
        }
        for (int i = 0; i < m_le; ++i)
            cols[n + i].push_back({m_eq + i, 1.0}); // slack

        rhs.assign(m, 0.0);
        for (int i = 0; i < m_eq; ++i) rhs[i] = lp.eq_rhs[i];
        for (int i = 0; i < m_le; ++i) rhs[m_eq + i] = lp.le_rhs[i];

        lower.assign(n_total, 0.0);
        upper.assign(n_total, kInf);
        for (int j = 0; j < n; ++j) {
            lower[j] = lp.lower[j];
            upper[j] = lp.upper[j];
        }
        // slack bounds already [0, inf); artificial bounds set at solve()

        sense_sign = lp.sense == LpSense::Maximize ? -1.0 : 1.0;
        orig_cost.assign(lp.objective.begin(), lp.objective.end());
        cost.assign(n_total, 0.0);
        for (int j = 0; j < n; ++j) cost[j] = sense_sign * orig_cost[j];

        feas_scale = 1.0;
        for (double v : rhs) feas_scale = std::max(feas_scale, std::abs(v));
    }

    double nonbasic_value(int j) const {
        switch (state[j]) {
        case kAtLower: return lower[j];
        case kAtUpper: return upper[j];
        default: return 0.0;
        }
    }

    // --- linear algebra ----------------------------------------------------

    // w = Binv * (sparse column j)
    void ftran(int j, std::vector<double>& w) const {
        std::fill(w.begin(), w.end(), 0.0);
        for (auto [row, val] : cols[j]) {
            const double* col = &binv[std::size_t(row) * m];
            for (int i = 0; i < m; ++i) w[i] += val * col[i];
        }
    }

    // y' = c_B' * Binv
    void btran(const std::vector<double>& cb, std::vector<double>& y) const {
        for (int j = 0; j < m; ++j) {
            const double* col = &binv[std::size_t(j) * m];
            double acc = 0.0;
            for (int i = 0; i < m; ++i) acc += cb[i] * col[i];
            y[j] = acc;
        }
    }

    void eta_update(const std::vector<double>& w, int r) {
        const double pr_inv = 1.0 / w[r];
        for (int j = 0; j < m; ++j) {
            double* col = &binv[std::size_t(j) * m];
            const double t = col[r] * pr_inv;
            if (t == 0.0) continue;
            for (int i = 0; i < m; ++i) col[i] -= w[i] * t;
            col[r] = t;
        }
        ++pivots_since_refactor;
    }

    // Rebuilds Binv from the basis by Gauss-Jordan elimination and
    // recomputes the basic values. Returns false on a singular basis.
    bool refactor() {
        std::vector<double> mat(std::size_t(m) * m, 0.0);
        for (int i = 0; i < m; ++i)
            for (auto [row, val] : cols[basis[i]])
                mat[std::size_t(i) * m + row] = val; // column i of B
        // invert: binvest starts as identity
        binv.assign(std::size_t(m) * m, 0.0);
        for (int i = 0; i < m; ++i) binv[std::size_t(i) * m + i] = 1.0;
        std::vector<int> perm(m);
        for (int i = 0; i < m; ++i) perm[i] = i;
        // mat is column-major: mat[col*m + row]
        for (int k = 0; k < m; ++k) {
            int piv = -1;
            double best = 1e-12;
            for (int r = k; r < m; ++r) {
                double v = std::abs(mat[std::size_t(k) * m + r]);
                if (v > best) {
                    best = v;
                    piv = r;
                }
            }
            if (piv < 0) return false;
            if (piv != k) {
                for (int j = 0; j < m; ++j) {
                    std::swap(mat[std::size_t(j) * m + piv], mat[std::size_t(j) * m + k]);
                    std::swap(binv[std::size_t(j) * m + piv], binv[std::size_t(j) * m + k]);
                }
            }
            const double d = 1.0 / mat[std::size_t(k) * m + k];
            for (int j = 0; j < m; ++j) {
                mat[std::size_t(j) * m + k] *= d;
                binv[std::size_t(j) * m + k] *= d;
            }
            for (int r = 0; r < m; ++r) {
                if (r == k) continue;
                const double f = mat[std::size_t(k) * m + r];
                if (f == 0.0) continue;
                for (int j = 0; j < m; ++j) {
                    mat[std::size_t(j) * m + r] -= f * mat[std::size_t(j) * m + k];
                    binv[std::size_t(j) * m + r] -= f * binv[std::size_t(j) * m + k];
                }
            }
        }
        recompute_xb();
        pivots_since_refactor = 0;
        return true;
    }

    void recompute_xb() {
        std::vector<double> rhs_eff(rhs);
        for (int j = 0; j < n_total; ++j) {
            if (state[j] == kBasic) continue;
            const double v = nonbasic_value(j);
            if (v == 0.0) continue;
            for (auto [row, val] : cols[j]) rhs_eff[row] -= val * v;
        }
        xb.assign(m, 0.0);
        for (int k = 0; k < m; ++k) {
            const double v = rhs_eff[k];
            if (v == 0.0) continue;
            const double* col = &binv[std::size_t(k) * m];
            for (int i = 0; i < m; ++i) xb[i] += v * col[i];
        }
    }

    // --- core iteration ----------------------------------------------------

    // Minimizes `c` from the current basis. `c` has length n_total.
    LpStatus iterate(const std::vector<double>& c, int max_iter, int& iters) {
        std::vector<double> cb(m), y(m), w(m);
        bool bland = false;
        int degenerate_run = 0;
        cost_scale = 1.0;
        for (double v : c) cost_scale = std::max(cost_scale, std::abs(v));
        const double tol_d = 1e-9 * cost_scale;

        for (;;) {
            if (iters++ > max_iter) return LpStatus::IterationLimit;
            if (pivots_since_refactor >= kRefactorEvery) {
                if (!refactor()) return LpStatus::IterationLimit;
            }

            for (int i = 0; i < m; ++i) cb[i] = c[basis[i]];
            btran(cb, y);

            // entering column
            int q = -1;
            int dir = 0;
            double best_score = tol_d;
            for (int j = 0; j < n_total; ++j) {
                const signed char st = state[j];
                if (st == kBasic) continue;
                if (lower[j] == upper[j]) continue; // pinned
                double d = c[j];
                for (auto [row, val] : cols[j]) d -= y[row] * val;
                int cand_dir = 0;
                if ((st == kAtLower || st == kFreeZero) && d < -best_score)
                    cand_dir = 1;
                else if ((st == kAtUpper || st == kFreeZero) && d > best_score)
                    cand_dir = -1;
                if (cand_dir != 0) {
                    q = j;
                    dir = cand_dir;
                    best_score = std::abs(d);
                    if (bland) break; // lowest eligible index
                }
            }
            if (q < 0) return LpStatus::Optimal;

            ftran(q, w);

            // ratio test; t_best starts at the entering variable's own span
            double t_best = kInf;
            int leave = -1;
            double leave_piv = 0.0;
            bool leave_at_upper = false;
            if (std::isfinite(upper[q]) && std::isfinite(lower[q]))
                t_best = upper[q] - lower[q]; // bound flip span
            for (int i = 0; i < m; ++i) {
                const double g = dir * w[i];
                if (std::abs(g) <= kPivZero) continue;
                const int bj = basis[i];
                double ti;
                bool hits_upper;
                if (g > 0.0) {
                    if (!std::isfinite(lower[bj])) continue;
                    ti = (xb[i] - lower[bj]) / g;
                    hits_upper = false;
                } else {
                    if (!std::isfinite(upper[bj])) continue;
                    ti = (upper[bj] - xb[i]) / (-g);
                    hits_upper = true;
                }
                if (ti < 0.0) ti = 0.0;
                bool take = false;
                if (!std::isfinite(t_best)) {
                    take = true;
                } else {
                    const double window = 1e-9 * (1.0 + t_best);
                    if (ti < t_best - window) {
                        take = true;
                    } else if (ti <= t_best + window && leave >= 0) {
                        // tie: Bland prefers the lowest column index, the
                        // default rule the largest pivot for stability
                        take = bland ? basis[i] < basis[leave]
                                     : std::abs(w[i]) > std::abs(leave_piv);
                    }
                }
                if (take) {
                    t_best = ti;
                    leave = i;
                    leave_piv = w[i];
                    leave_at_upper = hits_upper;
                }
            }

            if (!std::isfinite(t_best)) return LpStatus::Unbounded;

            if (leave < 0) {
                // bound flip, basis unchanged
                for (int i = 0; i < m; ++i) xb[i] -= dir * t_best * w[i];
                state[q] = state[q] == kAtLower ? kAtUpper : kAtLower;
                continue;
            }

            // reject a hopeless pivot and retry in Bland mode
            if (std::abs(leave_piv) < kPivAccept && !bland) {
                bland = true;
                continue;
            }

            const double start = nonbasic_value(q);
            for (int i = 0; i < m; ++i) xb[i] -= dir * t_best * w[i];
            const int out_col = basis[leave];
            state[out_col] = leave_at_upper ? kAtUpper : kAtLower;
            basis[leave] = q;
            state[q] = kBasic;
            xb[leave] = start + dir * t_best;
            eta_update(w, leave);

            if (t_best <= 1e-11) {
                if (++degenerate_run >= kDegenerateLimit) bland = true;
            } else {
                degenerate_run = 0;
                bland = false;
            }
        }
    }

    // --- phases ------------------------------------------------------------

    LpSolution run_cold() {
        LpSolution sol;
        // nonbasic start: finite lower preferred, then finite upper, else free
        state.assign(n_total, kFreeZero);
        for (int j = 0; j < n_real; ++j) {
            if (std::isfinite(lower[j]))
                state[j] = kAtLower;
            else if (std::isfinite(upper[j]))
                state[j] = kAtUpper;
        }

        // artificial columns carry the initial residual sign
        std::vector<double> resid(rhs);
        for (int j = 0; j < n_real; ++j) {
            const double v = nonbasic_value(j);
            if (v == 0.0) continue;
            for (auto [row, val] : cols[j]) resid[row] -= val * v;
        }
        basis.assign(m, -1);
        xb.assign(m, 0.0);
        for (int i = 0; i < m; ++i) {
            const int aj = n_real + i;
            cols[aj] = {{i, resid[i] >= 0.0 ? 1.0 : -1.0}};
            lower[aj] = 0.0;
            upper[aj] = kInf;
            basis[i] = aj;
            state[aj] = kBasic;
            xb[i] = std::abs(resid[i]);
        }
        binv.assign(std::size_t(m) * m, 0.0);
        for (int i = 0; i < m; ++i) {
            // Binv = inverse of the +-1 artificial basis
            binv[std::size_t(i) * m + i] = cols[n_real + i][0].second;
        }
        pivots_since_refactor = 0;

        const int max_iter = 5000 + 10 * (m + n_total);
        int iters = 0;

        // phase 1
        std::vector<double> c1(n_total, 0.0);
        for (int i = 0; i < m; ++i) c1[n_real + i] = 1.0;
        LpStatus st = iterate(c1, max_iter, iters);
        sol.iterations = iters;
        if (st != LpStatus::Optimal) {
            sol.status = st == LpStatus::Unbounded ? LpStatus::IterationLimit : st;
            return sol;
        }
        double infeas = 0.0;
        for (int i = 0; i < m; ++i)
            if (basis[i] >= n_real) infeas += xb[i];
        if (infeas > 1e-7 * feas_scale) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }

        // pin artificials and try to drive basic ones out; the candidate
        // pivot magnitudes come from one row of the inverse at a time
        std::vector<double> w(m), brow(m);
        for (int i = 0; i < m; ++i) {
            if (basis[i] < n_real) continue;
            for (int j = 0; j < m; ++j) brow[j] = binv[std::size_t(j) * m + i];
            int pick = -1;
            double best = kPivAccept;
            for (int j = 0; j < n_real; ++j) {
                if (state[j] == kBasic) continue;
                double alpha = 0.0;
                for (auto [row, val] : cols[j]) alpha += brow[row] * val;
                if (std::abs(alpha) > best) {
                    best = std::abs(alpha);
                    pick = j;
                }
            }
            if (pick >= 0) {
                ftran(pick, w);
                const int art = basis[i];
                state[art] = kAtLower;
                basis[i] = pick;
                state[pick] = kBasic;
                xb[i] = nonbasic_value(pick); // degenerate: step is zero
                eta_update(w, i);
            }
        }
        for (int i = 0; i < m; ++i) {
            const int aj = n_real + i;
            upper[aj] = 0.0; // never re-enters
            if (state[aj] != kBasic) state[aj] = kAtLower;
        }

        has_basis = true;
        return finish_phase2(sol, iters, max_iter);
    }

    LpSolution finish_phase2(LpSolution sol, int iters, int max_iter) {
        LpStatus st = iterate(cost, max_iter, iters);
        sol.iterations = iters;
        sol.status = st;
        if (st != LpStatus::Optimal) {
            has_basis = st != LpStatus::IterationLimit;
            return sol;
        }
        extract(sol);
        if (sol.max_residual > 1e-8) {
            // one repair attempt: rebuild the inverse and re-extract
            if (refactor()) {
                int more = 0;
                st = iterate(cost, max_iter, more);
                sol.iterations += more;
                sol.status = st;
                if (st == LpStatus::Optimal) extract(sol);
            }
            if (sol.max_residual > 1e-8) sol.status = LpStatus::IterationLimit;
        }
        has_basis = sol.status == LpStatus::Optimal;
        return sol;
    }

    void extract(LpSolution& sol) const {
        std::vector<double> x(n_total, 0.0);
        for (int j = 0; j < n_total; ++j)
            if (state[j] != kBasic) x[j] = nonbasic_value(j);
        for (int i = 0; i < m; ++i) x[basis[i]] = xb[i];

        sol.x.assign(x.begin(), x.begin() + n_struct);
        double obj = 0.0;
        for (int j = 0; j < n_struct; ++j) obj += orig_cost[j] * x[j];
        sol.objective = obj;

        double res = 0.0;
        std::vector<double> ax(m, 0.0);
        for (int j = 0; j < n_total; ++j) {
            if (x[j] == 0.0) continue;
            for (auto [row, val] : cols[j]) ax[row] += val * x[j];
        }
        for (int i = 0; i < m; ++i) res = std::max(res, std::abs(ax[i] - rhs[i]));
        for (int j = 0; j < n_total; ++j) {
            if (std::isfinite(lower[j])) res = std::max(res, lower[j] - x[j]);
            if (std::isfinite(upper[j])) res = std::max(res, x[j] - upper[j]);
        }
        sol.max_residual = res / feas_scale;
    }
};

SimplexSolver::SimplexSolver(LinearProgram lp) : impl_(new Impl) {
    impl_->build(lp);
}

SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

LpSolution SimplexSolver::solve() { return impl_->run_cold(); }

LpSolution SimplexSolver::resolve(const std::vector<double>& new_objective) {
    require(new_objective.size() == std::size_t(impl_->n_struct),
            "resolve: objective length mismatch");
    for (int j = 0; j < impl_->n_struct; ++j) {
        impl_->orig_cost[j] = new_objective[j];
        impl_->cost[j] = impl_->sense_sign * new_objective[j];
    }
    if (!impl_->has_basis) return impl_->run_cold();
    LpSolution sol;
    const int max_iter = 5000 + 10 * (impl_->m + impl_->n_total);
    sol = impl_->finish_phase2(sol, 0, max_iter);
    if (sol.status == LpStatus::IterationLimit) return impl_->run_cold();
    return sol;
}

LpSolution solve(const LinearProgram& lp) {
    SimplexSolver solver(lp);
    return solver.solve();
}

std::string dump(const LinearProgram& lp) {
    std::ostringstream os;
    os.precision(12);
    os << (lp.sense == LpSense::Maximize ? "max" : "min");
    for (double c : lp.objective) os << ' ' << c;
    os << '\n';
    for (std::size_t i = 0; i < lp.eq_rows.size(); ++i) {
        os << "eq";
        for (double v : lp.eq_rows[i]) os << ' ' << v;
        os << " | " << lp.eq_rhs[i] << '\n';
    }
    for (std::size_t i = 0; i < lp.le_rows.size(); ++i) {
        os << "le";
        for (double v : lp.le_rows[i]) os << ' ' << v;
        os << " | " << lp.le_rhs[i] << '\n';
    }
    os << "bounds";
    for (std::size_t j = 0; j < lp.num_vars(); ++j)
        os << " [" << lp.lower[j] << ',' << lp.upper[j] << ']';
    os << '\n';
    return os.str();
}

} // namespace certeq
