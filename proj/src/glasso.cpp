#include "precnet/glasso.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "precnet/error.hpp"

namespace precnet {

namespace {

double soft_threshold(double g, double t) {
    if (g > t) return g - t;
    if (g < -t) return g + t;
    return 0.0;
}

// Column-wise lasso state for the block update of column j:
//   minimize 1/2 b' W11 b - s12' b + sum_i lam_ij |b_i|
// over b in R^p with b_j fixed at zero. r tracks W b (all p rows).
class ColumnLasso {
public:
    ColumnLasso(std::size_t p, const std::vector<double>& w, const std::vector<double>& s,
                const std::vector<double>& lam, double tol, int max_passes)
        : p_(p), w_(w), s_(s), lam_(lam), tol_(tol), max_passes_(max_passes), r_(p) {}

    // Runs coordinate descent in place on beta (length p) for column j and
    // leaves W11 beta in r().
    void solve(std::size_t j, std::span<double> beta) {
        std::fill(r_.begin(), r_.end(), 0.0);
        for (std::size_t k = 0; k < p_; ++k) {
            if (k == j) continue;
            if (lam_[k * p_ + j] == WeightMatrix::kHardZero) beta[k] = 0.0;
            if (beta[k] == 0.0) continue;
            const double* wk = &w_[k * p_];
            for (std::size_t i = 0; i < p_; ++i) r_[i] += wk[i] * beta[k];
        }

        int passes = 0;
        while (passes < max_passes_) {
            double max_step = 0.0;
            for (std::size_t i = 0; i < p_; ++i)
                if (i != j) max_step = std::max(max_step, update(j, i, beta));
            ++passes;
            if (diverged_ || max_step < tol_) break;
            // Iterate on the active set until it settles, then re-check all.
            while (passes < max_passes_) {
                double active_step = 0.0;
                for (std::size_t i = 0; i < p_; ++i)
                    if (i != j && beta[i] != 0.0) active_step = std::max(active_step, update(j, i, beta));
                ++passes;
                if (diverged_ || active_step < tol_) break;
            }
        }
    }

    // Set once a coordinate update produced a non-finite value.
    bool diverged() const noexcept { return diverged_; }

    const std::vector<double>& r() const noexcept { return r_; }

private:
    double update(std::size_t j, std::size_t i, std::span<double> beta) {
        const double level = lam_[i * p_ + j];
        if (level == WeightMatrix::kHardZero) return 0.0;
        const double wii = w_[i * p_ + i];
        const double g = s_[i * p_ + j] - (r_[i] - wii * beta[i]);
        const double next = soft_threshold(g, level) / wii;
        const double delta = next - beta[i];
        if (delta == 0.0) return 0.0;
        if (!std::isfinite(next)) {
            diverged_ = true;
            return 0.0;
        }
        beta[i] = next;
        const double* wi = &w_[i * p_];
        for (std::size_t k = 0; k < p_; ++k) r_[k] += wi[k] * delta;
        return std::abs(delta);
    }

    std::size_t p_;
    const std::vector<double>& w_;
    const std::vector<double>& s_;
    const std::vector<double>& lam_;
    double tol_;
    int max_passes_;
    bool diverged_ = false;
    std::vector<double> r_;
};

std::vector<double> dense(const SymMatrix& m) {
    const std::size_t p = m.dim();
    std::vector<double> d(p * p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j <= i; ++j) d[i * p + j] = d[j * p + i] = m(i, j);
    return d;
}

SymMatrix packed_from(const std::vector<double>& d, std::size_t p) {
    SymMatrix m(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j <= i; ++j) m(i, j) = d[i * p + j];
    return m;
}

double log_det_dense(const std::vector<double>& d, std::size_t p) {
    return log_det_spd(SpdMatrix(packed_from(d, p)));
}

}  // namespace

WeightMatrix::WeightMatrix(SymMatrix values) : values_(std::move(values)) {
    for (double v : values_.packed())
        if (std::isnan(v) || v < 0.0)
            throw InvalidWeight("WeightMatrix: entries must be nonnegative, got " + std::to_string(v));
}

WeightMatrix WeightMatrix::constant(std::size_t dim, double level) {
    return WeightMatrix(SymMatrix(dim, level));
}

void SolverOptions::validate() const {
    if (!(tol > 0.0)) throw InvalidParameter("SolverOptions: tol must be positive");
    if (!(inner_tol > 0.0)) throw InvalidParameter("SolverOptions: inner_tol must be positive");
    if (max_sweeps < 1) throw InvalidParameter("SolverOptions: max_sweeps must be at least 1");
    if (max_inner_passes < 1) throw InvalidParameter("SolverOptions: max_inner_passes must be at least 1");
}

WarmStart warm_start_from(const GlassoSolution& sol) { return {sol.w.sym(), sol.omega.sym()}; }

double off_diagonal_scale(const SymMatrix& s) {
    const std::size_t p = s.dim();
    if (p > 1) {
        double sum = 0.0;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < i; ++j) sum += std::abs(s(i, j));
        const double mean = sum / (0.5 * static_cast<double>(p * (p - 1)));
        if (mean > 0.0) return mean;
    }
    double diag = 0.0;
    for (std::size_t i = 0; i < p; ++i) diag += std::abs(s(i, i));
    return diag / static_cast<double>(p);
}

double weighted_l1_objective(const SpdMatrix& omega, const SymMatrix& s, const WeightMatrix& lam,
                             bool penalize_diagonal) {
    const std::size_t p = omega.dim();
    if (s.dim() != p || lam.dim() != p) throw DimensionMismatch("weighted_l1_objective: dimensions differ");
    double penalty = 0.0;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            if (i == j && !penalize_diagonal) continue;
            const double v = std::abs(omega(i, j));
            if (v == 0.0) continue;  // also covers hard zeros (inf * 0)
            penalty += (i == j ? 1.0 : 2.0) * lam(i, j) * v;
        }
    return log_det_spd(omega) - trace_product(s, omega.sym()) - penalty;
}

GlassoSolution solve_weighted_glasso(const SymMatrix& s, const WeightMatrix& lam,
                                     const SolverOptions& opts, const WarmStart* warm) {
    opts.validate();
    const std::size_t p = s.dim();
    if (lam.dim() != p)
        throw DimensionMismatch("solve_weighted_glasso: s is " + std::to_string(p) +
                                "-dimensional but weights are " + std::to_string(lam.dim()));
    if (!s.all_finite()) throw InvalidParameter("solve_weighted_glasso: s has non-finite entries");
    for (std::size_t i = 0; i < p; ++i) {
        if (!(s(i, i) > 0.0))
            throw InvalidParameter("solve_weighted_glasso: s has a nonpositive diagonal entry");
        if (opts.penalize_diagonal && lam.is_hard_zero(i, i))
            throw InvalidWeight("solve_weighted_glasso: diagonal weight cannot be infinite");
    }
    if (warm && (warm->w.dim() != p || warm->omega.dim() != p))
        throw DimensionMismatch("solve_weighted_glasso: warm start has wrong dimension");

    const std::vector<double> sd = dense(s);
    const std::vector<double> ld = dense(lam.values());
    std::vector<double> w = warm ? dense(warm->w) : sd;
    for (std::size_t i = 0; i < p; ++i)
        w[i * p + i] = s(i, i) + (opts.penalize_diagonal ? lam(i, i) : 0.0);

    // beta[j * p + i] holds the lasso coefficient of row i for column j.
    std::vector<double> beta(p * p, 0.0);
    if (warm) {
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t i = 0; i < p; ++i)
                if (i != j && !lam.is_hard_zero(i, j))
                    beta[j * p + i] = -warm->omega(i, j) / warm->omega(j, j);
    }

    GlassoSolution sol;
    const double threshold = opts.tol * off_diagonal_scale(s);
    const double pairs = static_cast<double>(p * (p - 1));
    ColumnLasso lasso(p, w, sd, ld, opts.inner_tol, opts.max_inner_passes);

    if (p > 1) {
        for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
            double change = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                std::span<double> bj(&beta[j * p], p);
                lasso.solve(j, bj);
                const auto& r = lasso.r();
                // Happens when the weighted problem has no bounded maximizer.
                if (lasso.diverged())
                    throw NotPositiveDefinite("solve_weighted_glasso: iterates diverged at column " +
                                              std::to_string(j) + " in sweep " + std::to_string(sweep));
                for (std::size_t i = 0; i < p; ++i) {
                    if (i == j) continue;
                    change += std::abs(r[i] - w[i * p + j]);
                    w[i * p + j] = w[j * p + i] = r[i];
                }
            }
            sol.sweeps_used = sweep;
            if (opts.record_trace) sol.logdet_w_trace.push_back(log_det_dense(w, p));
            if (change / pairs <= threshold) {
                sol.converged = true;
                break;
            }
        }
    } else {
        sol.converged = true;
        if (opts.record_trace) sol.logdet_w_trace.push_back(std::log(w[0]));
    }

    // Recover Omega column by column from W and beta, then symmetrize.
    std::vector<double> om(p * p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double quad = 0.0;
        for (std::size_t i = 0; i < p; ++i)
            if (i != j) quad += w[i * p + j] * beta[j * p + i];
        const double denom = w[j * p + j] - quad;
        if (!(denom > 0.0))
            throw NotPositiveDefinite("solve_weighted_glasso: working covariance lost definiteness at column " +
                                      std::to_string(j));
        const double ojj = 1.0 / denom;
        om[j * p + j] = ojj;
        for (std::size_t i = 0; i < p; ++i)
            if (i != j) om[i * p + j] = -beta[j * p + i] * ojj;
    }
    SymMatrix omega(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j <= i; ++j) omega(i, j) = 0.5 * (om[i * p + j] + om[j * p + i]);

    if (!omega.all_finite()) throw NotPositiveDefinite("solve_weighted_glasso: recovered precision is not finite");
    sol.omega = SpdMatrix(std::move(omega));
    sol.w = SpdMatrix(packed_from(w, p));
    sol.objective = weighted_l1_objective(sol.omega, s, lam, opts.penalize_diagonal);
    return sol;
}

namespace {

double kkt_violation(const SymMatrix& w, const SpdMatrix& omega, const SymMatrix& s, const WeightMatrix& lam,
                     bool penalize_diagonal) {
    const std::size_t p = omega.dim();
    double worst = 0.0;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double g = w(i, j) - s(i, j);
            double v;
            if (i == j) {
                v = std::abs(g - (penalize_diagonal ? lam(i, i) : 0.0));
            } else if (lam.is_hard_zero(i, j)) {
                v = omega(i, j) == 0.0 ? 0.0 : WeightMatrix::kHardZero;
            } else if (omega(i, j) != 0.0) {
                v = std::abs(g - lam(i, j) * (omega(i, j) > 0.0 ? 1.0 : -1.0));
            } else {
                v = std::max(0.0, std::abs(g) - lam(i, j));
            }
            worst = std::max(worst, v);
        }
    return worst;
}

}  // namespace

double kkt_residual(const SpdMatrix& omega, const SymMatrix& s, const WeightMatrix& lam,
                    bool penalize_diagonal) {
    if (s.dim() != omega.dim() || lam.dim() != omega.dim()) throw DimensionMismatch("kkt_residual: dimensions differ");
    return kkt_violation(spd_inverse(omega).sym(), omega, s, lam, penalize_diagonal);
}

double kkt_residual(const GlassoSolution& sol, const SymMatrix& s, const WeightMatrix& lam,
                    bool penalize_diagonal) {
    const std::size_t p = sol.omega.dim();
    if (s.dim() != p || lam.dim() != p || sol.w.dim() != p) throw DimensionMismatch("kkt_residual: dimensions differ");
    return kkt_violation(sol.w.sym(), sol.omega, s, lam, penalize_diagonal);
}

}  // namespace precnet
