#include "precnet/estimator.hpp"

#include <cmath>

#include "precnet/error.hpp"

namespace precnet {

std::size_t Mask::off_diagonal_count() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            if (i != j && (*this)(i, j)) ++count;
    return count;
}

void EstimatorOptions::validate() const {
    if (!(sparsity_threshold >= 0.0)) throw InvalidParameter("estimator: threshold must be nonnegative");
    if (max_lla_iters < 1) throw InvalidParameter("estimator: max_lla_iters must be at least 1");
    if (!(lla_tol > 0.0)) throw InvalidParameter("estimator: lla_tol must be positive");
    solver.validate();
}

Mask threshold_sparsify(const SymMatrix& omega, double tau) {
    if (!(tau >= 0.0)) throw InvalidParameter("threshold_sparsify: tau must be nonnegative");
    const std::size_t p = omega.dim();
    Mask m(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) m.set(i, j, i == j || std::abs(omega(i, j)) >= tau);
    return m;
}

double penalized_objective(const SpdMatrix& omega, const SymMatrix& s, const PenaltySpec& penalty,
                           bool penalize_diagonal) {
    penalty.validate();
    const std::size_t p = omega.dim();
    if (s.dim() != p) throw DimensionMismatch("penalized_objective: dimensions differ");
    if (penalty.kind == PenaltyKind::AdaptiveLasso) {
        if (!penalty.init) throw InvalidParameter("penalized_objective: adaptive lasso needs its initial estimate");
        if (penalty.init->dim() != p) throw DimensionMismatch("penalized_objective: initial estimate dimension");
        return weighted_l1_objective(omega, s, adaptive_weights(*penalty.init, penalty.gamma, penalty.lambda),
                                     penalize_diagonal);
    }
    double pen = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        if (penalize_diagonal) pen += penalty_value(penalty, omega(i, i));
        for (std::size_t j = 0; j < i; ++j) pen += 2.0 * penalty_value(penalty, omega(i, j));
    }
    return log_det_spd(omega) - trace_product(s, omega.sym()) - pen;
}

namespace {

struct Initial {
    SymMatrix omega;
    std::optional<GlassoSolution> lasso;  // set when the initial is a LASSO fit
};

Initial initial_estimate(const SymMatrix& s, std::size_t n, const PenaltySpec& penalty,
                         const EstimatorOptions& opts, const GlassoSolution* lasso_at_lambda) {
    const std::size_t p = s.dim();
    const std::optional<SymMatrix>& explicit_init = penalty.init ? penalty.init : opts.init;
    if (explicit_init) {
        if (explicit_init->dim() != p) throw DimensionMismatch("estimate: initial estimate has wrong dimension");
        return {*explicit_init, std::nullopt};
    }
    const bool try_inverse = opts.init_policy == InitPolicy::InverseSample ||
                             (opts.init_policy == InitPolicy::Auto && p < n);
    if (try_inverse) {
        try {
            return {spd_inverse(SpdMatrix(s)).sym(), std::nullopt};
        } catch (const NotPositiveDefinite&) {
            if (opts.init_policy == InitPolicy::InverseSample) throw;
        }
    }
    if (lasso_at_lambda) return {lasso_at_lambda->omega.sym(), *lasso_at_lambda};
    GlassoSolution sol = solve_weighted_glasso(s, WeightMatrix::constant(p, penalty.lambda), opts.solver);
    SymMatrix omega = sol.omega.sym();
    return {std::move(omega), std::move(sol)};
}

PrecisionEstimate finish(GlassoSolution sol, const SymMatrix& s, PenaltySpec penalty,
                         const EstimatorOptions& opts, std::vector<double> trace) {
    PrecisionEstimate est;
    est.pattern = threshold_sparsify(sol.omega.sym(), opts.sparsity_threshold);
    est.lambda_used = penalty.lambda;
    est.sweeps_used = sol.sweeps_used;
    est.converged = sol.converged;
    if (trace.empty())
        trace.push_back(penalized_objective(sol.omega, s, penalty, opts.solver.penalize_diagonal));
    est.objective_trace = std::move(trace);
    est.w = sol.w.sym();
    est.omega = std::move(sol.omega);
    est.penalty = std::move(penalty);
    return est;
}

}  // namespace

PrecisionEstimate estimate(const SymMatrix& s, std::size_t n, const PenaltySpec& penalty,
                           const EstimatorOptions& opts, const GlassoSolution* lasso_at_lambda) {
    penalty.validate();
    opts.validate();
    const std::size_t p = s.dim();

    switch (penalty.kind) {
        case PenaltyKind::Lasso: {
            GlassoSolution sol = lasso_at_lambda
                                     ? *lasso_at_lambda
                                     : solve_weighted_glasso(s, WeightMatrix::constant(p, penalty.lambda),
                                                             opts.solver);
            return finish(std::move(sol), s, penalty, opts, {});
        }

        case PenaltyKind::AdaptiveLasso: {
            Initial init = initial_estimate(s, n, penalty, opts, lasso_at_lambda);
            const WeightMatrix lam = adaptive_weights(init.omega, penalty.gamma, penalty.lambda);
            std::optional<WarmStart> warm;
            if (init.lasso) warm = warm_start_from(*init.lasso);
            GlassoSolution sol = solve_weighted_glasso(s, lam, opts.solver, warm ? &*warm : nullptr);
            PenaltySpec used = penalty;
            used.init = std::move(init.omega);
            return finish(std::move(sol), s, std::move(used), opts, {});
        }

        case PenaltyKind::Scad: {
            if (opts.mode == LlaMode::OneStep) {
                Initial init = initial_estimate(s, n, penalty, opts, lasso_at_lambda);
                std::optional<WarmStart> warm;
                if (init.lasso) warm = warm_start_from(*init.lasso);
                GlassoSolution sol = solve_weighted_glasso(s, lla_weights(init.omega, penalty), opts.solver,
                                                           warm ? &*warm : nullptr);
                return finish(std::move(sol), s, penalty, opts, {});
            }

            // Fully iterative LLA; every step is a cold solve of the weighted
            // problem so the k-th iterate does not depend on solver history.
            SymMatrix current = initial_estimate(s, n, penalty, opts, lasso_at_lambda).omega;
            std::vector<double> trace;
            std::optional<GlassoSolution> sol;
            for (int k = 0; k < opts.max_lla_iters; ++k) {
                sol = solve_weighted_glasso(s, lla_weights(current, penalty), opts.solver);
                trace.push_back(penalized_objective(sol->omega, s, penalty, opts.solver.penalize_diagonal));
                const double change = max_abs_diff(sol->omega.sym(), current);
                current = sol->omega.sym();
                if (change <= opts.lla_tol) break;
            }
            return finish(std::move(*sol), s, penalty, opts, std::move(trace));
        }
    }
    throw InvalidParameter("estimate: unknown penalty kind");
}

PrecisionEstimate estimate(const SymMatrix& s, std::size_t n, const PenaltySpec& penalty,
                           const EstimatorOptions& opts) {
    return estimate(s, n, penalty, opts, nullptr);
}

}  // namespace precnet
