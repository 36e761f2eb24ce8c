#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "precnet/linalg.hpp"

namespace precnet {

// Symmetric nonnegative per-entry penalty levels. An entry equal to
// WeightMatrix::kHardZero pins the corresponding precision entry at zero.
class WeightMatrix {
public:
    static constexpr double kHardZero = std::numeric_limits<double>::infinity();

    WeightMatrix() = default;
    // Throws InvalidWeight on negative or NaN entries.
    explicit WeightMatrix(SymMatrix values);
    static WeightMatrix constant(std::size_t dim, double level);

    std::size_t dim() const noexcept { return values_.dim(); }
    double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
    bool is_hard_zero(std::size_t i, std::size_t j) const { return values_(i, j) == kHardZero; }
    const SymMatrix& values() const noexcept { return values_; }

private:
    SymMatrix values_;
};

struct SolverOptions {
    double tol = 1e-4;
    int max_sweeps = 200;
    double inner_tol = 1e-6;
    // Coordinate-descent passes allowed per column subproblem.
    int max_inner_passes = 1000;
    bool penalize_diagonal = true;
    // Record log det W after every sweep (costs one factorization per sweep).
    bool record_trace = false;

    void validate() const;
};

struct GlassoSolution {
    SpdMatrix omega;
    SpdMatrix w;
    int sweeps_used = 0;
    bool converged = false;
    double objective = 0.0;
    // log det W after each sweep when SolverOptions::record_trace is set.
    std::vector<double> logdet_w_trace;
};

// Previous solution used to initialize a solve (e.g. along a lambda ladder).
struct WarmStart {
    SymMatrix w;
    SymMatrix omega;
};

WarmStart warm_start_from(const GlassoSolution& sol);

// Maximizes log det(Omega) - tr(s Omega) - sum_ij lam_ij |omega_ij| over SPD
// Omega by block coordinate descent on the working covariance W, one column
// at a time, each column a weighted lasso solved by cyclic coordinate descent.
GlassoSolution solve_weighted_glasso(const SymMatrix& s, const WeightMatrix& lam,
                                     const SolverOptions& opts = {},
                                     const WarmStart* warm = nullptr);

// Largest violation of the subgradient optimality conditions, evaluated at
// the solver's working covariance. Zero means exact stationarity.
double kkt_residual(const GlassoSolution& sol, const SymMatrix& s, const WeightMatrix& lam,
                    bool penalize_diagonal = true);
// Same conditions for an arbitrary SPD omega, with W = omega^-1.
double kkt_residual(const SpdMatrix& omega, const SymMatrix& s, const WeightMatrix& lam,
                    bool penalize_diagonal = true);

double weighted_l1_objective(const SpdMatrix& omega, const SymMatrix& s, const WeightMatrix& lam,
                             bool penalize_diagonal = true);

// Mean |s_ij| over i != j; falls back to the mean |s_ii| when that is zero.
double off_diagonal_scale(const SymMatrix& s);

}  // namespace precnet
