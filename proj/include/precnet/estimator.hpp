#pragma once

#include <optional>
#include <vector>

#include "precnet/glasso.hpp"
#include "precnet/linalg.hpp"
#include "precnet/penalties.hpp"

namespace precnet {

// p x p boolean pattern, row-major.
class Mask {
public:
    Mask() = default;
    explicit Mask(std::size_t dim, bool fill = false) : dim_(dim), bits_(dim * dim, fill) {}

    std::size_t dim() const noexcept { return dim_; }
    bool operator()(std::size_t i, std::size_t j) const { return bits_[i * dim_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool v) { bits_[i * dim_ + j] = v ? 1 : 0; }
    // Number of true off-diagonal entries (both (i,j) and (j,i) counted).
    std::size_t off_diagonal_count() const;

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<unsigned char> bits_;
};

enum class LlaMode { OneStep, Iterate };

// Auto: inverse sample covariance when p < n (and s is nonsingular), the
// LASSO estimate at the same lambda otherwise.
enum class InitPolicy { Auto, InverseSample, Lasso };

struct EstimatorOptions {
    LlaMode mode = LlaMode::OneStep;
    int max_lla_iters = 20;
    double lla_tol = 1e-4;
    InitPolicy init_policy = InitPolicy::Auto;
    // Explicit initial estimate; overrides init_policy.
    std::optional<SymMatrix> init;
    double sparsity_threshold = 1e-3;
    SolverOptions solver;

    void validate() const;
};

struct PrecisionEstimate {
    SpdMatrix omega;
    SymMatrix w;
    Mask pattern;
    std::vector<double> objective_trace;
    PenaltySpec penalty;
    double lambda_used = 0.0;
    int sweeps_used = 0;
    bool converged = false;
};

// Penalized estimate of the precision matrix from a sample covariance s
// computed from n observations.
PrecisionEstimate estimate(const SymMatrix& s, std::size_t n, const PenaltySpec& penalty,
                           const EstimatorOptions& opts = {});

// Optional shortcut used along lambda ladders: a LASSO solution already
// computed for (s, penalty.lambda) that may be reused as the initial estimate
// and warm start.
PrecisionEstimate estimate(const SymMatrix& s, std::size_t n, const PenaltySpec& penalty,
                           const EstimatorOptions& opts, const GlassoSolution* lasso_at_lambda);

// Q(omega) = log det omega - tr(s omega) - sum_ij p_lambda(|omega_ij|).
double penalized_objective(const SpdMatrix& omega, const SymMatrix& s, const PenaltySpec& penalty,
                           bool penalize_diagonal = true);

// |omega_ij| >= tau, diagonal forced true.
Mask threshold_sparsify(const SymMatrix& omega, double tau);

}  // namespace precnet
