#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "precnet/estimator.hpp"
#include "precnet/linalg.hpp"
#include "precnet/penalties.hpp"
#include "precnet/rng.hpp"

namespace precnet {

// Covariance exp(-a |s_i - s_j|) at sorted sites with Unif(0.5, 1) spacings;
// returns its inverse, which is tridiagonal up to rounding.
SpdMatrix gen_ar1_precision(std::size_t p, double a, RngStream& rng);

// p uniform points on the unit square, union-symmetrized k-nearest-neighbour
// graph, edge values uniform on [-1,-0.5] u [0.5,1], diagonal twice the
// absolute row sum, then scaled to unit diagonal by D^-1/2 M D^-1/2.
SpdMatrix gen_knn_precision(std::size_t p, std::size_t k, RngStream& rng);

// omega_ij = exp(-2 |i - j|).
SpdMatrix gen_exp_decay_precision(std::size_t p);

// n i.i.d. rows from N(0, omega^-1).
DataMatrix sample_gaussian(std::size_t n, const SpdMatrix& omega, RngStream& rng);

enum class Family { Ar1, Knn, ExpDecay };

std::string_view to_string(Family f);
Family parse_family(std::string_view name);

struct ExperimentConfig {
    Family family = Family::Ar1;
    double ar1_rate = 1.0;
    std::size_t knn_k = 2;
    std::size_t p = 30;
    std::size_t n = 120;
    int reps = 20;
    // Only kind, a, gamma are used; lambda is chosen by cross-validation.
    std::vector<PenaltySpec> penalties;
    int folds = 6;
    std::size_t grid_size = 20;
    double grid_ratio = 100.0;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    EstimatorOptions estimator;

    void validate() const;
};

struct MetricSummary {
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation over replications
    double se = 0.0;  // sd / sqrt(reps)
};

MetricSummary summarize(std::span<const double> values);

struct PenaltyReport {
    PenaltySpec penalty;
    MetricSummary loss1, loss2, zero1, zero2, perc1, perc2;
    MetricSummary nonzero;  // off-diagonal nonzero entries of the estimate
    MetricSummary lambda;
    bool all_spd = true;
    Matrix frequency;
};

struct ExperimentReport {
    ExperimentConfig config;
    SpdMatrix truth;
    Mask true_pattern;
    std::vector<PenaltyReport> rows;  // one per configured penalty, same order
};

// Fixes one true precision matrix for the family, then for every replication
// samples data, tunes each penalty by cross-validation, refits on the full
// sample and accumulates losses and sparsity errors.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

SpdMatrix generate_truth(const ExperimentConfig& cfg);

}  // namespace precnet
