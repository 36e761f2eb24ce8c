#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "precnet/estimator.hpp"
#include "precnet/linalg.hpp"
#include "precnet/penalties.hpp"

namespace precnet {

struct CvConfig {
    int folds = 6;
    std::vector<double> grid;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    void validate() const;
};

// Seeded shuffle of 0..n-1 cut into k contiguous blocks; the first n mod k
// folds receive one extra sample. Throws DegenerateFold when n < k.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, int k, std::uint64_t seed);

// n_k log det(omega) - sum_{i in fold} x_i' omega x_i for one held-out block.
double cv_fold_term(const DataMatrix& held_out, const SpdMatrix& omega);

// K-fold cross-validation score at penalty.lambda (larger is better).
double cv_score(const DataMatrix& x, const PenaltySpec& penalty, int folds, std::uint64_t seed,
                const EstimatorOptions& opts = {});
// Same score on an explicit partition.
double cv_score(const DataMatrix& x, const PenaltySpec& penalty,
                const std::vector<std::vector<std::size_t>>& folds, const EstimatorOptions& opts = {});

struct LambdaSelection {
    double lambda = 0.0;
    std::vector<double> grid;
    std::vector<double> scores;  // aligned with grid
};

// Grid search maximizing the CV score; ties go to the larger lambda.
LambdaSelection select_lambda(const DataMatrix& x, const PenaltySpec& penalty, const CvConfig& cfg,
                              const EstimatorOptions& opts = {});

// Runs the grid search for several penalties on one shared partition. Within
// each fold the grid is walked from the largest lambda down, warm-starting the
// LASSO fits and reusing them as initial estimates where the penalty needs one.
std::vector<LambdaSelection> select_lambda_many(const DataMatrix& x, std::span<const PenaltySpec> penalties,
                                                const CvConfig& cfg, const EstimatorOptions& opts = {});

// `count` log-spaced values from the smallest constant lambda that zeroes all
// LASSO off-diagonals (max_{i != j} |s_ij|) down to that value / ratio.
std::vector<double> default_lambda_grid(const SymMatrix& s, std::size_t count = 20, double ratio = 100.0);

// tr(Omega^-1 Omega_hat) - log det(Omega^-1 Omega_hat) - p.
double entropy_loss(const SpdMatrix& truth, const SpdMatrix& est);
// tr((Omega^-1 Omega_hat - I)^2).
double quadratic_loss(const SpdMatrix& truth, const SpdMatrix& est);

struct SparsityErrors {
    std::size_t zero1 = 0;  // true zero, estimated nonzero
    std::size_t zero2 = 0;  // true nonzero, estimated zero
    std::size_t n1 = 0;     // off-diagonal true zeros
    std::size_t n2 = 0;     // off-diagonal true nonzeros
    double perc1 = 0.0;
    double perc2 = 0.0;
};

// Counts run over off-diagonal entries, (i,j) and (j,i) separately.
SparsityErrors sparsity_errors(const Mask& truth, const Mask& est);

Matrix relative_frequency_matrix(std::span<const Mask> patterns);

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
};

struct ClassificationMetrics {
    double specificity = 0.0;
    double sensitivity = 0.0;
    double mcc = 0.0;
};

// Ratios with a zero denominator are reported as 0.
ClassificationMetrics classification_metrics(const ConfusionCounts& c);

// Rows are test days, columns time coordinates; returns one mean absolute
// error per column.
Vector aafe(const Matrix& predicted, const Matrix& actual);

}  // namespace precnet
