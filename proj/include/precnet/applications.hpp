#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "precnet/estimator.hpp"
#include "precnet/evaluation.hpp"
#include "precnet/linalg.hpp"

namespace precnet {

// sqrt(N + 1/4) elementwise; throws NegativeCount.
Matrix variance_stabilize(const Matrix& counts);

// Mean and precision of y = (y1', y2')' where y1 holds the first `split`
// coordinates.
struct ForecastModel {
    Vector mean;
    SpdMatrix omega;
    std::size_t split = 0;

    void validate() const;
};

// E(y2 | y1) = mu2 + Sigma21 Sigma11^-1 (y1 - mu1) via the covariance blocks.
Vector conditional_forecast(const ForecastModel& m, std::span<const double> y1);
// The same conditional mean from the precision blocks:
// mu2 - Omega22^-1 Omega21 (y1 - mu1).
Vector conditional_forecast_precision(const ForecastModel& m, std::span<const double> y1);

// Binary class labels are 1 and 2; class 1 is the "positive" class.
using Labels = std::vector<int>;

// Indices of the m features with the largest |t| (pooled-variance two-sample
// t statistic), ties to the lower index. Throws DegenerateClass if a class
// has fewer than 2 samples.
std::vector<std::size_t> two_sample_t_select(const DataMatrix& x, const Labels& labels, std::size_t m);
std::vector<double> two_sample_t_statistics(const DataMatrix& x, const Labels& labels);

// Per-feature standard deviation (divisor n) estimated on training data.
Vector feature_scales(const DataMatrix& x);
DataMatrix divide_columns(const DataMatrix& x, std::span<const double> scale);

struct LdaModel {
    Vector mean1, mean2;
    double prior1 = 0.5, prior2 = 0.5;
    SpdMatrix omega;
};

struct LdaOptions {
    EstimatorOptions estimator;
    // When set, lambda is chosen on the pooled within-class residuals by CV.
    std::optional<CvConfig> cv;
};

// Residuals of each sample from its own class mean, stacked.
DataMatrix within_class_residuals(const DataMatrix& x, const Labels& labels);

LdaModel lda_train(const DataMatrix& x, const Labels& labels, const PenaltySpec& penalty,
                   const LdaOptions& opts = {});

struct LdaDecision {
    int label = 1;
    double score1 = 0.0;
    double score2 = 0.0;
};

LdaDecision lda_classify(const LdaModel& model, std::span<const double> x);

ConfusionCounts confusion(const Labels& truth, const Labels& predicted);

// Random test set with fixed per-class counts; returns (train, test) indices,
// each sorted ascending.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const Labels& labels, std::size_t test_class1, std::size_t test_class2, std::uint64_t seed);

}  // namespace precnet
