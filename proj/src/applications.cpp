#include "precnet/applications.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "precnet/error.hpp"
#include "precnet/rng.hpp"

namespace precnet {

Matrix variance_stabilize(const Matrix& counts) {
    Matrix out(counts.rows(), counts.cols());
    for (std::size_t i = 0; i < counts.rows(); ++i)
        for (std::size_t j = 0; j < counts.cols(); ++j) {
            const double v = counts(i, j);
            if (!(v >= 0.0))
                throw NegativeCount("variance_stabilize: negative count at row " + std::to_string(i + 1) +
                                    ", column " + std::to_string(j + 1));
            out(i, j) = std::sqrt(v + 0.25);
        }
    return out;
}

void ForecastModel::validate() const {
    const std::size_t p = omega.dim();
    if (mean.size() != p) throw DimensionMismatch("ForecastModel: mean length differs from omega dimension");
    if (split < 1 || split >= p) throw InvalidParameter("ForecastModel: need 1 <= split < p");
}

namespace {

SymMatrix block(const SymMatrix& m, std::size_t begin, std::size_t end) {
    SymMatrix b(end - begin);
    for (std::size_t i = begin; i < end; ++i)
        for (std::size_t j = begin; j <= i; ++j) b(i - begin, j - begin) = m(i, j);
    return b;
}

Vector centered_early(const ForecastModel& m, std::span<const double> y1) {
    if (y1.size() != m.split)
        throw DimensionMismatch("conditional_forecast: expected " + std::to_string(m.split) + " early values");
    Vector d(m.split);
    for (std::size_t i = 0; i < m.split; ++i) d[i] = y1[i] - m.mean[i];
    return d;
}

}  // namespace

Vector conditional_forecast(const ForecastModel& m, std::span<const double> y1) {
    m.validate();
    const std::size_t p = m.omega.dim();
    const std::size_t q = m.split;
    const Vector d = centered_early(m, y1);
    const SymMatrix sigma = spd_inverse(m.omega).sym();
    const Vector coef = spd_solve(SpdMatrix(block(sigma, 0, q)), d);  // Sigma11^-1 (y1 - mu1)
    Vector out(p - q);
    for (std::size_t i = q; i < p; ++i) {
        double v = m.mean[i];
        for (std::size_t k = 0; k < q; ++k) v += sigma(i, k) * coef[k];
        out[i - q] = v;
    }
    return out;
}

Vector conditional_forecast_precision(const ForecastModel& m, std::span<const double> y1) {
    m.validate();
    const std::size_t p = m.omega.dim();
    const std::size_t q = m.split;
    const Vector d = centered_early(m, y1);
    Vector rhs(p - q, 0.0);  // Omega21 (y1 - mu1)
    for (std::size_t i = q; i < p; ++i)
        for (std::size_t k = 0; k < q; ++k) rhs[i - q] += m.omega(i, k) * d[k];
    const Vector shift = spd_solve(SpdMatrix(block(m.omega.sym(), q, p)), rhs);
    Vector out(p - q);
    for (std::size_t i = q; i < p; ++i) out[i - q] = m.mean[i] - shift[i - q];
    return out;
}

namespace {

struct ClassSplit {
    std::vector<std::size_t> class1, class2;
};

ClassSplit split_classes(const DataMatrix& x, const Labels& labels) {
    if (labels.size() != x.n()) throw DimensionMismatch("labels: expected one label per row");
    ClassSplit c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) c.class1.push_back(i);
        else if (labels[i] == 2) c.class2.push_back(i);
        else throw InvalidParameter("labels must be 1 or 2, got " + std::to_string(labels[i]));
    }
    if (c.class1.empty() || c.class2.empty()) throw DegenerateClass("both classes need at least one sample");
    return c;
}

Vector class_mean(const DataMatrix& x, const std::vector<std::size_t>& rows) {
    Vector mean(x.p(), 0.0);
    for (std::size_t i : rows)
        for (std::size_t j = 0; j < x.p(); ++j) mean[j] += x(i, j);
    for (double& v : mean) v /= static_cast<double>(rows.size());
    return mean;
}

}  // namespace

std::vector<double> two_sample_t_statistics(const DataMatrix& x, const Labels& labels) {
    const ClassSplit c = split_classes(x, labels);
    if (c.class1.size() < 2 || c.class2.size() < 2)
        throw DegenerateClass("two-sample t-test needs at least 2 samples per class");
    const double n1 = static_cast<double>(c.class1.size());
    const double n2 = static_cast<double>(c.class2.size());
    const Vector m1 = class_mean(x, c.class1);
    const Vector m2 = class_mean(x, c.class2);
    std::vector<double> t(x.p());
    for (std::size_t j = 0; j < x.p(); ++j) {
        double ss = 0.0;
        for (std::size_t i : c.class1) ss += (x(i, j) - m1[j]) * (x(i, j) - m1[j]);
        for (std::size_t i : c.class2) ss += (x(i, j) - m2[j]) * (x(i, j) - m2[j]);
        const double pooled_sd = std::sqrt(ss / (n1 + n2 - 2.0));
        const double diff = m1[j] - m2[j];
        const double se = pooled_sd * std::sqrt(1.0 / n1 + 1.0 / n2);
        if (se > 0.0) t[j] = diff / se;
        else t[j] = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    return t;
}

std::vector<std::size_t> two_sample_t_select(const DataMatrix& x, const Labels& labels, std::size_t m) {
    if (m > x.p()) throw InvalidParameter("two_sample_t_select: m exceeds the number of features");
    const std::vector<double> t = two_sample_t_statistics(x, labels);
    std::vector<std::size_t> order(x.p());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(t[a]) > std::abs(t[b]); });
    order.resize(m);
    return order;
}

Vector feature_scales(const DataMatrix& x) {
    const Vector mean = column_means(x);
    Vector sd(x.p(), 0.0);
    for (std::size_t i = 0; i < x.n(); ++i)
        for (std::size_t j = 0; j < x.p(); ++j) sd[j] += (x(i, j) - mean[j]) * (x(i, j) - mean[j]);
    for (double& v : sd) v = std::sqrt(v / static_cast<double>(x.n()));
    return sd;
}

DataMatrix divide_columns(const DataMatrix& x, std::span<const double> scale) {
    if (scale.size() != x.p()) throw DimensionMismatch("divide_columns: one scale per column expected");
    Matrix m = x.values();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (scale[j] > 0.0) m(i, j) /= scale[j];
    return DataMatrix(std::move(m));
}

DataMatrix within_class_residuals(const DataMatrix& x, const Labels& labels) {
    const ClassSplit c = split_classes(x, labels);
    const Vector m1 = class_mean(x, c.class1);
    const Vector m2 = class_mean(x, c.class2);
    Matrix r(x.n(), x.p());
    for (std::size_t i = 0; i < x.n(); ++i) {
        const Vector& mu = labels[i] == 1 ? m1 : m2;
        for (std::size_t j = 0; j < x.p(); ++j) r(i, j) = x(i, j) - mu[j];
    }
    return DataMatrix(std::move(r));
}

LdaModel lda_train(const DataMatrix& x, const Labels& labels, const PenaltySpec& penalty, const LdaOptions& opts) {
    const ClassSplit c = split_classes(x, labels);
    LdaModel model;
    model.mean1 = class_mean(x, c.class1);
    model.mean2 = class_mean(x, c.class2);
    model.prior1 = static_cast<double>(c.class1.size()) / static_cast<double>(x.n());
    model.prior2 = static_cast<double>(c.class2.size()) / static_cast<double>(x.n());

    const DataMatrix residuals = within_class_residuals(x, labels);
    const SymMatrix pooled = sample_covariance(residuals);
    double lambda = penalty.lambda;
    if (opts.cv) {
        CvConfig cv = *opts.cv;
        if (cv.grid.empty()) cv.grid = default_lambda_grid(pooled);
        lambda = select_lambda(residuals, penalty, cv, opts.estimator).lambda;
    }
    model.omega = estimate(pooled, x.n(), penalty.with_lambda(lambda), opts.estimator).omega;
    return model;
}

LdaDecision lda_classify(const LdaModel& model, std::span<const double> x) {
    const std::size_t p = model.omega.dim();
    if (x.size() != p || model.mean1.size() != p || model.mean2.size() != p)
        throw DimensionMismatch("lda_classify: dimensions differ");
    const auto score = [&](const Vector& mu, double prior) {
        const Vector om = mat_vec(model.omega.sym(), mu);
        double xt = 0.0, mt = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            xt += x[j] * om[j];
            mt += mu[j] * om[j];
        }
        return xt - 0.5 * mt + std::log(prior);
    };
    LdaDecision d;
    d.score1 = score(model.mean1, model.prior1);
    d.score2 = score(model.mean2, model.prior2);
    d.label = d.score1 >= d.score2 ? 1 : 2;
    return d;
}

ConfusionCounts confusion(const Labels& truth, const Labels& predicted) {
    if (truth.size() != predicted.size()) throw DimensionMismatch("confusion: label vectors differ in length");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool actual_pos = truth[i] == 1;
        const bool pred_pos = predicted[i] == 1;
        if (actual_pos && pred_pos) ++c.tp;
        else if (actual_pos) ++c.fn;
        else if (pred_pos) ++c.fp;
        else ++c.tn;
    }
    return c;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const Labels& labels, std::size_t test_class1, std::size_t test_class2, std::uint64_t seed) {
    std::vector<std::size_t> c1, c2;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? c1 : c2).push_back(i);
    if (test_class1 > c1.size() || test_class2 > c2.size())
        throw InvalidParameter("stratified_split: requested more test samples than a class holds");
    RngStream rng(seed);
    const auto shuffle = [&](std::vector<std::size_t>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
    };
    shuffle(c1);
    shuffle(c2);
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < c1.size(); ++i) (i < test_class1 ? test : train).push_back(c1[i]);
    for (std::size_t i = 0; i < c2.size(); ++i) (i < test_class2 ? test : train).push_back(c2[i]);
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {train, test};
}

}  // namespace precnet
