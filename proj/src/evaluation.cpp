#include "precnet/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "precnet/error.hpp"
#include "precnet/parallel.hpp"
#include "precnet/rng.hpp"

namespace precnet {

void CvConfig::validate() const {
    if (folds < 2) throw InvalidParameter("CvConfig: need at least 2 folds");
    if (grid.empty()) throw InvalidParameter("CvConfig: lambda grid is empty");
    for (double l : grid)
        if (!(l >= 0.0) || !std::isfinite(l)) throw InvalidParameter("CvConfig: grid values must be nonnegative");
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, int k, std::uint64_t seed) {
    if (k < 2) throw InvalidParameter("make_folds: need at least 2 folds");
    const auto kk = static_cast<std::size_t>(k);
    if (n < kk)
        throw DegenerateFold("make_folds: " + std::to_string(n) + " samples cannot fill " + std::to_string(k) +
                             " folds");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    RngStream rng(seed);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    std::vector<std::vector<std::size_t>> folds(kk);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < kk; ++f) {
        const std::size_t size = n / kk + (f < n % kk ? 1 : 0);
        folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                        order.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += size;
    }
    return folds;
}

double cv_fold_term(const DataMatrix& held_out, const SpdMatrix& omega) {
    if (held_out.p() != omega.dim()) throw DimensionMismatch("cv_fold_term: dimensions differ");
    double quad = 0.0;
    for (std::size_t i = 0; i < held_out.n(); ++i) quad += quadratic_form(omega.sym(), held_out.row(i));
    return static_cast<double>(held_out.n()) * log_det_spd(omega) - quad;
}

namespace {

struct FoldData {
    SymMatrix s;
    std::size_t n_train = 0;
    DataMatrix held_out;
};

FoldData split_fold(const DataMatrix& x, const std::vector<std::vector<std::size_t>>& folds, std::size_t f) {
    if (folds[f].empty()) throw DegenerateFold("cross-validation fold " + std::to_string(f) + " is empty");
    std::vector<char> in_fold(x.n(), 0);
    for (std::size_t i : folds[f]) in_fold.at(i) = 1;
    std::vector<std::size_t> train;
    for (std::size_t i = 0; i < x.n(); ++i)
        if (!in_fold[i]) train.push_back(i);
    if (train.empty()) throw DegenerateFold("cross-validation fold " + std::to_string(f) + " leaves no training data");
    DataMatrix tr = x.select_rows(train);
    return {sample_covariance(tr), tr.n(), x.select_rows(folds[f])};
}

std::size_t argmax_prefer_larger(const std::vector<double>& grid, const std::vector<double>& scores) {
    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g)
        if (scores[g] > scores[best] || (scores[g] == scores[best] && grid[g] > grid[best])) best = g;
    return best;
}

}  // namespace

double cv_score(const DataMatrix& x, const PenaltySpec& penalty,
                const std::vector<std::vector<std::size_t>>& folds, const EstimatorOptions& opts) {
    double total = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const FoldData fd = split_fold(x, folds, f);
        const PrecisionEstimate est = estimate(fd.s, fd.n_train, penalty, opts);
        total += cv_fold_term(fd.held_out, est.omega);
    }
    return total;
}

double cv_score(const DataMatrix& x, const PenaltySpec& penalty, int folds, std::uint64_t seed,
                const EstimatorOptions& opts) {
    return cv_score(x, penalty, make_folds(x.n(), folds, seed), opts);
}

std::vector<LambdaSelection> select_lambda_many(const DataMatrix& x, std::span<const PenaltySpec> penalties,
                                                const CvConfig& cfg, const EstimatorOptions& opts) {
    cfg.validate();
    const auto folds = make_folds(x.n(), cfg.folds, cfg.seed);
    const std::size_t n_grid = cfg.grid.size();
    const std::size_t n_pen = penalties.size();

    std::vector<std::size_t> order(n_grid);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cfg.grid[a] > cfg.grid[b]; });

    // terms[f][m * n_grid + g]
    std::vector<std::vector<double>> terms(folds.size(), std::vector<double>(n_pen * n_grid, 0.0));
    parallel_for(folds.size(), cfg.threads, [&](std::size_t f) {
        const FoldData fd = split_fold(x, folds, f);
        const std::size_t p = fd.s.dim();
        bool need_lasso = false;
        for (const PenaltySpec& pen : penalties) {
            const bool has_init = pen.init || opts.init;
            const bool lasso_init = opts.init_policy == InitPolicy::Lasso ||
                                    (opts.init_policy == InitPolicy::Auto && p >= fd.n_train);
            if (pen.kind == PenaltyKind::Lasso || (!has_init && lasso_init)) need_lasso = true;
        }
        std::optional<GlassoSolution> lasso;
        for (std::size_t g : order) {
            const double lambda = cfg.grid[g];
            if (need_lasso) {
                std::optional<WarmStart> warm;
                if (lasso) warm = warm_start_from(*lasso);
                lasso = solve_weighted_glasso(fd.s, WeightMatrix::constant(p, lambda), opts.solver,
                                              warm ? &*warm : nullptr);
            }
            for (std::size_t m = 0; m < n_pen; ++m) {
                // A weighted problem without a bounded maximizer scores -inf.
                double term = -std::numeric_limits<double>::infinity();
                try {
                    const PrecisionEstimate est = estimate(fd.s, fd.n_train, penalties[m].with_lambda(lambda), opts,
                                                           lasso ? &*lasso : nullptr);
                    term = cv_fold_term(fd.held_out, est.omega);
                } catch (const NotPositiveDefinite&) {
                }
                terms[f][m * n_grid + g] = term;
            }
        }
    });

    std::vector<LambdaSelection> out(n_pen);
    for (std::size_t m = 0; m < n_pen; ++m) {
        LambdaSelection& sel = out[m];
        sel.grid = cfg.grid;
        sel.scores.assign(n_grid, 0.0);
        for (std::size_t f = 0; f < folds.size(); ++f)
            for (std::size_t g = 0; g < n_grid; ++g) sel.scores[g] += terms[f][m * n_grid + g];
        sel.lambda = sel.grid[argmax_prefer_larger(sel.grid, sel.scores)];
    }
    return out;
}

LambdaSelection select_lambda(const DataMatrix& x, const PenaltySpec& penalty, const CvConfig& cfg,
                              const EstimatorOptions& opts) {
    return select_lambda_many(x, std::span<const PenaltySpec>(&penalty, 1), cfg, opts).front();
}

std::vector<double> default_lambda_grid(const SymMatrix& s, std::size_t count, double ratio) {
    if (count == 0) throw InvalidParameter("default_lambda_grid: count must be positive");
    if (!(ratio >= 1.0)) throw InvalidParameter("default_lambda_grid: ratio must be at least 1");
    double top = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i)
        for (std::size_t j = 0; j < i; ++j) top = std::max(top, std::abs(s(i, j)));
    if (top == 0.0)
        for (std::size_t i = 0; i < s.dim(); ++i) top = std::max(top, std::abs(s(i, i)));
    if (top == 0.0) top = 1.0;
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double frac = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
        grid[k] = top * std::pow(ratio, -frac);
    }
    return grid;
}

namespace {

// Sigma * est where Sigma = truth^-1, as a dense matrix.
Matrix relative_precision(const SpdMatrix& truth, const SpdMatrix& est) {
    if (truth.dim() != est.dim()) throw DimensionMismatch("loss: dimensions differ");
    return multiply(spd_inverse(truth).sym().to_dense(), est.sym().to_dense());
}

}  // namespace

double entropy_loss(const SpdMatrix& truth, const SpdMatrix& est) {
    const Matrix a = relative_precision(truth, est);
    double tr = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) tr += a(i, i);
    const double log_det = log_det_spd(est) - log_det_spd(truth);
    return tr - log_det - static_cast<double>(truth.dim());
}

double quadratic_loss(const SpdMatrix& truth, const SpdMatrix& est) {
    Matrix a = relative_precision(truth, est);
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) -= 1.0;
    double r = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r += a(i, j) * a(j, i);
    return r;
}

SparsityErrors sparsity_errors(const Mask& truth, const Mask& est) {
    if (truth.dim() != est.dim()) throw DimensionMismatch("sparsity_errors: dimensions differ");
    SparsityErrors e;
    for (std::size_t i = 0; i < truth.dim(); ++i)
        for (std::size_t j = 0; j < truth.dim(); ++j) {
            if (i == j) continue;
            if (truth(i, j)) {
                ++e.n2;
                if (!est(i, j)) ++e.zero2;
            } else {
                ++e.n1;
                if (est(i, j)) ++e.zero1;
            }
        }
    e.perc1 = e.n1 == 0 ? 0.0 : 100.0 * static_cast<double>(e.zero1) / static_cast<double>(e.n1);
    e.perc2 = e.n2 == 0 ? 0.0 : 100.0 * static_cast<double>(e.zero2) / static_cast<double>(e.n2);
    return e;
}

Matrix relative_frequency_matrix(std::span<const Mask> patterns) {
    if (patterns.empty()) throw EmptyInput("relative_frequency_matrix: no patterns");
    const std::size_t p = patterns.front().dim();
    Matrix freq(p, p);
    for (const Mask& m : patterns) {
        if (m.dim() != p) throw DimensionMismatch("relative_frequency_matrix: dimensions differ");
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j)
                if (i == j || m(i, j)) freq(i, j) += 1.0;
    }
    for (double& v : freq.values()) v /= static_cast<double>(patterns.size());
    return freq;
}

ClassificationMetrics classification_metrics(const ConfusionCounts& c) {
    const auto d = [](std::size_t v) { return static_cast<double>(v); };
    ClassificationMetrics m;
    m.specificity = c.tn + c.fp == 0 ? 0.0 : d(c.tn) / d(c.tn + c.fp);
    m.sensitivity = c.tp + c.fn == 0 ? 0.0 : d(c.tp) / d(c.tp + c.fn);
    const double denom = d(c.tp + c.fp) * d(c.tp + c.fn) * d(c.tn + c.fp) * d(c.tn + c.fn);
    m.mcc = denom == 0.0 ? 0.0 : (d(c.tp) * d(c.tn) - d(c.fp) * d(c.fn)) / std::sqrt(denom);
    return m;
}

Vector aafe(const Matrix& predicted, const Matrix& actual) {
    if (predicted.rows() != actual.rows() || predicted.cols() != actual.cols())
        throw DimensionMismatch("aafe: predicted and actual shapes differ");
    if (predicted.rows() == 0) throw EmptyInput("aafe: no test rows");
    Vector out(predicted.cols(), 0.0);
    for (std::size_t i = 0; i < predicted.rows(); ++i)
        for (std::size_t t = 0; t < predicted.cols(); ++t) out[t] += std::abs(predicted(i, t) - actual(i, t));
    for (double& v : out) v /= static_cast<double>(predicted.rows());
    return out;
}

}  // namespace precnet
