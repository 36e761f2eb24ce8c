#include "precnet/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "precnet/error.hpp"
#include "precnet/evaluation.hpp"
#include "precnet/parallel.hpp"

namespace precnet {

SpdMatrix gen_ar1_precision(std::size_t p, double a, RngStream& rng) {
    if (p < 2) throw InvalidParameter("gen_ar1_precision: p must be at least 2");
    if (!(a > 0.0)) throw InvalidParameter("gen_ar1_precision: rate must be positive");
    std::vector<double> site(p, 0.0);
    for (std::size_t i = 1; i < p; ++i) site[i] = site[i - 1] + rng.uniform(0.5, 1.0);
    SymMatrix sigma(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j <= i; ++j) sigma(i, j) = std::exp(-a * std::abs(site[i] - site[j]));
    return spd_inverse(SpdMatrix(std::move(sigma)));
}

SpdMatrix gen_knn_precision(std::size_t p, std::size_t k, RngStream& rng) {
    if (p < 2) throw InvalidParameter("gen_knn_precision: p must be at least 2");
    if (k < 1 || k >= p) throw InvalidParameter("gen_knn_precision: need 1 <= k < p");

    std::vector<double> x(p), y(p);
    constexpr int kMaxDraws = 100;
    bool distinct = false;
    for (int attempt = 0; attempt < kMaxDraws && !distinct; ++attempt) {
        for (std::size_t i = 0; i < p; ++i) {
            x[i] = rng.uniform();
            y[i] = rng.uniform();
        }
        distinct = true;
        for (std::size_t i = 0; i < p && distinct; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (x[i] == x[j] && y[i] == y[j]) {
                    distinct = false;
                    break;
                }
    }
    if (!distinct) throw DegenerateGeometry("gen_knn_precision: could not draw distinct points");

    std::set<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::size_t> others(p - 1);
    for (std::size_t i = 0; i < p; ++i) {
        std::size_t c = 0;
        for (std::size_t j = 0; j < p; ++j)
            if (j != i) others[c++] = j;
        const auto dist2 = [&](std::size_t j) {
            const double dx = x[i] - x[j], dy = y[i] - y[j];
            return dx * dx + dy * dy;
        };
        std::stable_sort(others.begin(), others.end(),
                         [&](std::size_t u, std::size_t v) { return dist2(u) < dist2(v); });
        for (std::size_t r = 0; r < k; ++r) edges.insert({std::min(i, others[r]), std::max(i, others[r])});
    }

    SymMatrix m(p);
    for (const auto& [i, j] : edges) {
        const double magnitude = rng.uniform(0.5, 1.0);
        m(i, j) = rng.uniform() < 0.5 ? -magnitude : magnitude;
    }
    for (std::size_t i = 0; i < p; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < p; ++j)
            if (j != i) row += std::abs(m(i, j));
        m(i, i) = 2.0 * row;
    }
    SymMatrix omega(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            omega(i, j) = i == j ? 1.0 : m(i, j) / std::sqrt(m(i, i) * m(j, j));
    return SpdMatrix(std::move(omega));
}

SpdMatrix gen_exp_decay_precision(std::size_t p) {
    SymMatrix omega(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j <= i; ++j) omega(i, j) = std::exp(-2.0 * static_cast<double>(i - j));
    return SpdMatrix(std::move(omega));
}

DataMatrix sample_gaussian(std::size_t n, const SpdMatrix& omega, RngStream& rng) {
    if (n == 0) throw InvalidParameter("sample_gaussian: n must be positive");
    const std::size_t p = omega.dim();
    const Matrix& l = omega.factor();
    Matrix out(n, p);
    std::vector<double> z(p);
    for (std::size_t r = 0; r < n; ++r) {
        for (double& v : z) v = rng.normal();
        // Solve L' x = z so that cov(x) = (L L')^-1.
        auto x = out.row(r);
        for (std::size_t i = p; i-- > 0;) {
            double v = z[i];
            for (std::size_t k = i + 1; k < p; ++k) v -= l(k, i) * x[k];
            x[i] = v / l(i, i);
        }
    }
    return DataMatrix(std::move(out));
}

std::string_view to_string(Family f) {
    switch (f) {
        case Family::Ar1: return "ar1";
        case Family::Knn: return "knn";
        case Family::ExpDecay: return "exp_decay";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    if (name == "ar1") return Family::Ar1;
    if (name == "knn") return Family::Knn;
    if (name == "exp_decay") return Family::ExpDecay;
    throw InvalidParameter("unknown family '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
    if (p < 2) throw InvalidParameter("experiment: p must be at least 2");
    if (n < 2) throw InvalidParameter("experiment: n must be at least 2");
    if (reps < 1) throw InvalidParameter("experiment: reps must be at least 1");
    if (penalties.empty()) throw InvalidParameter("experiment: no penalties configured");
    if (folds < 2 || static_cast<std::size_t>(folds) > n) throw InvalidParameter("experiment: need 2 <= folds <= n");
    if (grid_size < 1) throw InvalidParameter("experiment: grid_size must be positive");
    if (!(grid_ratio >= 1.0)) throw InvalidParameter("experiment: grid_ratio must be at least 1");
    if (family == Family::Ar1 && !(ar1_rate > 0.0)) throw InvalidParameter("experiment: ar1 rate must be positive");
    if (family == Family::Knn && (knn_k < 1 || knn_k >= p)) throw InvalidParameter("experiment: need 1 <= k < p");
    for (const PenaltySpec& pen : penalties) pen.validate();
    estimator.validate();
}

MetricSummary summarize(std::span<const double> values) {
    MetricSummary s;
    if (values.empty()) return s;
    const double count = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / count;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / (count - 1.0));
        s.se = s.sd / std::sqrt(count);
    }
    return s;
}

SpdMatrix generate_truth(const ExperimentConfig& cfg) {
    RngStream rng = RngStream(cfg.seed).child(0);
    switch (cfg.family) {
        case Family::Ar1: return gen_ar1_precision(cfg.p, cfg.ar1_rate, rng);
        case Family::Knn: return gen_knn_precision(cfg.p, cfg.knn_k, rng);
        case Family::ExpDecay: return gen_exp_decay_precision(cfg.p);
    }
    throw InvalidParameter("generate_truth: unknown family");
}

namespace {

struct RepResult {
    std::vector<double> loss1, loss2, perc1, perc2, lambda;
    std::vector<std::size_t> zero1, zero2, nonzero;
    std::vector<Mask> patterns;
    std::vector<bool> spd;
};

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport report;
    report.config = cfg;
    report.truth = generate_truth(cfg);
    report.true_pattern = threshold_sparsify(report.truth.sym(), cfg.estimator.sparsity_threshold);

    const std::size_t reps = static_cast<std::size_t>(cfg.reps);
    const std::size_t n_pen = cfg.penalties.size();
    std::vector<RepResult> results(reps);
    const RngStream master(cfg.seed);

    parallel_for(reps, cfg.threads, [&](std::size_t r) {
        RngStream rng = master.child(r + 1);
        const DataMatrix data = sample_gaussian(cfg.n, report.truth, rng);
        const SymMatrix s = sample_covariance(data);

        CvConfig cv;
        cv.folds = cfg.folds;
        cv.grid = default_lambda_grid(s, cfg.grid_size, cfg.grid_ratio);
        cv.seed = rng.next_u64();
        cv.threads = 1;
        const auto selections = select_lambda_many(data, cfg.penalties, cv, cfg.estimator);

        RepResult& out = results[r];
        for (std::size_t m = 0; m < n_pen; ++m) {
            const PrecisionEstimate est =
                estimate(s, cfg.n, cfg.penalties[m].with_lambda(selections[m].lambda), cfg.estimator);
            const SparsityErrors err = sparsity_errors(report.true_pattern, est.pattern);
            out.loss1.push_back(entropy_loss(report.truth, est.omega));
            out.loss2.push_back(quadratic_loss(report.truth, est.omega));
            out.zero1.push_back(err.zero1);
            out.zero2.push_back(err.zero2);
            out.perc1.push_back(err.perc1);
            out.perc2.push_back(err.perc2);
            out.nonzero.push_back(est.pattern.off_diagonal_count());
            out.lambda.push_back(selections[m].lambda);
            out.spd.push_back(true);  // est.omega carries a Cholesky certificate
            out.patterns.push_back(est.pattern);
        }
    });

    for (std::size_t m = 0; m < n_pen; ++m) {
        PenaltyReport row;
        row.penalty = cfg.penalties[m];
        std::vector<double> l1, l2, z1, z2, p1, p2, nz, lam;
        std::vector<Mask> patterns;
        for (const RepResult& res : results) {
            l1.push_back(res.loss1[m]);
            l2.push_back(res.loss2[m]);
            z1.push_back(static_cast<double>(res.zero1[m]));
            z2.push_back(static_cast<double>(res.zero2[m]));
            p1.push_back(res.perc1[m]);
            p2.push_back(res.perc2[m]);
            nz.push_back(static_cast<double>(res.nonzero[m]));
            lam.push_back(res.lambda[m]);
            row.all_spd = row.all_spd && res.spd[m];
            patterns.push_back(res.patterns[m]);
        }
        row.loss1 = summarize(l1);
        row.loss2 = summarize(l2);
        row.zero1 = summarize(z1);
        row.zero2 = summarize(z2);
        row.perc1 = summarize(p1);
        row.perc2 = summarize(p2);
        row.nonzero = summarize(nz);
        row.lambda = summarize(lam);
        row.frequency = relative_frequency_matrix(patterns);
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace precnet
