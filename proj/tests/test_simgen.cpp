#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "precnet/error.hpp"
#include "precnet/simgen.hpp"

using namespace precnet;

namespace {

ExperimentConfig small_experiment(Family family) {
    ExperimentConfig cfg;
    cfg.family = family;
    cfg.p = 8;
    cfg.n = 40;
    cfg.reps = 3;
    cfg.grid_size = 5;
    cfg.folds = 4;
    cfg.seed = 17;
    cfg.penalties = {PenaltySpec::lasso(0), PenaltySpec::scad(0), PenaltySpec::adaptive(0)};
    return cfg;
}

void check_same(const ExperimentReport& a, const ExperimentReport& b) {
    REQUIRE(a.rows.size() == b.rows.size());
    CHECK(a.truth.sym() == b.truth.sym());
    for (std::size_t m = 0; m < a.rows.size(); ++m) {
        CHECK(a.rows[m].loss1.mean == b.rows[m].loss1.mean);
        CHECK(a.rows[m].loss2.mean == b.rows[m].loss2.mean);
        CHECK(a.rows[m].zero1.mean == b.rows[m].zero1.mean);
        CHECK(a.rows[m].zero2.mean == b.rows[m].zero2.mean);
        CHECK(a.rows[m].lambda.mean == b.rows[m].lambda.mean);
        CHECK(a.rows[m].frequency == b.rows[m].frequency);
    }
}

}  // namespace

TEST_SUITE("simgen") {

TEST_CASE("ar1 precision is tridiagonal with a Markov covariance") {
    RngStream rng(3);
    const std::size_t p = 30;
    const SpdMatrix omega = gen_ar1_precision(p, 1.0, rng);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 2; j < p; ++j) CHECK(std::abs(omega(i, j)) <= 1e-8);

    const oracle::Dense sigma = oracle::gauss_jordan_inverse(oracle::dense(omega.sym()));
    for (std::size_t i = 0; i < p; ++i) CHECK(sigma[i][i] == doctest::Approx(1.0).epsilon(1e-8));
    for (std::size_t i = 0; i + 1 < p; ++i) {
        // neighbour correlation exp(-gap) with gap in [0.5, 1]
        CHECK(sigma[i][i + 1] >= std::exp(-1.0) - 1e-9);
        CHECK(sigma[i][i + 1] <= std::exp(-0.5) + 1e-9);
        if (i + 2 < p) CHECK(std::abs(sigma[i][i + 2] - sigma[i][i + 1] * sigma[i + 1][i + 2]) <= 1e-8);
    }
}

TEST_CASE("ar1 precision for p = 2 has the closed form") {
    RngStream rng(9);
    const SpdMatrix omega = gen_ar1_precision(2, 1.0, rng);
    const double rho = -omega(0, 1) / omega(0, 0);
    CHECK(rho >= std::exp(-1.0) - 1e-12);
    CHECK(rho <= std::exp(-0.5) + 1e-12);
    CHECK(omega(0, 0) == doctest::Approx(1.0 / (1.0 - rho * rho)).epsilon(1e-12));
    CHECK(omega(1, 1) == doctest::Approx(omega(0, 0)).epsilon(1e-12));
}

TEST_CASE("ar1 rate scales the correlations") {
    RngStream a(4), b(4);
    const SpdMatrix fast = gen_ar1_precision(5, 2.0, a), slow = gen_ar1_precision(5, 1.0, b);
    const oracle::Dense sf = oracle::gauss_jordan_inverse(oracle::dense(fast.sym()));
    const oracle::Dense ss = oracle::gauss_jordan_inverse(oracle::dense(slow.sym()));
    for (std::size_t i = 0; i + 1 < 5; ++i) CHECK(sf[i][i + 1] == doctest::Approx(ss[i][i + 1] * ss[i][i + 1]).epsilon(1e-8));
    RngStream c(1);
    CHECK_THROWS_AS(gen_ar1_precision(5, 0.0, c), InvalidParameter);
}

TEST_CASE("knn precision structure") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        for (std::size_t k : {1u, 2u, 4u}) {
            RngStream rng(seed);
            const std::size_t p = 30;
            const SpdMatrix omega = gen_knn_precision(p, k, rng);
            std::size_t nnz = 0;
            for (std::size_t i = 0; i < p; ++i) {
                CHECK(omega(i, i) == doctest::Approx(1.0).epsilon(1e-14));
                std::size_t row = 0;
                for (std::size_t j = 0; j < p; ++j)
                    if (j != i && omega(i, j) != 0.0) ++row;
                CHECK(row >= k);
                nnz += row;
            }
            CHECK(nnz >= p * k);
            CHECK(nnz <= 2 * p * k);
            CHECK(oracle::jacobi_eigenvalues(oracle::dense(omega.sym())).front() > 0.0);
        }
    }
}

TEST_CASE("knn with p = 3 and k = 1 follows the recipe step by step") {
    RngStream rng(12), trace(12);
    const SpdMatrix omega = gen_knn_precision(3, 1, rng);

    double x[3], y[3];
    for (int i = 0; i < 3; ++i) {
        x[i] = trace.uniform();
        y[i] = trace.uniform();
    }
    const auto d2 = [&](int a, int b) { return (x[a] - x[b]) * (x[a] - x[b]) + (y[a] - y[b]) * (y[a] - y[b]); };
    bool edge[3][3] = {};
    for (int i = 0; i < 3; ++i) {
        const int u = (i + 1) % 3, v = (i + 2) % 3;
        int nearest = d2(i, u) < d2(i, v) || (d2(i, u) == d2(i, v) && u < v) ? u : v;
        edge[std::min(i, nearest)][std::max(i, nearest)] = true;
    }
    double m[3][3] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (edge[i][j]) {
                const double mag = trace.uniform(0.5, 1.0);
                m[i][j] = m[j][i] = trace.uniform() < 0.5 ? -mag : mag;
            }
    for (int i = 0; i < 3; ++i) m[i][i] = 2.0 * (std::abs(m[i][(i + 1) % 3]) + std::abs(m[i][(i + 2) % 3]));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double expected = i == j ? 1.0 : m[i][j] / std::sqrt(m[i][i] * m[j][j]);
            CHECK(omega(i, j) == doctest::Approx(expected).epsilon(1e-14));
        }
}

TEST_CASE("exponential decay precision") {
    const SpdMatrix omega = gen_exp_decay_precision(6);
    CHECK(omega(0, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(omega(0, 1) == doctest::Approx(0.135335).epsilon(1e-6));
    CHECK(omega(2, 5) == doctest::Approx(std::exp(-6.0)).epsilon(1e-15));
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(omega(i, i) == 1.0);
        for (std::size_t j = 0; j < 6; ++j)
            CHECK(omega(i, j) == omega(j, i));
    }
    for (std::size_t i = 0; i + 1 < 6; ++i)
        for (std::size_t j = i + 1; j + 1 < 6; ++j) CHECK(omega(i, j) == omega(i + 1, j + 1));
}

TEST_CASE("sampler moments for the identity precision") {
    RngStream rng(99);
    const std::size_t n = 100000;
    const DataMatrix x = sample_gaussian(n, SpdMatrix(SymMatrix::identity(2)), rng);
    const SymMatrix s = sample_covariance(x);
    const double bound = 3.0 * std::sqrt(2.0 / static_cast<double>(n));
    CHECK(std::abs(s(0, 0) - 1.0) <= bound);
    CHECK(std::abs(s(1, 1) - 1.0) <= bound);
    CHECK(std::abs(s(0, 1)) <= bound);
    for (double m : column_means(x)) CHECK(std::abs(m) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("gaussian sampler is deterministic and reproduces the covariance") {
    RngStream r1(5), r2(5);
    const SpdMatrix omega = gen_ar1_precision(4, 1.0, r1);
    (void)gen_ar1_precision(4, 1.0, r2);
    const DataMatrix a = sample_gaussian(50, omega, r1), b = sample_gaussian(50, omega, r2);
    CHECK(a.values() == b.values());

    const std::size_t n = 100000;
    const DataMatrix big = sample_gaussian(n, omega, r1);
    const oracle::Dense sigma = oracle::gauss_jordan_inverse(oracle::dense(omega.sym()));
    for (std::size_t j = 0; j < 4; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += big(i, j);
        mean /= static_cast<double>(n);
        CHECK(std::abs(mean) <= 5.0 / std::sqrt(static_cast<double>(n)));
    }
    const SymMatrix s = sample_covariance(big);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t k = 0; k < 4; ++k)
            CHECK(std::abs(s(j, k) - sigma[j][k]) <= 6.0 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("summaries use the sample standard deviation") {
    const double v[] = {1.0, 2.0, 3.0};
    const MetricSummary s = summarize(v);
    CHECK(s.mean == 2.0);
    CHECK(s.sd == doctest::Approx(1.0));
    CHECK(s.se == doctest::Approx(1.0 / std::sqrt(3.0)));
    const double one[] = {4.0};
    CHECK(summarize(one).sd == 0.0);
}

TEST_CASE("family names round-trip") {
    for (Family f : {Family::Ar1, Family::Knn, Family::ExpDecay}) CHECK(parse_family(to_string(f)) == f);
    CHECK_THROWS_AS(parse_family("banded"), InvalidParameter);
}

TEST_CASE("experiments are reproducible and independent of the thread count") {
    for (Family f : {Family::Ar1, Family::Knn}) {
        ExperimentConfig cfg = small_experiment(f);
        cfg.threads = 1;
        const ExperimentReport serial = run_experiment(cfg);
        check_same(serial, run_experiment(cfg));
        cfg.threads = 4;
        check_same(serial, run_experiment(cfg));
        for (const PenaltyReport& row : serial.rows) {
            CHECK(row.all_spd);
            CHECK(row.loss1.mean >= 0.0);
            CHECK(row.loss2.mean >= 0.0);
        }
    }
}

TEST_CASE("single replication reports are deterministic") {
    ExperimentConfig cfg = small_experiment(Family::Knn);
    cfg.reps = 1;
    const ExperimentReport a = run_experiment(cfg), b = run_experiment(cfg);
    check_same(a, b);
    for (std::size_t m = 0; m < a.rows.size(); ++m) {
        CHECK(a.rows[m].loss1.sd == b.rows[m].loss1.sd);
        CHECK(a.rows[m].nonzero.mean == b.rows[m].nonzero.mean);
    }
}

TEST_CASE("experiment configuration is validated") {
    ExperimentConfig cfg = small_experiment(Family::Ar1);
    cfg.reps = 0;
    CHECK_THROWS_AS(run_experiment(cfg), InvalidParameter);
    cfg = small_experiment(Family::Ar1);
    cfg.penalties.clear();
    CHECK_THROWS_AS(run_experiment(cfg), InvalidParameter);
    cfg = small_experiment(Family::Knn);
    cfg.knn_k = 0;
    CHECK_THROWS_AS(run_experiment(cfg), InvalidParameter);
}

}  // TEST_SUITE
