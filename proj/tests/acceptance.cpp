// Acceptance runner: prints one PASS/FAIL line per criterion. With no
// arguments every criterion runs; otherwise only the listed numbers.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "precnet/applications.hpp"
#include "precnet/error.hpp"
#include "precnet/estimator.hpp"
#include "precnet/evaluation.hpp"
#include "precnet/glasso.hpp"
#include "precnet/penalties.hpp"
#include "precnet/simgen.hpp"

using namespace precnet;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// b exceeds a by at least 10% of b.
bool below_with_margin(double a, double b) { return a < b && (b - a) >= 0.1 * b; }

std::vector<PenaltySpec> three_penalties() {
    return {PenaltySpec::lasso(0), PenaltySpec::adaptive(0), PenaltySpec::scad(0)};
}

const PenaltyReport& row_of(const ExperimentReport& r, PenaltyKind k) {
    for (const PenaltyReport& row : r.rows)
        if (row.penalty.kind == k) return row;
    throw InvalidParameter("penalty missing from report");
}

Outcome solver_vs_brute_force() {
    RngStream rng(101);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const std::size_t p = 2 + static_cast<std::size_t>(k % 2);
        Matrix x(p + 8, p);
        for (double& v : x.values()) v = rng.normal();
        const SymMatrix s = sample_covariance(DataMatrix(x));
        SymMatrix w(p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j <= i; ++j) w(i, j) = rng.uniform(0.02, 0.4);
        const WeightMatrix lam(w);
        SolverOptions opts;
        opts.tol = 1e-10;
        opts.inner_tol = 1e-13;
        const GlassoSolution sol = solve_weighted_glasso(s, lam, opts);
        worst = std::max(worst, oracle::max_abs_diff(oracle::dense(sol.omega.sym()), oracle::brute_force_glasso(s, lam)));
    }
    return {worst <= 1e-4, "50 instances, max |omega - oracle| = " + fmt("%.3g", worst)};
}

Outcome kkt_certificate() {
    constexpr double tol = 1e-4;
    double worst_ratio = 0.0;
    int solves = 0;
    for (Family fam : {Family::Ar1, Family::Knn}) {
        ExperimentConfig cfg;
        cfg.family = fam;
        cfg.seed = 41;
        const SpdMatrix truth = generate_truth(cfg);
        RngStream master(cfg.seed);
        for (int rep = 0; rep < 20; ++rep) {
            RngStream rng = master.child(static_cast<std::uint64_t>(rep));
            const SymMatrix s = sample_covariance(sample_gaussian(120, truth, rng));
            const SymMatrix init = spd_inverse(SpdMatrix(s)).sym();
            const std::vector<double> grid = default_lambda_grid(s, 20);
            for (std::size_t g = 0; g < grid.size(); g += 4) {
                const double l = grid[g];
                for (const WeightMatrix& w : {WeightMatrix::constant(30, l), lla_weights(init, PenaltySpec::scad(l)),
                                              adaptive_weights(init, kDefaultAdaptiveGamma, l)}) {
                    SolverOptions opts;
                    opts.tol = tol;
                    const GlassoSolution sol = solve_weighted_glasso(s, w, opts);
                    const double bound = 10.0 * tol * off_diagonal_scale(s);
                    worst_ratio = std::max(worst_ratio, kkt_residual(sol, s, w) / bound);
                    ++solves;
                }
            }
        }
    }
    return {worst_ratio <= 1.0,
            std::to_string(solves) + " solves, max residual / bound = " + fmt("%.3g", worst_ratio)};
}

Outcome lla_monotone() {
    int violations = 0, steps = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RngStream rng(seed);
        const SpdMatrix truth = gen_ar1_precision(10, 1.0, rng);
        const SymMatrix s = sample_covariance(sample_gaussian(50, truth, rng));
        EstimatorOptions opts;
        opts.mode = LlaMode::Iterate;
        opts.solver.tol = 1e-8;
        const PrecisionEstimate est = estimate(s, 50, PenaltySpec::scad(0.2), opts);
        for (std::size_t k = 1; k < est.objective_trace.size(); ++k, ++steps)
            if (est.objective_trace[k] < est.objective_trace[k - 1] - 1e-8) ++violations;
    }
    return {violations == 0, "20 instances, " + std::to_string(steps) + " LLA steps, " +
                                 std::to_string(violations) + " violations"};
}

Outcome unpenalized_limit() {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        RngStream rng(seed);
        const std::size_t p = seed % 2 ? 10 : 30;
        const SpdMatrix truth = gen_ar1_precision(p, 1.0, rng);
        const SymMatrix s = sample_covariance(sample_gaussian(120, truth, rng));
        EstimatorOptions opts;
        opts.solver.tol = 1e-10;
        opts.solver.inner_tol = 1e-13;
        const PrecisionEstimate est = estimate(s, 120, PenaltySpec::lasso(1e-10), opts);
        worst = std::max(worst, max_abs_diff(est.omega.sym(), spd_inverse(SpdMatrix(s)).sym()));
    }
    return {worst <= 1e-6, "10 instances, max |omega - S^-1| = " + fmt("%.3g", worst)};
}

std::string triple(const char* name, double lasso, double ada, double scad) {
    return std::string(name) + " lasso/adaptive/scad = " + fmt("%.3f", lasso) + "/" + fmt("%.3f", ada) + "/" +
           fmt("%.3f", scad);
}

Outcome table3_trend() {
    ExperimentConfig cfg;
    cfg.family = Family::Ar1;
    cfg.penalties = three_penalties();
    cfg.seed = 1;
    const ExperimentReport r = run_experiment(cfg);
    const PenaltyReport &l = row_of(r, PenaltyKind::Lasso), &a = row_of(r, PenaltyKind::AdaptiveLasso),
                        &s = row_of(r, PenaltyKind::Scad);
    const bool loss_ok = below_with_margin(s.loss2.mean, a.loss2.mean) && below_with_margin(a.loss2.mean, l.loss2.mean);
    const bool zero_ok = below_with_margin(s.zero1.mean, l.zero1.mean) && below_with_margin(a.zero1.mean, s.zero1.mean);
    return {loss_ok && zero_ok, triple("loss2", l.loss2.mean, a.loss2.mean, s.loss2.mean) + "; " +
                                    triple("zero1", l.zero1.mean, a.zero1.mean, s.zero1.mean) +
                                    (loss_ok ? "" : "; loss2 ordering not met") +
                                    (zero_ok ? "" : "; zero1 ordering not met")};
}

Outcome table4_trend() {
    ExperimentConfig cfg;
    cfg.family = Family::Knn;
    cfg.penalties = three_penalties();
    cfg.seed = 1;
    const ExperimentReport r = run_experiment(cfg);
    const PenaltyReport &l = row_of(r, PenaltyKind::Lasso), &a = row_of(r, PenaltyKind::AdaptiveLasso),
                        &s = row_of(r, PenaltyKind::Scad);
    const bool ok = below_with_margin(s.loss2.mean, a.loss2.mean) && below_with_margin(a.loss2.mean, l.loss2.mean);
    return {ok, triple("loss2", l.loss2.mean, a.loss2.mean, s.loss2.mean) + (ok ? "" : "; ordering not met")};
}

Outcome high_dimensional() {
    ExperimentConfig cfg;
    cfg.family = Family::Ar1;
    cfg.p = 200;
    cfg.reps = 3;
    cfg.penalties = three_penalties();
    cfg.seed = 1;
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentReport r = run_experiment(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool spd = true;
    for (const PenaltyReport& row : r.rows) spd = spd && row.all_spd;
    const double l = row_of(r, PenaltyKind::Lasso).nonzero.mean, a = row_of(r, PenaltyKind::AdaptiveLasso).nonzero.mean,
                 s = row_of(r, PenaltyKind::Scad).nonzero.mean;
    const bool ok = spd && l > s && l > a && secs <= 1800.0;
    return {ok, triple("nonzero", l, a, s) + ", all SPD = " + (spd ? "yes" : "no") + ", " + fmt("%.0f", secs) + " s"};
}

Outcome consistency_trend() {
    double sums[2];
    const std::size_t ns[2] = {120, 480};
    for (int k = 0; k < 2; ++k) {
        ExperimentConfig cfg;
        cfg.family = Family::Ar1;
        cfg.n = ns[k];
        cfg.reps = 10;
        cfg.penalties = {PenaltySpec::scad(0)};
        cfg.seed = 1;
        const ExperimentReport r = run_experiment(cfg);
        sums[k] = r.rows[0].perc1.mean + r.rows[0].perc2.mean;
    }
    return {sums[1] < sums[0], "SCAD perc1+perc2 at n=120: " + fmt("%.3f", sums[0]) + ", n=480: " + fmt("%.3f", sums[1])};
}

Outcome metric_examples() {
    std::vector<std::string> failed;
    const auto expect = [&](bool ok, const char* what) {
        if (!ok) failed.emplace_back(what);
    };
    const auto near = [](double a, double b, double tol) { return std::abs(a - b) <= tol; };

    SymMatrix two = SymMatrix::identity(2);
    two(0, 0) = two(1, 1) = 2.0;
    const SpdMatrix i2(SymMatrix::identity(2)), t2(two);
    expect(near(entropy_loss(i2, t2), 0.61371, 5e-6), "entropy loss I vs 2I");
    expect(near(quadratic_loss(i2, t2), 2.0, 1e-12), "quadratic loss I vs 2I");
    expect(near(entropy_loss(SpdMatrix(oracle::sym({{2.0}})), SpdMatrix(oracle::sym({{1.0}}))), 0.19315, 5e-6),
           "entropy loss p=1");
    RngStream rng(9);
    for (int k = 0; k < 20; ++k) {
        const SpdMatrix o(oracle::random_spd(6, rng));
        expect(near(entropy_loss(o, o), 0.0, 1e-10), "entropy loss at the truth");
        expect(near(quadratic_loss(o, o), 0.0, 1e-10), "quadratic loss at the truth");
    }

    Mask truth(3), est(3);
    for (std::size_t i = 0; i < 3; ++i) truth.set(i, i, true), est.set(i, i, true);
    for (auto [i, j] : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 2}}) truth.set(i, j, true), truth.set(j, i, true);
    for (auto [i, j] : {std::pair<std::size_t, std::size_t>{0, 2}, {1, 2}}) est.set(i, j, true), est.set(j, i, true);
    const SparsityErrors e = sparsity_errors(truth, est);
    expect(e.zero1 == 2 && e.zero2 == 2, "sparsity counts");

    const ClassificationMetrics m = classification_metrics({3, 16, 0, 2});
    expect(near(m.mcc, 0.7303, 5e-5) && m.sensitivity == 0.6 && m.specificity == 1.0, "MCC example");
    expect(classification_metrics({5, 7, 0, 0}).mcc == 1.0, "perfect MCC");

    Matrix pred(2, 2, 1.0), act(2, 2, 1.0);
    act(0, 1) = 3.0;
    const Vector err = aafe(pred, act);
    expect(err[0] == 0.0 && err[1] == 1.0, "AAFE example");

    expect(near(scad_derivative(1.0, 0.5, 3.7), 0.314815, 5e-7), "SCAD derivative");
    expect(scad_derivative(0.0, 0.5, 3.7) == 0.5 && scad_derivative(2.0, 0.5, 3.7) == 0.0, "SCAD derivative ends");
    expect(near(scad_value(2.0, 0.5, 3.7), 0.5875, 1e-12), "SCAD value");

    Matrix counts(1, 2);
    counts(0, 1) = 2.0;
    const Matrix vs = variance_stabilize(counts);
    expect(vs(0, 0) == 0.5 && vs(0, 1) == 1.5, "variance stabilization");
    expect(near(gen_exp_decay_precision(3)(0, 1), 0.135335, 5e-7), "exponential decay entry");

    RngStream ar(1);
    const SparsityErrors tri = sparsity_errors(threshold_sparsify(gen_ar1_precision(30, 1.0, ar).sym(), 1e-3),
                                               threshold_sparsify(gen_ar1_precision(30, 1.0, ar).sym(), 1e-3));
    expect(tri.n1 == 812 && near(100.0 * 248.48 / 812.0, 30.60, 5e-3), "published zero1/perc1 consistency");

    std::string detail = "hand examples checked";
    for (const std::string& f : failed) detail += "; failed: " + f;
    return {failed.empty(), detail};
}

Outcome forecast_identity() {
    RngStream rng(2024);
    const std::size_t p = 24, q = 10;
    const SpdMatrix omega = gen_ar1_precision(p, 1.0, rng);
    Vector mu(p);
    for (double& v : mu) v = 5.0 + rng.normal();
    const ForecastModel truth{mu, omega, q};
    const oracle::Dense sigma = oracle::gauss_jordan_inverse(oracle::dense(omega.sym()));
    oracle::Dense s11(q, std::vector<double>(q));
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) s11[i][j] = sigma[i][j];
    const oracle::Dense s11inv = oracle::gauss_jordan_inverse(s11);

    const DataMatrix draws = sample_gaussian(1000, omega, rng);
    double worst = 0.0;
    Matrix pred_true(1000, p - q), pred_mean(1000, p - q), actual(1000, p - q);
    for (std::size_t t = 0; t < 1000; ++t) {
        Vector y(p);
        for (std::size_t j = 0; j < p; ++j) y[j] = mu[j] + draws(t, j);
        const Vector y1(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(q));
        const Vector f = conditional_forecast(truth, y1);
        const Vector g = conditional_forecast_precision(truth, y1);
        Vector coef(q, 0.0);
        for (std::size_t i = 0; i < q; ++i)
            for (std::size_t k = 0; k < q; ++k) coef[i] += s11inv[i][k] * (y1[k] - mu[k]);
        for (std::size_t i = q; i < p; ++i) {
            double analytic = mu[i];
            for (std::size_t k = 0; k < q; ++k) analytic += sigma[i][k] * coef[k];
            worst = std::max({worst, std::abs(f[i - q] - analytic), std::abs(g[i - q] - analytic)});
            pred_true(t, i - q) = f[i - q];
            pred_mean(t, i - q) = mu[i];
            actual(t, i - q) = y[i];
        }
    }

    // Fixed-seed regression: a model fitted on 200 training days must beat the
    // unconditional mean on held-out days and stay close to the true model.
    const DataMatrix train_raw = sample_gaussian(200, omega, rng);
    Matrix train = train_raw.values();
    for (std::size_t t = 0; t < train.rows(); ++t)
        for (std::size_t j = 0; j < p; ++j) train(t, j) += mu[j];
    const DataMatrix train_x(std::move(train));
    Vector mean_hat(p, 0.0);
    for (std::size_t t = 0; t < train_x.n(); ++t)
        for (std::size_t j = 0; j < p; ++j) mean_hat[j] += train_x(t, j) / static_cast<double>(train_x.n());
    const SymMatrix s = sample_covariance(train_x);
    const ForecastModel fitted{mean_hat, estimate(s, train_x.n(), PenaltySpec::lasso(0.05)).omega, q};
    Matrix pred_fit(1000, p - q);
    for (std::size_t t = 0; t < 1000; ++t) {
        Vector y1(q);
        for (std::size_t j = 0; j < q; ++j) y1[j] = mu[j] + draws(t, j);
        const Vector f = conditional_forecast(fitted, y1);
        for (std::size_t i = 0; i < p - q; ++i) pred_fit(t, i) = f[i];
    }
    const auto avg = [](const Vector& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    const double a_true = avg(aafe(pred_true, actual)), a_fit = avg(aafe(pred_fit, actual)),
                 a_mean = avg(aafe(pred_mean, actual));
    const bool ok = worst <= 1e-8 && a_fit < a_mean && a_fit <= 1.1 * a_true;
    return {ok, "1000 draws, max |forecast - analytic| = " + fmt("%.3g", worst) + "; AAFE true/fitted/mean = " +
                    fmt("%.4f", a_true) + "/" + fmt("%.4f", a_fit) + "/" + fmt("%.4f", a_mean)};
}

Outcome classification_pipeline() {
    const std::size_t p = 40, n1 = 33, n2 = 97;
    RngStream rng(77);
    const SpdMatrix omega = gen_ar1_precision(p, 1.0, rng);
    const DataMatrix z = sample_gaussian(n1 + n2, omega, rng);
    Matrix x = z.values();
    Labels y(n1 + n2);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = i < n1 ? 1 : 2;
        if (y[i] == 1)
            for (std::size_t j = 0; j < 10; ++j) x(i, 3 * j) += 1.5;
    }
    const DataMatrix data(std::move(x));
    const auto [train_idx, test_idx] = stratified_split(y, 5, 16, 5);
    const DataMatrix train_all = data.select_rows(train_idx), test_all = data.select_rows(test_idx);
    Labels y_train, y_test;
    for (std::size_t i : train_idx) y_train.push_back(y[i]);
    for (std::size_t i : test_idx) y_test.push_back(y[i]);

    const std::vector<std::size_t> keep = two_sample_t_select(train_all, y_train, 20);
    const DataMatrix train_sel = train_all.select_cols(keep), test_sel = test_all.select_cols(keep);
    const Vector scale = feature_scales(train_sel);
    const DataMatrix train = divide_columns(train_sel, scale), test = divide_columns(test_sel, scale);

    bool ok = true;
    std::string detail = "test 5/16 split, MCC";
    for (const PenaltySpec& pen : three_penalties()) {
        LdaOptions opts;
        opts.cv = CvConfig{};
        opts.cv->seed = 3;
        const LdaModel model = lda_train(train, y_train, pen, opts);
        Labels pred;
        for (std::size_t i = 0; i < test.n(); ++i) pred.push_back(lda_classify(model, test.row(i)).label);
        const double mcc = classification_metrics(confusion(y_test, pred)).mcc;
        ok = ok && mcc >= 0.9;
        detail += " " + std::string(to_string(pen.kind)) + "=" + fmt("%.3f", mcc);
    }
    return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"solver matches brute-force maximization", solver_vs_brute_force},
        {"KKT certificate on p=30 instances", kkt_certificate},
        {"iterative SCAD objective monotone", lla_monotone},
        {"unpenalized limit recovers the inverse sample covariance", unpenalized_limit},
        {"AR(1) p=30 orderings", table3_trend},
        {"kNN p=30 orderings", table4_trend},
        {"p=200 viability", high_dimensional},
        {"SCAD sparsity errors shrink with n", consistency_trend},
        {"metric examples", metric_examples},
        {"conditional forecast identity", forecast_identity},
        {"classification pipeline", classification_pipeline},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    bool all = true;
    for (std::size_t c = 0; c < criteria.size(); ++c) {
        const int id = static_cast<int>(c) + 1;
        if (!wanted.empty() && !wanted.count(id)) continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[c].second();
        } catch (const Error& e) {
            o = {false, "error[" + e.kind() + "]: " + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %d: %s (%s) [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[c].first, o.detail.c_str(),
                    secs);
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
