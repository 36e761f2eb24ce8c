#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "io.hpp"
#include "precnet/applications.hpp"
#include "precnet/error.hpp"
#include "precnet/estimator.hpp"
#include "precnet/evaluation.hpp"
#include "precnet/simgen.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace precnet;
using namespace precnet::cli;

namespace {

Error usage_error(const std::string& msg) { return Error("Usage", msg); }

struct Common {
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string out_dir = ".";
};

struct PenaltyFlags {
    std::string penalty = "lasso";
    std::optional<double> lambda;
    int cv = 0;
    std::size_t grid_size = 20;
    double grid_ratio = 100.0;
    double scad_a = kDefaultScadA;
    double gamma = kDefaultAdaptiveGamma;
    bool iterate = false;
    bool no_diagonal_penalty = false;
    std::string init = "auto";
    double tol = 1e-4;
    double threshold = 1e-3;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Seed for fold assignment and sampling")->capture_default_str();
    cmd->add_option("--threads", c.threads, "Worker threads (0: PRECNET_THREADS or all cores)")->capture_default_str();
    cmd->add_option("--out-dir", c.out_dir, "Directory for output files")->capture_default_str();
}

void add_penalty_flags(CLI::App* cmd, PenaltyFlags& f) {
    cmd->add_option("--penalty", f.penalty, "lasso, scad or adaptive")->capture_default_str();
    auto* lam = cmd->add_option("--lambda", f.lambda, "Fixed regularization level")->check(CLI::NonNegativeNumber);
    auto* cv = cmd->add_option("--cv", f.cv, "Choose lambda by K-fold cross-validation")->check(CLI::Range(2, 1000000));
    lam->excludes(cv);
    cmd->add_option("--grid-size", f.grid_size, "Cross-validation grid length")->capture_default_str();
    cmd->add_option("--grid-ratio", f.grid_ratio, "Ratio between the largest and smallest grid value")
        ->capture_default_str();
    cmd->add_option("--scad-a", f.scad_a, "SCAD shape parameter")->capture_default_str();
    cmd->add_option("--gamma", f.gamma, "Adaptive LASSO exponent")->capture_default_str();
    cmd->add_flag("--iterate", f.iterate, "Iterate the local linear approximation to convergence");
    cmd->add_flag("--no-diagonal-penalty", f.no_diagonal_penalty, "Leave the diagonal unpenalized");
    cmd->add_option("--init", f.init, "Initial estimate for SCAD/adaptive: auto, inverse_sample or lasso")
        ->capture_default_str();
    cmd->add_option("--tol", f.tol, "Solver convergence threshold")->capture_default_str();
    cmd->add_option("--threshold", f.threshold, "Magnitude below which entries count as zero")->capture_default_str();
}

PenaltySpec penalty_of(const PenaltyFlags& f, double lambda) {
    switch (parse_penalty_kind(f.penalty)) {
        case PenaltyKind::Lasso: return PenaltySpec::lasso(lambda);
        case PenaltyKind::Scad: return PenaltySpec::scad(lambda, f.scad_a);
        case PenaltyKind::AdaptiveLasso: return PenaltySpec::adaptive(lambda, f.gamma);
    }
    throw InvalidParameter("unknown penalty");
}

EstimatorOptions options_of(const PenaltyFlags& f) {
    EstimatorOptions o;
    o.mode = f.iterate ? LlaMode::Iterate : LlaMode::OneStep;
    o.solver.tol = f.tol;
    o.solver.penalize_diagonal = !f.no_diagonal_penalty;
    o.sparsity_threshold = f.threshold;
    if (f.init == "auto") o.init_policy = InitPolicy::Auto;
    else if (f.init == "inverse_sample") o.init_policy = InitPolicy::InverseSample;
    else if (f.init == "lasso") o.init_policy = InitPolicy::Lasso;
    else throw usage_error("--init must be auto, inverse_sample or lasso");
    o.validate();
    return o;
}

struct LambdaChoice {
    double lambda = 0.0;
    std::optional<LambdaSelection> cv;
};

// Fixed lambda or a CV search over the default grid built from s.
LambdaChoice choose_lambda(const PenaltyFlags& f, const Common& c, const DataMatrix& x, const SymMatrix& s,
                           const EstimatorOptions& opts) {
    if (f.lambda) return {*f.lambda, std::nullopt};
    if (f.cv == 0) throw usage_error("give either --lambda or --cv");
    CvConfig cfg;
    cfg.folds = f.cv;
    cfg.grid = default_lambda_grid(s, f.grid_size, f.grid_ratio);
    cfg.seed = c.seed;
    cfg.threads = c.threads;
    LambdaSelection sel = select_lambda(x, penalty_of(f, 0.0), cfg, opts);
    const double l = sel.lambda;
    return {l, std::move(sel)};
}

json cv_json(const LambdaChoice& choice, const PenaltyFlags& f, const Common& c) {
    if (!choice.cv) return nullptr;
    return {{"folds", f.cv}, {"seed", c.seed}, {"grid", choice.cv->grid}, {"scores", choice.cv->scores}};
}

fs::path prepare_out_dir(const Common& c) {
    const fs::path dir(c.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("IoError", "cannot create " + dir.string() + ": " + ec.message());
    return dir;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_estimate(const std::string& input, const PenaltyFlags& f, const Common& c) {
    const Table t = read_csv(input);
    const DataMatrix x(t.values);
    const SymMatrix s = sample_covariance(x);
    const EstimatorOptions opts = options_of(f);
    const LambdaChoice choice = choose_lambda(f, c, x, s, opts);
    const PrecisionEstimate est = estimate(s, x.n(), penalty_of(f, choice.lambda), opts);

    const fs::path dir = prepare_out_dir(c);
    write_sym_csv(dir / "omega.csv", est.omega.sym(), t.names);
    write_mask_csv(dir / "pattern.csv", est.pattern, t.names);
    write_dot(dir / "edges.dot", est.omega.sym(), est.pattern, t.names);
    const json summary = {
        {"penalty", std::string(to_string(est.penalty.kind))},
        {"lambda", choice.lambda},
        {"cv", cv_json(choice, f, c)},
        {"objective", penalized_objective(est.omega, s, est.penalty, opts.solver.penalize_diagonal)},
        {"sweeps", est.sweeps_used},
        {"converged", est.converged},
        {"nonzero", est.pattern.off_diagonal_count()},
        {"n", x.n()},
        {"p", x.p()},
        {"threshold", opts.sparsity_threshold},
    };
    write_text(dir / "summary.json", dump(summary));
    return 0;
}

json summary_json(const MetricSummary& m) { return {{"mean", m.mean}, {"sd", m.sd}, {"se", m.se}}; }

int cmd_simulate(const std::string& config_path, const Common& c, bool seed_given, bool threads_given) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    if (seed_given) cfg.seed = c.seed;
    if (threads_given) cfg.threads = c.threads;
    const ExperimentReport r = run_experiment(cfg);

    const fs::path dir = prepare_out_dir(c);
    std::string csv =
        "penalty,loss1,loss1_se,loss2,loss2_se,zero1,zero1_se,zero2,zero2_se,perc1,perc1_se,perc2,perc2_se,"
        "nonzero,nonzero_se,lambda,lambda_se,all_spd\n";
    json rows = json::array();
    for (const PenaltyReport& row : r.rows) {
        const std::string name(to_string(row.penalty.kind));
        csv += name;
        for (const MetricSummary* m : {&row.loss1, &row.loss2, &row.zero1, &row.zero2, &row.perc1, &row.perc2,
                                       &row.nonzero, &row.lambda})
            csv += "," + format_double(m->mean) + "," + format_double(m->se);
        csv += row.all_spd ? ",true\n" : ",false\n";
        rows.push_back({{"penalty", name},
                        {"loss1", summary_json(row.loss1)},
                        {"loss2", summary_json(row.loss2)},
                        {"zero1", summary_json(row.zero1)},
                        {"zero2", summary_json(row.zero2)},
                        {"perc1", summary_json(row.perc1)},
                        {"perc2", summary_json(row.perc2)},
                        {"nonzero", summary_json(row.nonzero)},
                        {"lambda", summary_json(row.lambda)},
                        {"all_spd", row.all_spd}});
        write_matrix_csv(dir / ("freq_" + name + ".csv"), row.frequency, default_names(cfg.p));
    }
    json penalties = json::array();
    for (const PenaltySpec& p : cfg.penalties) penalties.push_back(std::string(to_string(p.kind)));
    const json config = {{"family", std::string(to_string(cfg.family))},
                         {"p", cfg.p},
                         {"n", cfg.n},
                         {"reps", cfg.reps},
                         {"seed", cfg.seed},
                         {"folds", cfg.folds},
                         {"grid_size", cfg.grid_size},
                         {"grid_ratio", cfg.grid_ratio},
                         {"ar1_rate", cfg.ar1_rate},
                         {"knn_k", cfg.knn_k},
                         {"penalties", penalties}};
    const json report = {{"config", config},
                         {"true_nonzero", r.true_pattern.off_diagonal_count()},
                         {"rows", rows}};
    write_text(dir / "report.json", dump(report));
    write_text(dir / "report.csv", csv);
    return 0;
}

SpdMatrix read_omega(const std::string& path, std::size_t p) {
    const Table t = read_csv(path);
    const Matrix& m = t.values;
    if (m.rows() != p || m.cols() != p)
        throw DimensionMismatch(path + ": expected a " + std::to_string(p) + "x" + std::to_string(p) + " matrix");
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(m(i, j) - m(j, i)) > 1e-12 * std::max(1.0, std::abs(m(i, j))))
                throw ParseError(path + ": matrix is not symmetric at (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ")");
    return SpdMatrix(SymMatrix::from_dense(m));
}

int cmd_forecast(const std::string& train_path, const std::string& test_path, std::size_t split,
                 const std::string& omega_path, bool stabilize, const PenaltyFlags& f, const Common& c) {
    Table train = read_csv(train_path), test = read_csv(test_path);
    const std::size_t p = train.values.cols();
    if (test.values.cols() != p)
        throw DimensionMismatch("train has " + std::to_string(p) + " columns, test has " +
                                std::to_string(test.values.cols()));
    if (split < 1 || split >= p) throw usage_error("--split must satisfy 1 <= q < " + std::to_string(p));
    if (stabilize) {
        train.values = variance_stabilize(train.values);
        test.values = variance_stabilize(test.values);
    }
    const DataMatrix x(train.values);
    ForecastModel model;
    model.mean = column_means(x);
    model.split = split;
    if (!omega_path.empty()) {
        model.omega = read_omega(omega_path, p);
    } else {
        const SymMatrix s = sample_covariance(x);
        const EstimatorOptions opts = options_of(f);
        const LambdaChoice choice = choose_lambda(f, c, x, s, opts);
        model.omega = estimate(s, x.n(), penalty_of(f, choice.lambda), opts).omega;
    }

    const std::size_t late = p - split;
    Matrix pred(test.values.rows(), late), actual(test.values.rows(), late);
    for (std::size_t t = 0; t < test.values.rows(); ++t) {
        const auto row = test.values.row(t);
        const Vector f2 = conditional_forecast(model, row.subspan(0, split));
        for (std::size_t i = 0; i < late; ++i) {
            pred(t, i) = f2[i];
            actual(t, i) = row[split + i];
        }
    }
    const std::vector<std::string> late_names(train.names.begin() + static_cast<std::ptrdiff_t>(split), train.names.end());
    const fs::path dir = prepare_out_dir(c);
    write_matrix_csv(dir / "predictions.csv", pred, late_names);
    const Vector err = aafe(pred, actual);
    std::string csv = "coordinate,aafe\n";
    for (std::size_t i = 0; i < late; ++i) csv += late_names[i] + "," + format_double(err[i]) + "\n";
    write_text(dir / "aafe.csv", csv);
    return 0;
}

int cmd_classify(const std::string& train_path, const std::string& train_labels_path, const std::string& test_path,
                 const std::string& test_labels_path, std::size_t select, const PenaltyFlags& f, const Common& c) {
    const Table train = read_csv(train_path), test = read_csv(test_path);
    const Labels y_train = read_labels(train_labels_path), y_test = read_labels(test_labels_path);
    const std::size_t p = train.values.cols();
    if (test.values.cols() != p)
        throw DimensionMismatch("train has " + std::to_string(p) + " columns, test has " +
                                std::to_string(test.values.cols()));
    if (y_train.size() != train.values.rows()) throw DimensionMismatch("one training label per row expected");
    if (y_test.size() != test.values.rows()) throw DimensionMismatch("one test label per row expected");
    if (select == 0) select = p;
    if (select > p) {
        std::cerr << "precnet: warning: --select " << select << " exceeds " << p << " features; using " << p << "\n";
        select = p;
    }

    const DataMatrix x_train(train.values), x_test(test.values);
    const std::vector<std::size_t> keep = two_sample_t_select(x_train, y_train, select);
    const DataMatrix tr_sel = x_train.select_cols(keep), te_sel = x_test.select_cols(keep);
    const Vector scale = feature_scales(tr_sel);
    const DataMatrix tr = divide_columns(tr_sel, scale), te = divide_columns(te_sel, scale);

    const EstimatorOptions opts = options_of(f);
    const DataMatrix residuals = within_class_residuals(tr, y_train);
    const LambdaChoice choice = choose_lambda(f, c, residuals, sample_covariance(residuals), opts);
    LdaOptions lda_opts;
    lda_opts.estimator = opts;
    const LdaModel model = lda_train(tr, y_train, penalty_of(f, choice.lambda), lda_opts);

    Labels pred;
    for (std::size_t i = 0; i < te.n(); ++i) pred.push_back(lda_classify(model, te.row(i)).label);
    const ConfusionCounts cc = confusion(y_test, pred);
    const ClassificationMetrics m = classification_metrics(cc);

    json selected = json::array();
    for (std::size_t j : keep) selected.push_back(train.names[j]);
    const json metrics = {{"specificity", m.specificity},
                          {"sensitivity", m.sensitivity},
                          {"mcc", m.mcc},
                          {"tp", cc.tp},
                          {"tn", cc.tn},
                          {"fp", cc.fp},
                          {"fn", cc.fn},
                          {"penalty", f.penalty},
                          {"lambda", choice.lambda},
                          {"cv", cv_json(choice, f, c)},
                          {"selected", selected}};
    const fs::path dir = prepare_out_dir(c);
    write_labels_csv(dir / "labels.csv", pred);
    write_text(dir / "metrics.json", dump(metrics));
    return 0;
}

int exit_code_for(const std::string& kind) {
    for (const char* k : {"Usage", "ParseError", "ConfigError", "DimensionMismatch", "DegenerateClass",
                          "InvalidParameter", "InvalidWeight", "EmptyInput", "NegativeCount", "DegenerateFold"})
        if (kind == k) return 2;
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse precision matrix estimation with LASSO, SCAD and adaptive LASSO penalties"};
    app.require_subcommand(1);

    Common common;
    PenaltyFlags flags;

    std::string input;
    auto* est = app.add_subcommand("estimate", "Estimate a precision matrix from an n x p CSV");
    est->add_option("--input", input, "Data CSV, one observation per row")->required();
    add_penalty_flags(est, flags);
    add_common(est, common);

    std::string config_path;
    auto* sim = app.add_subcommand("simulate", "Run a replicated simulation from a config file");
    sim->add_option("--config", config_path, "Experiment config (key = value)")->required();
    add_common(sim, common);

    std::string train_path, test_path, omega_path;
    std::size_t split = 0;
    bool stabilize = false;
    auto* fc = app.add_subcommand("forecast", "Forecast the late block of each test row from its early block");
    fc->add_option("--train", train_path, "Training CSV")->required();
    fc->add_option("--test", test_path, "Test CSV")->required();
    fc->add_option("--split", split, "Number of early coordinates q")->required();
    fc->add_option("--omega", omega_path, "Use this precision matrix instead of estimating one");
    fc->add_flag("--stabilize", stabilize, "Apply sqrt(x + 1/4) to counts before modelling");
    add_penalty_flags(fc, flags);
    add_common(fc, common);

    std::string train_labels, test_labels;
    std::size_t select = 0;
    auto* cl = app.add_subcommand("classify", "Screen, standardize and classify with penalized LDA");
    cl->add_option("--train", train_path, "Training CSV")->required();
    cl->add_option("--train-labels", train_labels, "Training labels (1 or 2 per line)")->required();
    cl->add_option("--test", test_path, "Test CSV")->required();
    cl->add_option("--test-labels", test_labels, "Test labels (1 or 2 per line)")->required();
    cl->add_option("--select", select, "Keep the m features with the largest |t| (0: all)")->capture_default_str();
    add_penalty_flags(cl, flags);
    add_common(cl, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        std::cerr << "precnet: error[Usage]: " << msg << "\n";
        return 2;
    }

    try {
        if (*est) return cmd_estimate(input, flags, common);
        if (*sim)
            return cmd_simulate(config_path, common, sim->count("--seed") > 0, sim->count("--threads") > 0);
        if (*fc) {
            if (omega_path.empty() && !flags.lambda && flags.cv == 0)
                throw usage_error("forecast needs --omega, --lambda or --cv");
            return cmd_forecast(train_path, test_path, split, omega_path, stabilize, flags, common);
        }
        if (*cl) return cmd_classify(train_path, train_labels, test_path, test_labels, select, flags, common);
    } catch (const Error& e) {
        std::cerr << "precnet: error[" << e.kind() << "]: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "precnet: error[Internal]: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
