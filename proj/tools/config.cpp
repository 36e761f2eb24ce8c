#include "config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "precnet/error.hpp"

namespace precnet::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

template <class T>
T parse_as(const std::string& v) {
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError("not a valid number: '" + v + "'");
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("expected true or false, got '" + v + "'");
}

std::vector<PenaltySpec> parse_penalties(const std::string& v) {
    std::vector<PenaltySpec> out;
    std::set<PenaltyKind> seen;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string name = trim(item);
        PenaltyKind kind;
        try {
            kind = parse_penalty_kind(name);
        } catch (const InvalidParameter& e) {
            throw ConfigError(e.what());
        }
        if (!seen.insert(kind).second) throw ConfigError("penalty '" + name + "' listed twice");
        switch (kind) {
            case PenaltyKind::Lasso: out.push_back(PenaltySpec::lasso(0)); break;
            case PenaltyKind::Scad: out.push_back(PenaltySpec::scad(0)); break;
            case PenaltyKind::AdaptiveLasso: out.push_back(PenaltySpec::adaptive(0)); break;
        }
    }
    if (out.empty()) throw ConfigError("penalties list is empty");
    return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    cfg.penalties = {PenaltySpec::lasso(0), PenaltySpec::adaptive(0), PenaltySpec::scad(0)};
    double scad_a = kDefaultScadA, gamma = kDefaultAdaptiveGamma;

    using Setter = std::function<void(const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"family",
         [&](const std::string& v) {
             try {
                 cfg.family = parse_family(v);
             } catch (const InvalidParameter& e) {
                 throw ConfigError(e.what());
             }
         }},
        {"p", [&](const std::string& v) { cfg.p = parse_as<std::size_t>(v); }},
        {"n", [&](const std::string& v) { cfg.n = parse_as<std::size_t>(v); }},
        {"reps", [&](const std::string& v) { cfg.reps = parse_as<int>(v); }},
        {"seed", [&](const std::string& v) { cfg.seed = parse_as<std::uint64_t>(v); }},
        {"penalties", [&](const std::string& v) { cfg.penalties = parse_penalties(v); }},
        {"folds", [&](const std::string& v) { cfg.folds = parse_as<int>(v); }},
        {"grid_size", [&](const std::string& v) { cfg.grid_size = parse_as<std::size_t>(v); }},
        {"grid_ratio", [&](const std::string& v) { cfg.grid_ratio = parse_as<double>(v); }},
        {"ar1_rate", [&](const std::string& v) { cfg.ar1_rate = parse_as<double>(v); }},
        {"knn_k", [&](const std::string& v) { cfg.knn_k = parse_as<std::size_t>(v); }},
        {"scad_a", [&](const std::string& v) { scad_a = parse_as<double>(v); }},
        {"adaptive_gamma", [&](const std::string& v) { gamma = parse_as<double>(v); }},
        {"lla",
         [&](const std::string& v) {
             if (v == "one_step") cfg.estimator.mode = LlaMode::OneStep;
             else if (v == "iterate") cfg.estimator.mode = LlaMode::Iterate;
             else throw ConfigError("lla must be one_step or iterate, got '" + v + "'");
         }},
        {"init",
         [&](const std::string& v) {
             if (v == "auto") cfg.estimator.init_policy = InitPolicy::Auto;
             else if (v == "inverse_sample") cfg.estimator.init_policy = InitPolicy::InverseSample;
             else if (v == "lasso") cfg.estimator.init_policy = InitPolicy::Lasso;
             else throw ConfigError("init must be auto, inverse_sample or lasso, got '" + v + "'");
         }},
        {"penalize_diagonal", [&](const std::string& v) { cfg.estimator.solver.penalize_diagonal = parse_bool(v); }},
        {"tol", [&](const std::string& v) { cfg.estimator.solver.tol = parse_as<double>(v); }},
        {"max_sweeps", [&](const std::string& v) { cfg.estimator.solver.max_sweeps = parse_as<int>(v); }},
        {"threshold", [&](const std::string& v) { cfg.estimator.sparsity_threshold = parse_as<double>(v); }},
        {"threads", [&](const std::string& v) { cfg.threads = parse_as<unsigned>(v); }},
    };

    std::set<std::string> seen;
    std::stringstream in(text);
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const std::string where = origin + ":" + std::to_string(lineno) + ": ";
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError(where + "unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ConfigError(where + "key '" + key + "' repeated");
        if (value.empty()) throw ConfigError(where + "key '" + key + "' has no value");
        try {
            it->second(value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + key + ": " + e.what());
        }
    }

    for (PenaltySpec& pen : cfg.penalties) {
        pen.a = scad_a;
        pen.gamma = gamma;
    }
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str(), path.string());
}

}  // namespace precnet::cli
