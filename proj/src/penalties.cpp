#include "precnet/penalties.hpp"

#include <cmath>
#include <string>

#include "precnet/error.hpp"

namespace precnet {

namespace {

void check_scad_params(double lambda, double a) {
    if (!(lambda >= 0.0)) throw InvalidParameter("SCAD: lambda must be nonnegative");
    if (!(a > 2.0)) throw InvalidParameter("SCAD: a must exceed 2, got " + std::to_string(a));
}

}  // namespace

std::string_view to_string(PenaltyKind kind) {
    switch (kind) {
        case PenaltyKind::Lasso: return "lasso";
        case PenaltyKind::Scad: return "scad";
        case PenaltyKind::AdaptiveLasso: return "adaptive_lasso";
    }
    return "unknown";
}

PenaltyKind parse_penalty_kind(std::string_view name) {
    if (name == "lasso") return PenaltyKind::Lasso;
    if (name == "scad") return PenaltyKind::Scad;
    if (name == "adaptive" || name == "adaptive_lasso" || name == "alasso")
        return PenaltyKind::AdaptiveLasso;
    throw InvalidParameter("unknown penalty '" + std::string(name) + "'");
}

PenaltySpec PenaltySpec::lasso(double lambda) {
    PenaltySpec p;
    p.kind = PenaltyKind::Lasso;
    p.lambda = lambda;
    return p;
}

PenaltySpec PenaltySpec::scad(double lambda, double a) {
    PenaltySpec p;
    p.kind = PenaltyKind::Scad;
    p.lambda = lambda;
    p.a = a;
    return p;
}

PenaltySpec PenaltySpec::adaptive(double lambda, double gamma, std::optional<SymMatrix> init) {
    PenaltySpec p;
    p.kind = PenaltyKind::AdaptiveLasso;
    p.lambda = lambda;
    p.gamma = gamma;
    p.init = std::move(init);
    return p;
}

void PenaltySpec::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw InvalidParameter("penalty: lambda must be finite and nonnegative");
    if (kind == PenaltyKind::Scad) check_scad_params(lambda, a);
    if (kind == PenaltyKind::AdaptiveLasso && !(gamma > 0.0))
        throw InvalidParameter("adaptive lasso: gamma must be positive");
}

double scad_derivative(double x, double lambda, double a) {
    check_scad_params(lambda, a);
    x = std::abs(x);
    if (x <= lambda) return lambda;
    return std::max(a * lambda - x, 0.0) / (a - 1.0);
}

double scad_value(double x, double lambda, double a) {
    check_scad_params(lambda, a);
    x = std::abs(x);
    if (x <= lambda) return lambda * x;
    if (x <= a * lambda) return (2.0 * a * lambda * x - x * x - lambda * lambda) / (2.0 * (a - 1.0));
    return (a + 1.0) * lambda * lambda / 2.0;
}

double penalty_value(const PenaltySpec& penalty, double x) {
    switch (penalty.kind) {
        case PenaltyKind::Lasso: return penalty.lambda * std::abs(x);
        case PenaltyKind::Scad: return scad_value(x, penalty.lambda, penalty.a);
        case PenaltyKind::AdaptiveLasso: break;
    }
    throw InvalidParameter("penalty_value: adaptive lasso has per-entry weights");
}

WeightMatrix adaptive_weights(const SymMatrix& init, double gamma, double lambda) {
    if (!(gamma > 0.0)) throw InvalidParameter("adaptive_weights: gamma must be positive");
    if (!(lambda >= 0.0)) throw InvalidParameter("adaptive_weights: lambda must be nonnegative");
    const std::size_t p = init.dim();
    SymMatrix w(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = std::abs(init(i, j));
            w(i, j) = v == 0.0 ? WeightMatrix::kHardZero : lambda / std::pow(v, gamma);
        }
    return WeightMatrix(std::move(w));
}

WeightMatrix lla_weights(const SymMatrix& current, const PenaltySpec& penalty) {
    penalty.validate();
    const std::size_t p = current.dim();
    switch (penalty.kind) {
        case PenaltyKind::Lasso: return WeightMatrix::constant(p, penalty.lambda);
        case PenaltyKind::Scad: {
            SymMatrix w(p);
            for (std::size_t i = 0; i < p; ++i)
                for (std::size_t j = 0; j <= i; ++j)
                    w(i, j) = scad_derivative(current(i, j), penalty.lambda, penalty.a);
            return WeightMatrix(std::move(w));
        }
        case PenaltyKind::AdaptiveLasso: break;
    }
    throw InvalidParameter("lla_weights: adaptive lasso uses adaptive_weights");
}

}  // namespace precnet
