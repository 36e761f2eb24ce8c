#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "precnet/glasso.hpp"
#include "precnet/linalg.hpp"

namespace precnet {

enum class PenaltyKind { Lasso, Scad, AdaptiveLasso };

std::string_view to_string(PenaltyKind kind);
// Accepts "lasso", "scad", "adaptive" / "adaptive_lasso"; throws InvalidParameter.
PenaltyKind parse_penalty_kind(std::string_view name);

inline constexpr double kDefaultScadA = 3.7;
inline constexpr double kDefaultAdaptiveGamma = 0.5;

// One member of the penalty family. `init` is only meaningful for the
// adaptive LASSO (and, optionally, as an explicit LLA starting point).
struct PenaltySpec {
    PenaltyKind kind = PenaltyKind::Lasso;
    double lambda = 0.0;
    double a = kDefaultScadA;
    double gamma = kDefaultAdaptiveGamma;
    std::optional<SymMatrix> init;

    static PenaltySpec lasso(double lambda);
    static PenaltySpec scad(double lambda, double a = kDefaultScadA);
    static PenaltySpec adaptive(double lambda, double gamma = kDefaultAdaptiveGamma,
                                std::optional<SymMatrix> init = std::nullopt);

    PenaltySpec with_lambda(double l) const {
        PenaltySpec copy = *this;
        copy.lambda = l;
        return copy;
    }

    // Throws InvalidParameter when lambda < 0, a <= 2 (SCAD) or gamma <= 0.
    void validate() const;
};

double scad_derivative(double x, double lambda, double a = kDefaultScadA);
double scad_value(double x, double lambda, double a = kDefaultScadA);

// Penalty value p_lambda(|x|) for the scalar penalties (LASSO / SCAD).
double penalty_value(const PenaltySpec& penalty, double x);

// lambda / |init_ij|^gamma, with zero initial entries mapped to the hard-zero
// sentinel.
WeightMatrix adaptive_weights(const SymMatrix& init, double gamma, double lambda);

// Local linear approximation weights p'_lambda(|current_ij|). Only LASSO and
// SCAD are accepted.
WeightMatrix lla_weights(const SymMatrix& current, const PenaltySpec& penalty);

}  // namespace precnet
