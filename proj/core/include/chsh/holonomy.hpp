#pragma once

#include <array>
#include <optional>

#include "chsh/engine.hpp"
#include "chsh/gamma_map.hpp"

namespace chsh {

// Residual angle acquired by transporting a hidden angle around the closed
// cycle of setting changes A1B1 -> A2B1 -> A2B2 -> A1B2 -> A1B1. Reversing
// the cycle negates the alternating sum.
struct HolonomyResult {
    double delta = 0.0;                 // Gamma(alternating_sum), in [-pi, pi)
    std::array<double, 4> legs{};       // Ginv of A1B1, A1B2, A2B1, A2B2
    double alternating_sum = 0.0;       // wrap(legs[1] - legs[3] + legs[2] - legs[0])
    std::optional<double> final_angle;  // cyclic_walk result when requested
};

// delta = Gamma(wrap(Ginv(a1b2) - Ginv(a2b2) + Ginv(a2b1) - Ginv(a1b1))).
// Zero for the uniform density with additive settings; nonzero in general,
// which is exactly what blocks assigning all four outcomes per round.
HolonomyResult holonomy_delta(const GammaMap& map, const GameSettings& settings);

// Step-by-step transport of delta_a1 through the four setting changes
// (B1 -> A2 -> B2 -> A1). Equals Gamma(Ginv(delta) + Ginv(delta_a1)) up to
// map tolerance.
double cyclic_walk(const GammaMap& map, const GameSettings& settings, double delta_a1);

}  // namespace chsh
