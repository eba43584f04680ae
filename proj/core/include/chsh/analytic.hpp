#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "chsh/engine.hpp"
#include "chsh/gamma_map.hpp"

namespace chsh {

// Closed-form correlation E(theta) = -1 + (2/pi) |Ginv(theta)|.
double correlation(const GammaMap& map, double theta);

// |E(A1B1) + E(A2B1) + E(A2B2) - E(A1B2)|.
double score(const GammaMap& map, const GameSettings& settings);

struct IdentityCase {
    std::array<int, 4> outcomes;  // (S_A1, S_A2, S_B1, S_B2)
    int value;                    // |S_A1 S_B1 + S_A2 S_B1 + S_A2 S_B2 - S_A1 S_B2|
};

struct IdentityReport {
    std::array<IdentityCase, 16> cases;
    bool all_equal_two() const;
};

// Enumerates all 16 assignments of four binary outcomes and evaluates the
// combination above; it equals 2 for every one, which is what caps the score
// at 2 whenever all four outcomes coexist per round.
IdentityReport chsh_identity_check();

struct CorrelationCurve {
    std::vector<double> theta;
    std::vector<double> value;
    std::string density_name;
};

// E on n_points nodes spaced 2*pi/(n_points-1) around the circle, each node
// wrapped into [-pi, pi). Requires n_points >= 3.
CorrelationCurve sweep(const GammaMap& map, std::size_t n_points);

struct OptimizationResult {
    GameSettings settings;
    double best_score = 0.0;
    std::uint64_t evaluations = 0;
    int starts = 0;
};

// Multi-start derivative-free maximization of the score over absolute
// detector angles (a1, a2, b2) with b1 = 0; the four relative settings are
// additive by construction. Starts are a uniform coarse grid; each runs a
// Nelder-Mead descent until the simplex score spread falls below tol.
OptimizationResult maximize_score(const GammaMap& map, bool enforce_additivity = true,
                                  int starts = 64, double tol = 1e-9);

}  // namespace chsh
