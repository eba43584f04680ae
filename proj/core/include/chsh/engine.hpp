#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "chsh/gamma_map.hpp"
#include "chsh/rng.hpp"

namespace chsh {

// Deterministic detector rule: -1 on [-pi, 0), +1 on [0, pi).
inline int detector_response(double delta) {
    return (wrap_angle(delta) < 0.0) ? -1 : +1;
}

// Transport of the hidden angle between the two detectors at relative angle
// theta: Gamma(Ginv(theta) - Ginv(delta_b)), the subtraction taken modulo
// 2*pi on [-pi, pi).
inline double transform(const GammaMap& map, double theta, double delta_b) {
    return map.gamma(wrap_angle(map.gamma_inverse(theta) - map.gamma_inverse(delta_b)));
}

// Draw a hidden angle with marginal law rho: push a uniform angle through
// gamma.
inline double sample_hidden(const GammaMap& map, RoundRng& rng) {
    return map.gamma(rng.next_angle());
}

// The four joint detector settings, stored wrapped. Index order is
// A1B1, A1B2, A2B1, A2B2 throughout.
struct GameSettings {
    double a1b1 = 0.0, a1b2 = 0.0, a2b1 = 0.0, a2b2 = 0.0;
    bool additivity_enforced = false;
    double calibration_offset = 0.0;  // gauge split theta = offset + relative; reporting only

    // Wraps all four angles; with enforce_additivity set, requires
    // wrap(a1b1 + a2b2 - a1b2 - a2b1) == 0 within 1e-12 (consecutive
    // co-planar rotations are additive) and throws std::invalid_argument
    // otherwise. Non-finite angles always throw.
    static GameSettings of(double t_a1b1, double t_a1b2, double t_a2b1, double t_a2b2,
                           bool enforce_additivity = false, double calibration_offset = 0.0);

    // From absolute detector angles; the four relative angles are additive by
    // construction.
    static GameSettings from_detector_angles(double a1, double a2, double b1, double b2,
                                             double calibration_offset = 0.0);

    // The standard maximal-violation layout (pi/4, 3pi/4, -pi/4, pi/4).
    static GameSettings chsh_optimal();

    // i, j in {1, 2}.
    double theta(int i, int j) const;
    // Flat index 0..3 in A1B1, A1B2, A2B1, A2B2 order.
    double theta_flat(int s) const;

    double additivity_residual() const {
        return wrap_angle(a1b1 + a2b2 - a1b2 - a2b1);
    }
};

// Flat setting index helpers (0=A1B1, 1=A1B2, 2=A2B1, 3=A2B2).
inline const char* setting_label(int s) {
    constexpr const char* kLabels[4] = {"A1B1", "A1B2", "A2B1", "A2B2"};
    return kLabels[s & 3];
}

struct RoundRecord {
    std::uint64_t round = 0;
    std::uint8_t setting = 0;  // flat index
    double delta_a = 0.0;      // hidden
    double delta_b = 0.0;      // hidden
    std::int8_t s_a = 0;
    std::int8_t s_b = 0;
};

struct CorrelationEstimate {
    std::uint64_t n_same = 0;
    std::uint64_t n_opp = 0;
    std::int64_t sum_sa = 0;
    std::int64_t sum_sb = 0;

    std::uint64_t n() const { return n_same + n_opp; }
    double estimate() const {
        const std::uint64_t total = n();
        if (total == 0) return 0.0;
        return (static_cast<double>(n_same) - static_cast<double>(n_opp)) /
               static_cast<double>(total);
    }
    double std_error() const {
        const std::uint64_t total = n();
        if (total == 0) return 0.0;
        const double e = estimate();
        return std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(total));
    }
    double mean_sa() const { return n() ? static_cast<double>(sum_sa) / static_cast<double>(n()) : 0.0; }
    double mean_sb() const { return n() ? static_cast<double>(sum_sb) / static_cast<double>(n()) : 0.0; }

    void add(int sa, int sb) {
        (sa == sb ? n_same : n_opp) += 1;
        sum_sa += sa;
        sum_sb += sb;
    }
    CorrelationEstimate& merge(const CorrelationEstimate& other) {
        n_same += other.n_same;
        n_opp += other.n_opp;
        sum_sa += other.sum_sa;
        sum_sb += other.sum_sb;
        return *this;
    }
    bool operator==(const CorrelationEstimate&) const = default;
};

enum class SettingPolicy { RoundRobin, RandomChoice };

struct GameResult {
    std::array<CorrelationEstimate, 4> per_setting;  // flat setting order
    std::uint64_t rounds_per_setting = 0;
    std::uint64_t seed = 0;
    SettingPolicy policy = SettingPolicy::RoundRobin;

    std::uint64_t total_rounds() const;
    // |e(A1B1) + e(A2B1) + e(A2B2) - e(A1B2)|
    double score() const;
    // Pooled over all rounds.
    double mean_sa() const;
    double mean_sb() const;
};

// One game round at relative angle theta: sample the hidden angle at detector
// B, transport it to A, apply the detector rule at both ends.
RoundRecord play_round(const GammaMap& map, double theta, RoundRng& rng);

// Runs 4 * rounds_per_setting rounds. Every round's randomness is a pure
// function of (seed, round index), so the result is bit-identical for any
// thread count; threads only shard the round range. With RoundRobin the
// setting cycles deterministically; with RandomChoice it is drawn uniformly
// each round. If trace is non-null it is filled with all records in round
// order.
GameResult run_game(const GammaMap& map, const GameSettings& settings,
                    std::uint64_t rounds_per_setting, std::uint64_t seed,
                    SettingPolicy policy = SettingPolicy::RoundRobin, unsigned threads = 1,
                    std::vector<RoundRecord>* trace = nullptr);

struct OutcomeMeans {
    double mean_sa = 0.0;
    double mean_sb = 0.0;
};

OutcomeMeans empirical_means(std::span<const RoundRecord> records);

}  // namespace chsh
