#include "chsh/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace chsh {

namespace {

constexpr double kAdditivityTol = 1e-12;

void require_finite(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("game settings: non-finite angle");
}

}  // namespace

GameSettings GameSettings::of(double t_a1b1, double t_a1b2, double t_a2b1, double t_a2b2,
                              bool enforce_additivity, double calibration_offset) {
    require_finite(t_a1b1);
    require_finite(t_a1b2);
    require_finite(t_a2b1);
    require_finite(t_a2b2);
    require_finite(calibration_offset);
    GameSettings s;
    s.a1b1 = wrap_angle(t_a1b1);
    s.a1b2 = wrap_angle(t_a1b2);
    s.a2b1 = wrap_angle(t_a2b1);
    s.a2b2 = wrap_angle(t_a2b2);
    s.additivity_enforced = enforce_additivity;
    s.calibration_offset = calibration_offset;
    if (enforce_additivity && std::abs(s.additivity_residual()) > kAdditivityTol)
        throw std::invalid_argument("game settings: additivity constraint violated");
    return s;
}

GameSettings GameSettings::from_detector_angles(double a1, double a2, double b1, double b2,
                                                double calibration_offset) {
    return of(a1 - b1, a1 - b2, a2 - b1, a2 - b2, /*enforce_additivity=*/true,
              calibration_offset);
}

GameSettings GameSettings::chsh_optimal() {
    return of(kPi / 4, 3 * kPi / 4, -kPi / 4, kPi / 4, /*enforce_additivity=*/true);
}

double GameSettings::theta(int i, int j) const {
    if (i < 1 || i > 2 || j < 1 || j > 2)
        throw std::out_of_range("game settings: setting index out of range");
    return theta_flat(2 * (i - 1) + (j - 1));
}

double GameSettings::theta_flat(int s) const {
    switch (s) {
        case 0: return a1b1;
        case 1: return a1b2;
        case 2: return a2b1;
        case 3: return a2b2;
        default: throw std::out_of_range("game settings: setting index out of range");
    }
}

std::uint64_t GameResult::total_rounds() const {
    std::uint64_t total = 0;
    for (const auto& est : per_setting) total += est.n();
    return total;
}

double GameResult::score() const {
    return std::abs(per_setting[0].estimate() + per_setting[2].estimate() +
                    per_setting[3].estimate() - per_setting[1].estimate());
}

double GameResult::mean_sa() const {
    std::int64_t sum = 0;
    for (const auto& est : per_setting) sum += est.sum_sa;
    const std::uint64_t total = total_rounds();
    return total ? static_cast<double>(sum) / static_cast<double>(total) : 0.0;
}

double GameResult::mean_sb() const {
    std::int64_t sum = 0;
    for (const auto& est : per_setting) sum += est.sum_sb;
    const std::uint64_t total = total_rounds();
    return total ? static_cast<double>(sum) / static_cast<double>(total) : 0.0;
}

RoundRecord play_round(const GammaMap& map, double theta, RoundRng& rng) {
    RoundRecord rec;
    rec.round = rng.round();
    rec.delta_b = sample_hidden(map, rng);
    rec.delta_a = transform(map, theta, rec.delta_b);
    rec.s_a = static_cast<std::int8_t>(detector_response(rec.delta_a));
    rec.s_b = static_cast<std::int8_t>(detector_response(rec.delta_b));
    return rec;
}

GameResult run_game(const GammaMap& map, const GameSettings& settings,
                    std::uint64_t rounds_per_setting, std::uint64_t seed, SettingPolicy policy,
                    unsigned threads, std::vector<RoundRecord>* trace) {
    if (rounds_per_setting == 0)
        throw std::invalid_argument("run_game: rounds_per_setting must be >= 1");
    if (threads == 0) threads = 1;

    const std::uint64_t total = 4 * rounds_per_setting;
    if (trace) trace->resize(total);

    const auto worker = [&](std::uint64_t begin, std::uint64_t end,
                            std::array<CorrelationEstimate, 4>& acc) {
        for (std::uint64_t k = begin; k < end; ++k) {
            RoundRng rng(seed, k);
            int setting;
            if (policy == SettingPolicy::RandomChoice) {
                setting = static_cast<int>(rng.next_unit() * 4.0) & 3;
            } else {
                setting = static_cast<int>(k & 3);
            }
            RoundRecord rec = play_round(map, settings.theta_flat(setting), rng);
            rec.setting = static_cast<std::uint8_t>(setting);
            acc[static_cast<std::size_t>(setting)].add(rec.s_a, rec.s_b);
            if (trace) (*trace)[k] = rec;
        }
    };

    GameResult result;
    result.rounds_per_setting = rounds_per_setting;
    result.seed = seed;
    result.policy = policy;

    if (threads == 1) {
        worker(0, total, result.per_setting);
        return result;
    }

    const std::uint64_t n_threads = std::min<std::uint64_t>(threads, total);
    std::vector<std::array<CorrelationEstimate, 4>> partial(n_threads);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    const std::uint64_t chunk = (total + n_threads - 1) / n_threads;
    for (std::uint64_t t = 0; t < n_threads; ++t) {
        const std::uint64_t begin = t * chunk;
        const std::uint64_t end = std::min(total, begin + chunk);
        pool.emplace_back(worker, begin, end, std::ref(partial[t]));
    }
    for (auto& th : pool) th.join();
    for (const auto& acc : partial)
        for (std::size_t s = 0; s < 4; ++s) result.per_setting[s].merge(acc[s]);
    return result;
}

OutcomeMeans empirical_means(std::span<const RoundRecord> records) {
    if (records.empty()) throw std::invalid_argument("empirical_means: no records");
    std::int64_t sa = 0, sb = 0;
    for (const auto& rec : records) {
        sa += rec.s_a;
        sb += rec.s_b;
    }
    OutcomeMeans means;
    means.mean_sa = static_cast<double>(sa) / static_cast<double>(records.size());
    means.mean_sb = static_cast<double>(sb) / static_cast<double>(records.size());
    return means;
}

}  // namespace chsh
