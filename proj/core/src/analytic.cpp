#include "chsh/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chsh/angles.hpp"

namespace chsh {

double correlation(const GammaMap& map, double theta) {
    return -1.0 + (2.0 / kPi) * std::abs(map.gamma_inverse(theta));
}

double score(const GammaMap& map, const GameSettings& settings) {
    return std::abs(correlation(map, settings.a1b1) + correlation(map, settings.a2b1) +
                    correlation(map, settings.a2b2) - correlation(map, settings.a1b2));
}

bool IdentityReport::all_equal_two() const {
    return std::all_of(cases.begin(), cases.end(),
                       [](const IdentityCase& c) { return c.value == 2; });
}

IdentityReport chsh_identity_check() {
    IdentityReport report;
    for (int bits = 0; bits < 16; ++bits) {
        const int sa1 = (bits & 1) ? 1 : -1;
        const int sa2 = (bits & 2) ? 1 : -1;
        const int sb1 = (bits & 4) ? 1 : -1;
        const int sb2 = (bits & 8) ? 1 : -1;
        IdentityCase c;
        c.outcomes = {sa1, sa2, sb1, sb2};
        c.value = std::abs(sa1 * sb1 + sa2 * sb1 + sa2 * sb2 - sa1 * sb2);
        report.cases[static_cast<std::size_t>(bits)] = c;
    }
    return report;
}

CorrelationCurve sweep(const GammaMap& map, std::size_t n_points) {
    if (n_points < 3) throw std::invalid_argument("sweep: need at least 3 points");
    CorrelationCurve curve;
    curve.density_name = map.source().name();
    curve.theta.resize(n_points);
    curve.value.resize(n_points);
    const double step = kTwoPi / static_cast<double>(n_points - 1);
    for (std::size_t k = 0; k < n_points; ++k) {
        const double theta = wrap_angle(-kPi + step * static_cast<double>(k));
        curve.theta[k] = theta;
        curve.value[k] = correlation(map, theta);
    }
    return curve;
}

namespace {

// Nelder-Mead on -score over detector angles x = (a1, a2, b2), b1 = 0.
struct Simplex {
    using Point = std::array<double, 3>;

    static GameSettings settings_of(const Point& x, double calibration_offset) {
        return GameSettings::of(x[0], x[0] - x[2], x[1], x[1] - x[2],
                                /*enforce_additivity=*/false, calibration_offset);
    }
};

}  // namespace

OptimizationResult maximize_score(const GammaMap& map, bool enforce_additivity, int starts,
                                  double tol) {
    if (starts < 1) throw std::invalid_argument("maximize_score: starts must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("maximize_score: tol must be positive");

    using Point = Simplex::Point;
    std::uint64_t evaluations = 0;
    const auto objective = [&](const Point& x) {
        ++evaluations;
        return -score(map, Simplex::settings_of(x, 0.0));
    };

    // Coarse start grid: smallest cube covering the requested start count.
    int grid = 1;
    while (grid * grid * grid < starts) ++grid;

    Point best_x{0.0, 0.0, 0.0};
    double best_f = objective(best_x);

    constexpr int kMaxIter = 400;
    for (int s = 0; s < starts; ++s) {
        const int i = s % grid;
        const int j = (s / grid) % grid;
        const int k = s / (grid * grid);
        const auto coord = [&](int idx) {
            return -kPi + kTwoPi * (static_cast<double>(idx) + 0.5) / static_cast<double>(grid);
        };
        Point start{coord(i), coord(j), coord(k)};

        // Initial simplex: start point plus one offset vertex per coordinate.
        constexpr double kStep = 0.45;
        std::array<Point, 4> vertex;
        std::array<double, 4> value;
        vertex[0] = start;
        value[0] = objective(start);
        for (int d = 0; d < 3; ++d) {
            vertex[static_cast<std::size_t>(d) + 1] = start;
            vertex[static_cast<std::size_t>(d) + 1][static_cast<std::size_t>(d)] += kStep;
            value[static_cast<std::size_t>(d) + 1] = objective(vertex[static_cast<std::size_t>(d) + 1]);
        }

        for (int iter = 0; iter < kMaxIter; ++iter) {
            std::array<std::size_t, 4> order{0, 1, 2, 3};
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
            const std::size_t lo = order[0], hi = order[3], second_hi = order[2];

            if (value[hi] - value[lo] < tol) break;

            Point centroid{0.0, 0.0, 0.0};
            for (std::size_t v = 0; v < 4; ++v) {
                if (v == hi) continue;
                for (std::size_t d = 0; d < 3; ++d) centroid[d] += vertex[v][d] / 3.0;
            }

            const auto blend = [&](double t) {
                Point p;
                for (std::size_t d = 0; d < 3; ++d)
                    p[d] = centroid[d] + t * (vertex[hi][d] - centroid[d]);
                return p;
            };

            const Point reflected = blend(-1.0);
            const double f_reflected = objective(reflected);
            if (f_reflected < value[lo]) {
                const Point expanded = blend(-2.0);
                const double f_expanded = objective(expanded);
                if (f_expanded < f_reflected) {
                    vertex[hi] = expanded;
                    value[hi] = f_expanded;
                } else {
                    vertex[hi] = reflected;
                    value[hi] = f_reflected;
                }
                continue;
            }
            if (f_reflected < value[second_hi]) {
                vertex[hi] = reflected;
                value[hi] = f_reflected;
                continue;
            }
            const Point contracted = blend(0.5);
            const double f_contracted = objective(contracted);
            if (f_contracted < value[hi]) {
                vertex[hi] = contracted;
                value[hi] = f_contracted;
                continue;
            }
            // Shrink toward the best vertex.
            for (std::size_t v = 0; v < 4; ++v) {
                if (v == lo) continue;
                for (std::size_t d = 0; d < 3; ++d)
                    vertex[v][d] = vertex[lo][d] + 0.5 * (vertex[v][d] - vertex[lo][d]);
                value[v] = objective(vertex[v]);
            }
        }

        for (std::size_t v = 0; v < 4; ++v) {
            if (value[v] < best_f) {
                best_f = value[v];
                best_x = vertex[v];
            }
        }
    }

    OptimizationResult result;
    result.best_score = -best_f;
    result.evaluations = evaluations;
    result.starts = starts;
    result.settings = GameSettings::of(best_x[0], best_x[0] - best_x[2], best_x[1],
                                       best_x[1] - best_x[2], enforce_additivity, 0.0);
    return result;
}

}  // namespace chsh
