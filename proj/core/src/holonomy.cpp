#include "chsh/holonomy.hpp"

#include "chsh/angles.hpp"

namespace chsh {

HolonomyResult holonomy_delta(const GammaMap& map, const GameSettings& settings) {
    HolonomyResult result;
    result.legs = {map.gamma_inverse(settings.a1b1), map.gamma_inverse(settings.a1b2),
                   map.gamma_inverse(settings.a2b1), map.gamma_inverse(settings.a2b2)};
    result.alternating_sum =
        wrap_angle(result.legs[1] - result.legs[3] + result.legs[2] - result.legs[0]);
    result.delta = map.gamma(result.alternating_sum);
    return result;
}

double cyclic_walk(const GammaMap& map, const GameSettings& settings, double delta_a1) {
    const double delta_b1 = transform(map, settings.a1b1, delta_a1);
    const double delta_a2 = transform(map, settings.a2b1, delta_b1);
    const double delta_b2 = transform(map, settings.a2b2, delta_a2);
    return transform(map, settings.a1b2, delta_b2);
}

}  // namespace chsh
