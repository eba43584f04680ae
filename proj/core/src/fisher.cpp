#include "chsh/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chsh/angles.hpp"

namespace chsh {

double p_plus(const GammaMap& map, double theta) {
    if (!std::isfinite(theta) || theta < 0.0 || theta >= kPi)
        throw std::domain_error("p_plus: theta must lie in [0, pi)");
    return map.gamma_inverse(theta) / kPi;
}

double fisher_information(const DensityModel& model, const GammaMap& map, double theta) {
    if (!std::isfinite(theta) || theta <= 0.0 || theta >= kPi)
        throw std::domain_error("fisher_information: theta must lie strictly inside (0, pi)");
    const double p = p_plus(map, theta);
    if (p <= 0.0 || p >= 1.0)
        throw std::domain_error("fisher_information: outcome distribution is degenerate here");
    const double rho = model(theta);
    return 4.0 * rho * rho / (p * (1.0 - p));
}

FisherProfile fisher_profile(const DensityModel& model, const GammaMap& map,
                             std::size_t grid_points, double margin) {
    if (grid_points == 0) throw std::invalid_argument("fisher_profile: empty grid");
    if (!(margin > 0.0) || 2.0 * margin >= kPi)
        throw std::invalid_argument("fisher_profile: margin must lie in (0, pi/2)");

    FisherProfile profile;
    profile.density_name = model.name();
    profile.margin = margin;
    profile.theta.resize(grid_points);
    profile.p_plus.resize(grid_points);
    profile.info.resize(grid_points);

    const double span = kPi - 2.0 * margin;
    for (std::size_t k = 0; k < grid_points; ++k) {
        const double theta =
            (grid_points == 1)
                ? margin
                : margin + span * static_cast<double>(k) / static_cast<double>(grid_points - 1);
        profile.theta[k] = theta;
        profile.p_plus[k] = p_plus(map, theta);
        profile.info[k] = fisher_information(model, map, theta);
    }
    return profile;
}

double cramer_rao_bound(double info) {
    if (!(info > 0.0)) throw std::domain_error("cramer_rao_bound: information must be positive");
    return 1.0 / info;
}

double average_fisher(const FisherProfile& profile) {
    if (profile.theta.empty()) throw std::invalid_argument("average_fisher: empty profile");
    const std::size_t n = profile.theta.size();
    if (n == 1) return profile.info[0];
    double integral = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        integral += 0.5 * (profile.info[k] + profile.info[k + 1]) *
                    (profile.theta[k + 1] - profile.theta[k]);
    }
    return integral / (profile.theta.back() - profile.theta.front());
}

FisherSummary summarize_fisher(const DensityModel& model, const GammaMap& map,
                               const FisherProfile& profile) {
    FisherSummary summary;
    summary.mean = average_fisher(profile);
    for (double v : profile.info)
        summary.max_dev_from_mean = std::max(summary.max_dev_from_mean,
                                             std::abs(v - summary.mean));
    const FisherProfile probe =
        fisher_profile(model, map, profile.theta.size(), profile.margin / 10.0);
    summary.divergence_flag = average_fisher(probe) > 1.1 * summary.mean;
    return summary;
}

}  // namespace chsh
