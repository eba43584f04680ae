#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chsh/density.hpp"
#include "chsh/gamma_map.hpp"

namespace chsh {

// Probability that the two detectors report the same outcome at relative
// angle theta in [0, pi): p_plus(theta) = Ginv(theta)/pi (equivalently twice
// the density integral from 0 to theta). Outside [0, pi) throws
// std::domain_error; the sign of theta is unobservable so negative angles are
// not defined here.
double p_plus(const GammaMap& map, double theta);

// Fisher information the +-1 outcome-product Bernoulli variable carries about
// theta: 4 rho(theta)^2 / (p_plus (1 - p_plus)). Requires theta strictly
// inside (0, pi) (the denominator vanishes at the endpoints for every
// admissible density); throws std::domain_error otherwise.
double fisher_information(const DensityModel& model, const GammaMap& map, double theta);

struct FisherProfile {
    std::vector<double> theta;
    std::vector<double> p_plus;
    std::vector<double> info;
    std::string density_name;
    double margin = 0.0;
};

// Uniform grid on [margin, pi - margin]; margin must be positive. A single
// grid point degenerates to {margin}.
FisherProfile fisher_profile(const DensityModel& model, const GammaMap& map,
                             std::size_t grid_points, double margin);

// Cramer-Rao variance lower bound 1/info; throws std::domain_error for
// info <= 0.
double cramer_rao_bound(double info);

// Trapezoidal mean of the profile's information over its interval (the value
// itself for a single-point profile).
double average_fisher(const FisherProfile& profile);

struct FisherSummary {
    double mean = 0.0;
    double max_dev_from_mean = 0.0;
    // Set when shrinking the margin tenfold raises the mean by more than 10%,
    // signalling an endpoint divergence of the average.
    bool divergence_flag = false;
};

FisherSummary summarize_fisher(const DensityModel& model, const GammaMap& map,
                               const FisherProfile& profile);

}  // namespace chsh
