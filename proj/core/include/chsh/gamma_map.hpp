#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "chsh/density.hpp"

namespace chsh {

// Measure-preserving transport between the hidden-angle density rho and the
// uniform density on [-pi, pi).
//
// gamma_inverse maps a rho-distributed angle to a uniform one:
//   Ginv(d) = 2*pi * (signed integral of rho from 0 to d),
// rescaled so the endpoints land on +-pi exactly. It is strictly increasing
// and antisymmetric, with fixed points 0, +-pi/2, +-pi. gamma is its inverse
// and pushes uniform angles forward to rho.
//
// Builtins evaluate both directions in closed form. Tabulated sources use the
// exact piecewise-quadratic integral of the piecewise-linear density for
// gamma_inverse, and table-bracketed bisection (never Newton: the slope of
// gamma is unbounded wherever rho vanishes) for gamma.
//
// Immutable after build; concurrent evaluation is safe.
class GammaMap {
  public:
    static constexpr std::size_t kDefaultGridSize = 8193;
    static constexpr double kDefaultBuiltinTol = 1e-10;
    static constexpr double kDefaultTableTol = 1e-6;

    // Validates the model first (throws std::invalid_argument with the failed
    // check names if it is not admissible). Requires n >= 257 and tol > 0.
    // Throws std::runtime_error if the node table comes out non-monotone.
    static GammaMap build(DensityModel model, std::size_t n = kDefaultGridSize,
                          double tol = kDefaultBuiltinTol);

    // Ginv. Accepts the closed interval [-pi, pi] (the endpoint pi is kept,
    // not wrapped); anything outside is wrapped into [-pi, pi). Non-finite
    // input throws std::domain_error.
    double gamma_inverse(double delta) const;

    // Inverse map, same domain conventions. Result within tol.
    double gamma(double x) const;

    const DensityModel& source() const { return source_; }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> ginv_values() const { return ginv_; }
    double tol() const { return tol_; }
    std::size_t grid_size() const { return nodes_.size(); }

    // Two-column dump "x,ginv" for plotting.
    void write_table_csv(std::ostream& os) const;

  private:
    explicit GammaMap(DensityModel model) : source_(std::move(model)) {}

    double ginv_upper(double a) const;   // a in [0, pi]
    double gamma_upper(double y) const;  // y in [0, pi]

    DensityModel source_;
    std::vector<double> nodes_;
    std::vector<double> ginv_;
    double tol_ = kDefaultBuiltinTol;
    double scale_ = 1.0;  // pi / raw cumulative at pi
};

// Sensible inversion tolerance per source kind: kDefaultBuiltinTol for
// builtins, kDefaultTableTol for tabulated densities.
double default_map_tol(const DensityModel& model);

}  // namespace chsh
