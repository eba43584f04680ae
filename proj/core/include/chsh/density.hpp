#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chsh {

enum class DensityKind { Uniform, Quantum, Tabulated };

// Probability density rho(delta) of the hidden angle on [-pi, pi).
//
// Builtins evaluate in closed form: "uniform" is 1/(2pi), "quantum" is
// |sin(delta)|/4. Tabulated models hold equally spaced nodes on [-pi, pi)
// (first node -pi, last node < pi) and interpolate linearly, wrapping
// periodically between the last and first node.
//
// Immutable after construction; safe to share across threads.
class DensityModel {
  public:
    static DensityModel uniform();
    static DensityModel quantum();
    static DensityModel builtin(std::string_view name);  // "uniform" | "quantum"

    // Structural requirements (throws std::invalid_argument): matching array
    // sizes, >= 16 nodes, equal spacing, first node -pi, last node < pi, all
    // values finite. Value-level properties (non-negativity, symmetry,
    // normalization) are the business of validate_density.
    static DensityModel tabulated(std::vector<double> delta, std::vector<double> rho,
                                  std::string name = "table");

    // Sample `src` on `nodes` equally spaced points and return the table.
    // With an even node count the kinks of the quantum density (0, +-pi) fall
    // exactly on nodes, which keeps reflection checks node-exact.
    static DensityModel tabulate(const DensityModel& src, std::size_t nodes,
                                 std::string name = {});

    // rho(delta). Input is wrapped into [-pi, pi); non-finite input throws
    // std::domain_error.
    double operator()(double delta) const;

    // Exact signed integral of the represented density from 0 to delta,
    // delta in [-pi, pi]. Closed form for builtins; for tables this is the
    // exact (piecewise quadratic) integral of the linear interpolant.
    double integral_from_zero(double delta) const;

    DensityKind kind() const { return kind_; }
    bool is_builtin() const { return kind_ != DensityKind::Tabulated; }
    const std::string& name() const { return name_; }

    std::span<const double> grid() const { return delta_; }    // empty for builtins
    std::span<const double> values() const { return rho_; }    // empty for builtins
    double spacing() const { return spacing_; }                // 0 for builtins

  private:
    DensityModel(DensityKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

    DensityKind kind_;
    std::string name_;
    std::vector<double> delta_;
    std::vector<double> rho_;
    std::vector<double> cum_;   // cum_[k] = integral of interpolant over [-pi, delta_k]
    double spacing_ = 0.0;
    double cum_at_zero_ = 0.0;  // integral over [-pi, 0]

    double table_eval(double delta) const;
    double table_integral_from_minus_pi(double x) const;
};

struct DensityCheck {
    std::string name;
    bool passed;
    double residual;
};

struct DensityReport {
    std::vector<DensityCheck> checks;
    bool passed() const;
    const DensityCheck* find(std::string_view name) const;
};

// Runs the admissibility checks: normalization, both parity reflections
// (rho(-d) == rho(d) and rho(pi-d) == rho(d)), non-negativity, and strict
// monotonicity of the cumulative on every grid-spacing subinterval. A check
// passes iff its residual <= tol; the monotonicity residual is 0 when every
// subinterval carries strictly positive mass and >= 1 otherwise.
DensityReport validate_density(const DensityModel& model, double tol);

// 1e-8 for builtins, 1e-6 for tabulated input (interpolation error dominates
// user tables).
double default_density_tol(const DensityModel& model);

}  // namespace chsh
