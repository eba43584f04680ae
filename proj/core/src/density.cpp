#include "chsh/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chsh/angles.hpp"

namespace chsh {

namespace {

constexpr std::size_t kMinTableNodes = 16;
constexpr double kGridTol = 1e-9;          // allowed node placement error
constexpr std::size_t kBuiltinPanels = 100000;  // Simpson panels for validation
constexpr std::size_t kBuiltinCheckPoints = 4097;

double builtin_eval(DensityKind kind, double d) {
    if (kind == DensityKind::Uniform) return 1.0 / kTwoPi;
    return std::abs(std::sin(d)) / 4.0;
}

}  // namespace

DensityModel DensityModel::uniform() { return DensityModel(DensityKind::Uniform, "uniform"); }

DensityModel DensityModel::quantum() { return DensityModel(DensityKind::Quantum, "quantum"); }

DensityModel DensityModel::builtin(std::string_view name) {
    if (name == "uniform") return uniform();
    if (name == "quantum") return quantum();
    throw std::invalid_argument("unknown builtin density: " + std::string(name));
}

DensityModel DensityModel::tabulated(std::vector<double> delta, std::vector<double> rho,
                                     std::string name) {
    if (delta.size() != rho.size())
        throw std::invalid_argument("density table: delta/rho size mismatch");
    const std::size_t m = delta.size();
    if (m < kMinTableNodes)
        throw std::invalid_argument("density table: need at least 16 nodes");
    for (double v : delta)
        if (!std::isfinite(v)) throw std::invalid_argument("density table: non-finite node");
    for (double v : rho)
        if (!std::isfinite(v)) throw std::invalid_argument("density table: non-finite value");

    const double h = kTwoPi / static_cast<double>(m);
    if (std::abs(delta.front() + kPi) > kGridTol)
        throw std::invalid_argument("density table: first node must be -pi");
    for (std::size_t k = 0; k < m; ++k) {
        const double expected = -kPi + h * static_cast<double>(k);
        if (std::abs(delta[k] - expected) > kGridTol)
            throw std::invalid_argument("density table: nodes must be equally spaced on [-pi, pi)");
    }

    DensityModel model(DensityKind::Tabulated, std::move(name));
    model.delta_ = std::move(delta);
    model.rho_ = std::move(rho);
    model.spacing_ = h;

    // Exact integral of the linear interpolant, panel by panel; the last
    // panel wraps from the last node back to rho(-pi).
    model.cum_.assign(m + 1, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const double r0 = model.rho_[k];
        const double r1 = model.rho_[(k + 1) % m];
        model.cum_[k + 1] = model.cum_[k] + 0.5 * h * (r0 + r1);
    }
    model.cum_at_zero_ = model.table_integral_from_minus_pi(0.0);
    return model;
}

DensityModel DensityModel::tabulate(const DensityModel& src, std::size_t nodes,
                                    std::string name) {
    const double h = kTwoPi / static_cast<double>(nodes);
    std::vector<double> delta(nodes), rho(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        delta[k] = -kPi + h * static_cast<double>(k);
        rho[k] = src(delta[k]);
    }
    if (name.empty()) name = src.name() + "-table";
    return tabulated(std::move(delta), std::move(rho), std::move(name));
}

double DensityModel::table_eval(double d) const {
    const std::size_t m = rho_.size();
    double t = (d + kPi) / spacing_;
    auto k = static_cast<std::size_t>(std::min(std::floor(t), static_cast<double>(m - 1)));
    const double f = t - static_cast<double>(k);
    return rho_[k] + f * (rho_[(k + 1) % m] - rho_[k]);
}

double DensityModel::table_integral_from_minus_pi(double x) const {
    const std::size_t m = rho_.size();
    double t = (x + kPi) / spacing_;
    t = std::clamp(t, 0.0, static_cast<double>(m));
    auto k = static_cast<std::size_t>(std::min(std::floor(t), static_cast<double>(m - 1)));
    const double f = t - static_cast<double>(k);
    const double r0 = rho_[k];
    const double r1 = rho_[(k + 1) % m];
    return cum_[k] + spacing_ * (r0 * f + 0.5 * (r1 - r0) * f * f);
}

double DensityModel::operator()(double delta) const {
    if (!std::isfinite(delta)) throw std::domain_error("density evaluated at non-finite angle");
    const double d = wrap_angle(delta);
    if (kind_ != DensityKind::Tabulated) return builtin_eval(kind_, d);
    return table_eval(d);
}

double DensityModel::integral_from_zero(double delta) const {
    if (!std::isfinite(delta)) throw std::domain_error("density integral at non-finite angle");
    const double sign = (delta < 0.0) ? -1.0 : 1.0;
    const double a = std::min(std::abs(delta), kPi);
    switch (kind_) {
        case DensityKind::Uniform:
            return sign * a / kTwoPi;
        case DensityKind::Quantum:
            return sign * (1.0 - std::cos(a)) / 4.0;
        case DensityKind::Tabulated:
            return sign * (table_integral_from_minus_pi(a) - cum_at_zero_);
    }
    return 0.0;  // unreachable
}

bool DensityReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const DensityCheck& c) { return c.passed; });
}

const DensityCheck* DensityReport::find(std::string_view name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

DensityReport validate_density(const DensityModel& model, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("validation tolerance must be positive");

    DensityReport report;
    auto add = [&](std::string name, double residual) {
        report.checks.push_back({std::move(name), residual <= tol, residual});
    };

    // Normalization. Tables integrate exactly (the representation is piecewise
    // linear); builtins use composite Simpson on the evaluation grid.
    double normalization_residual;
    if (model.kind() == DensityKind::Tabulated) {
        const double total =
            model.integral_from_zero(kPi) - model.integral_from_zero(-kPi);
        normalization_residual = std::abs(total - 1.0);
    } else {
        const std::size_t panels = kBuiltinPanels;
        const double h = kTwoPi / static_cast<double>(panels);
        double sum = model(-kPi) + builtin_eval(model.kind(), kPi);
        for (std::size_t k = 1; k < panels; ++k) {
            const double x = -kPi + h * static_cast<double>(k);
            sum += ((k % 2 == 1) ? 4.0 : 2.0) * model(x);
        }
        normalization_residual = std::abs(sum * h / 3.0 - 1.0);
    }
    add("normalization", normalization_residual);

    // Check points: table nodes in [0, pi) for tables, an even grid on [0, pi]
    // for builtins.
    std::vector<double> points;
    if (model.kind() == DensityKind::Tabulated) {
        for (double d : model.grid())
            if (d >= 0.0) points.push_back(d);
    } else {
        points.resize(kBuiltinCheckPoints);
        for (std::size_t k = 0; k < kBuiltinCheckPoints; ++k)
            points[k] = kPi * static_cast<double>(k) / static_cast<double>(kBuiltinCheckPoints - 1);
    }

    double reflection_residual = 0.0, half_turn_residual = 0.0;
    double min_value = std::numeric_limits<double>::infinity();
    for (double d : points) {
        const double v = model(d);
        reflection_residual = std::max(reflection_residual, std::abs(model(-d) - v));
        half_turn_residual = std::max(half_turn_residual, std::abs(model(kPi - d) - v));
        min_value = std::min(min_value, v);
    }
    add("parity_reflection", reflection_residual);
    add("parity_half_turn", half_turn_residual);
    add("non_negativity", std::max(0.0, -min_value));

    // Strict monotonicity of the cumulative: every grid-spacing subinterval
    // must carry positive mass. Qualitative, so a violation reports a
    // residual >= 1 that fails any sensible tolerance.
    double min_mass = std::numeric_limits<double>::infinity();
    if (model.kind() == DensityKind::Tabulated) {
        const double h = model.spacing();
        const std::size_t m = model.grid().size();
        for (std::size_t k = 0; k < m; ++k) {
            const double lo = -kPi + h * static_cast<double>(k);
            const double hi = std::min(lo + h, kPi);
            min_mass = std::min(min_mass,
                                model.integral_from_zero(hi) - model.integral_from_zero(lo));
        }
    } else {
        const std::size_t panels = 4096;
        const double h = kTwoPi / static_cast<double>(panels);
        for (std::size_t k = 0; k < panels; ++k) {
            const double lo = -kPi + h * static_cast<double>(k);
            min_mass = std::min(min_mass, model.integral_from_zero(lo + h) -
                                              model.integral_from_zero(lo));
        }
    }
    add("cumulative_monotone", min_mass > 0.0 ? 0.0 : 1.0 - min_mass);

    return report;
}

double default_density_tol(const DensityModel& model) {
    return model.is_builtin() ? 1e-8 : 1e-6;
}

}  // namespace chsh
