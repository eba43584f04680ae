#include "chsh/gamma_map.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "chsh/angles.hpp"

namespace chsh {

namespace {

constexpr std::size_t kMinGridSize = 257;

// Map inputs onto the closed interval [-pi, pi]: values inside it (including
// the endpoint pi) are kept, everything else is wrapped into [-pi, pi).
double clamp_to_closed_circle(double x, const char* what) {
    if (!std::isfinite(x)) throw std::domain_error(what);
    if (x >= -kPi && x <= kPi) return x;
    return wrap_angle(x);
}

}  // namespace

GammaMap GammaMap::build(DensityModel model, std::size_t n, double tol) {
    if (n < kMinGridSize) throw std::invalid_argument("gamma map: grid size must be >= 257");
    if (!(tol > 0.0)) throw std::invalid_argument("gamma map: tolerance must be positive");

    const DensityReport report = validate_density(model, default_density_tol(model));
    if (!report.passed()) {
        std::string failed;
        for (const auto& c : report.checks)
            if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
        throw std::invalid_argument("gamma map: density failed validation (" + failed + ")");
    }

    GammaMap map(std::move(model));
    map.tol_ = tol;

    // Rescale so the endpoints land on +-pi exactly even when the table
    // normalization is off by its quadrature residual. This keeps
    // 1 - Ginv(theta)/pi free of a spurious offset near theta = pi.
    const double half_mass = map.source_.integral_from_zero(kPi);
    if (!(half_mass > 0.0)) throw std::runtime_error("gamma map: degenerate density");
    map.scale_ = kPi / (kTwoPi * half_mass);

    map.nodes_.resize(n);
    map.ginv_.resize(n);
    const double step = kTwoPi / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        const double x = (k + 1 == n) ? kPi : -kPi + step * static_cast<double>(k);
        map.nodes_[k] = x;
        map.ginv_[k] = map.gamma_inverse(x);
    }
    for (std::size_t k = 1; k < n; ++k)
        if (!(map.ginv_[k] > map.ginv_[k - 1]))
            throw std::runtime_error("gamma map: table is not strictly increasing");

    return map;
}

double GammaMap::ginv_upper(double a) const {
    switch (source_.kind()) {
        case DensityKind::Uniform:
            return a;
        case DensityKind::Quantum:
            return (a >= kPi) ? kPi : 0.5 * kPi * (1.0 - std::cos(a));
        case DensityKind::Tabulated: {
            const double raw = kTwoPi * source_.integral_from_zero(a);
            return std::min(raw * scale_, kPi);
        }
    }
    return 0.0;  // unreachable
}

double GammaMap::gamma_inverse(double delta) const {
    const double d = clamp_to_closed_circle(delta, "gamma_inverse of non-finite angle");
    const double value = ginv_upper(std::abs(d));
    return std::signbit(d) ? -value : value;
}

double GammaMap::gamma_upper(double y) const {
    switch (source_.kind()) {
        case DensityKind::Uniform:
            return y;
        case DensityKind::Quantum: {
            const double c = std::clamp(1.0 - 2.0 * y / kPi, -1.0, 1.0);
            return std::acos(c);
        }
        case DensityKind::Tabulated:
            break;
    }

    // Bracket on the monotone node table, then bisect the continuous map.
    auto it = std::lower_bound(ginv_.begin(), ginv_.end(), y);
    if (it == ginv_.begin()) return 0.0;  // y >= 0 and ginv_.front() == -pi
    if (it == ginv_.end()) return kPi;
    std::size_t hi_idx = static_cast<std::size_t>(it - ginv_.begin());
    double lo = nodes_[hi_idx - 1];
    double hi = nodes_[hi_idx];
    lo = std::max(lo, 0.0);  // y >= 0, so the root is in the upper half
    while (hi - lo > tol_) {
        const double mid = 0.5 * (lo + hi);
        if (ginv_upper(mid) < y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double GammaMap::gamma(double x) const {
    const double y = clamp_to_closed_circle(x, "gamma of non-finite angle");
    const double value = gamma_upper(std::abs(y));
    return std::signbit(y) ? -value : value;
}

void GammaMap::write_table_csv(std::ostream& os) const {
    os << "x,ginv\n";
    os.precision(17);
    for (std::size_t k = 0; k < nodes_.size(); ++k)
        os << nodes_[k] << ',' << ginv_[k] << '\n';
}

double default_map_tol(const DensityModel& model) {
    return model.is_builtin() ? GammaMap::kDefaultBuiltinTol : GammaMap::kDefaultTableTol;
}

}  // namespace chsh
