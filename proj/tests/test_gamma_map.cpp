#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "chsh/angles.hpp"
#include "chsh/density.hpp"
#include "chsh/gamma_map.hpp"
#include "oracles.hpp"

using chsh::DensityModel;
using chsh::GammaMap;
using chsh::kPi;

// The closed-form oracles must agree with independent quadrature before
// anything else relies on them.
TEST_CASE("oracle: ginv_quantum matches adaptive quadrature") {
    oracle::TestRng rng(11);
    for (int i = 0; i < 50; ++i) {
        const double d = rng.angle();
        const double quad =
            2.0 * kPi * oracle::integrate(oracle::rho_quantum, 0.0, d, 1e-14);
        CHECK(std::abs(oracle::ginv_quantum(d) - quad) <= 1e-10);
    }
}

TEST_CASE("oracle: gamma_quantum inverts ginv_quantum") {
    oracle::TestRng rng(12);
    for (int i = 0; i < 50; ++i) {
        const double d = rng.angle();
        CHECK(std::abs(oracle::gamma_quantum(oracle::ginv_quantum(d)) - d) <= 1e-12);
    }
    // And against bisection on the quadrature-based forward map.
    for (double y : {0.3, 1.0, 1.301290284568573, 2.5}) {
        double lo = 0.0, hi = kPi;
        while (hi - lo > 1e-13) {
            const double mid = 0.5 * (lo + hi);
            const double g = 2.0 * kPi * oracle::integrate(oracle::rho_quantum, 0.0, mid, 1e-15);
            (g < y ? lo : hi) = mid;
        }
        CHECK(std::abs(oracle::gamma_quantum(y) - 0.5 * (lo + hi)) <= 1e-9);
    }
}

TEST_CASE("uniform map is the identity at nodes and between them") {
    const auto map = GammaMap::build(DensityModel::uniform());
    for (std::size_t k = 0; k < map.grid_size(); ++k)
        CHECK(map.ginv_values()[k] == doctest::Approx(map.nodes()[k]).epsilon(1e-15));
    CHECK(map.gamma_inverse(0.3) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(map.gamma(0.3) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("quantum map fixed points and oracle values") {
    const auto map = GammaMap::build(DensityModel::quantum());
    CHECK(map.gamma_inverse(0.0) == 0.0);
    CHECK(std::abs(map.gamma_inverse(kPi / 2) - kPi / 2) <= 1e-12);
    CHECK(std::abs(map.gamma_inverse(-kPi / 2) + kPi / 2) <= 1e-12);
    CHECK(map.gamma_inverse(kPi) == kPi);
    CHECK(map.gamma_inverse(-kPi) == -kPi);
    CHECK(std::abs(map.gamma(kPi / 2) - kPi / 2) <= 1e-12);

    // Frozen from the quadrature-verified closed form (pi/2)(1 - cos(pi/4)).
    CHECK(std::abs(map.gamma_inverse(kPi / 4) - 0.460075592255305) <= 1e-12);
    CHECK(std::abs(map.gamma_inverse(-kPi / 4) + 0.460075592255305) <= 1e-12);
    // Gamma at the alternating sum of the optimal settings.
    CHECK(std::abs(map.gamma(1.301290284568573) - 1.3983703290820475) <= 1e-4);
}

TEST_CASE("inputs outside [-pi, pi] wrap; the closed endpoint pi is kept") {
    const auto map = GammaMap::build(DensityModel::quantum());
    CHECK(map.gamma_inverse(kPi) == kPi);
    CHECK(map.gamma_inverse(3.0 * kPi) == -kPi);  // wrapped, upper endpoint drops to -pi
    CHECK(map.gamma_inverse(2.0 * kPi + 0.25) ==
          doctest::Approx(map.gamma_inverse(0.25)).epsilon(1e-15));
    CHECK_THROWS_AS(map.gamma_inverse(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(map.gamma(INFINITY), std::domain_error);
}

TEST_CASE("build rejects bad arguments and degenerate densities") {
    CHECK_THROWS_AS(GammaMap::build(DensityModel::quantum(), 100), std::invalid_argument);
    CHECK_THROWS_AS(GammaMap::build(DensityModel::quantum(), 8193, 0.0),
                    std::invalid_argument);

    std::vector<double> delta(64), rho(64, 0.0);
    for (std::size_t k = 0; k < 64; ++k) delta[k] = -kPi + 2.0 * kPi * k / 64;
    const auto zeros = DensityModel::tabulated(std::move(delta), std::move(rho));
    CHECK_THROWS_AS(GammaMap::build(zeros), std::invalid_argument);
}

TEST_CASE("round trips within 1e-8 for builtins at n = 8193") {
    for (const char* name : {"uniform", "quantum"}) {
        const auto map = GammaMap::build(DensityModel::builtin(name), 8193, 1e-10);
        oracle::TestRng rng(21);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double x = rng.angle();
            worst = std::max(worst, std::abs(map.gamma(map.gamma_inverse(x)) - x));
            worst = std::max(worst, std::abs(map.gamma_inverse(map.gamma(x)) - x));
        }
        CAPTURE(name);
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("antisymmetry is exact by construction") {
    const auto map = GammaMap::build(DensityModel::quantum());
    oracle::TestRng rng(22);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.angle();
        CHECK(map.gamma_inverse(-x) == -map.gamma_inverse(x));
        CHECK(map.gamma(-x) == -map.gamma(x));
    }
}

TEST_CASE("tabulated quantum map tracks the closed form") {
    const auto table = DensityModel::tabulate(DensityModel::quantum(), 8192);
    const auto map = GammaMap::build(table, 8193, 1e-10);

    oracle::TestRng rng(23);
    double worst_ginv = 0.0, worst_gamma = 0.0, worst_round = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double x = rng.angle();
        worst_ginv = std::max(worst_ginv,
                              std::abs(map.gamma_inverse(x) - oracle::ginv_quantum(x)));
        worst_gamma = std::max(worst_gamma, std::abs(map.gamma(x) - oracle::gamma_quantum(x)));
        worst_round = std::max(worst_round, std::abs(map.gamma(map.gamma_inverse(x)) - x));
    }
    CHECK(worst_ginv <= 1e-6);
    CHECK(worst_gamma <= 1e-5);  // slope of gamma blows up where rho vanishes
    CHECK(worst_round <= 1e-8);

    // Fixed points through the table path.
    CHECK(std::abs(map.gamma_inverse(kPi / 2) - kPi / 2) <= 1e-6);
    CHECK(map.gamma_inverse(kPi) == kPi);
    CHECK(map.gamma_inverse(0.0) == 0.0);
}

TEST_CASE("tabulated maps from random symmetric densities round-trip") {
    for (std::uint64_t seed : {5ull, 6ull}) {
        const auto model = oracle::random_symmetric_density(seed);
        const auto map = GammaMap::build(model, 4097, 1e-10);
        oracle::TestRng rng(seed);
        double worst = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const double x = rng.angle();
            worst = std::max(worst, std::abs(map.gamma(map.gamma_inverse(x)) - x));
            worst = std::max(worst, std::abs(map.gamma_inverse(map.gamma(x)) - x));
        }
        CAPTURE(seed);
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("gamma pushes the uniform law forward to rho (KS at 1%)") {
    const std::size_t n_samples = 100000;
    SUBCASE("builtin quantum") {
        const auto map = GammaMap::build(DensityModel::quantum());
        oracle::TestRng rng(31);
        std::vector<double> samples(n_samples);
        for (auto& s : samples) s = map.gamma(rng.angle());
        CHECK(oracle::ks_statistic(std::move(samples), oracle::cdf_quantum) <
              oracle::ks_critical_1pct(n_samples));
    }
    SUBCASE("tabulated quantum") {
        const auto map =
            GammaMap::build(DensityModel::tabulate(DensityModel::quantum(), 8192), 8193, 1e-10);
        oracle::TestRng rng(32);
        std::vector<double> samples(n_samples);
        for (auto& s : samples) s = map.gamma(rng.angle());
        CHECK(oracle::ks_statistic(std::move(samples), oracle::cdf_quantum) <
              oracle::ks_critical_1pct(n_samples));
    }
}

TEST_CASE("strict monotonicity of the node table") {
    for (const char* name : {"uniform", "quantum"}) {
        const auto map = GammaMap::build(DensityModel::builtin(name));
        const auto values = map.ginv_values();
        for (std::size_t k = 1; k < values.size(); ++k) CHECK(values[k] > values[k - 1]);
    }
}

TEST_CASE("CSV dump has a header and one row per node") {
    const auto map = GammaMap::build(DensityModel::uniform(), 257, 1e-10);
    std::ostringstream os;
    map.write_table_csv(os);
    const std::string text = os.str();
    CHECK(text.rfind("x,ginv\n", 0) == 0);
    std::size_t rows = 0;
    for (char c : text)
        if (c == '\n') ++rows;
    CHECK(rows == 258);  // header + 257 nodes
}

TEST_CASE("default map tolerance depends on the density kind") {
    CHECK(chsh::default_map_tol(DensityModel::quantum()) == GammaMap::kDefaultBuiltinTol);
    CHECK(chsh::default_map_tol(DensityModel::tabulate(DensityModel::quantum(), 64)) ==
          GammaMap::kDefaultTableTol);
}
