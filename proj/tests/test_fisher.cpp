#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "chsh/analytic.hpp"
#include "chsh/angles.hpp"
#include "chsh/density.hpp"
#include "chsh/fisher.hpp"
#include "chsh/gamma_map.hpp"
#include "oracles.hpp"

using chsh::DensityModel;
using chsh::GammaMap;
using chsh::kPi;

TEST_CASE("p_plus values and domain") {
    const auto quantum = GammaMap::build(DensityModel::quantum());
    CHECK(std::abs(chsh::p_plus(quantum, kPi / 2) - 0.5) <= 1e-12);
    CHECK(chsh::p_plus(quantum, 0.0) == 0.0);

    const auto uniform = GammaMap::build(DensityModel::uniform());
    CHECK(std::abs(chsh::p_plus(uniform, kPi / 4) - 0.25) <= 1e-12);
    CHECK(chsh::p_plus(uniform, 0.0) == 0.0);

    CHECK_THROWS_AS(chsh::p_plus(quantum, -0.1), std::domain_error);
    CHECK_THROWS_AS(chsh::p_plus(quantum, kPi), std::domain_error);
    CHECK_THROWS_AS(chsh::p_plus(quantum, std::nan("")), std::domain_error);
}

TEST_CASE("p_plus equals twice the density integral from zero") {
    const auto model = DensityModel::quantum();
    const auto map = GammaMap::build(model);
    oracle::TestRng rng(81);
    for (int i = 0; i < 200; ++i) {
        const double theta = rng.range(0.0, kPi - 1e-9);
        const double direct = 2.0 * oracle::integrate(oracle::rho_quantum, 0.0, theta, 1e-13);
        CHECK(std::abs(chsh::p_plus(map, theta) - direct) <= 1e-10);
    }
}

TEST_CASE("quantum fisher information is identically 1") {
    const auto model = DensityModel::quantum();
    const auto map = GammaMap::build(model);
    oracle::TestRng rng(82);
    for (int i = 0; i < 500; ++i) {
        const double theta = rng.range(1e-6, kPi - 1e-6);
        CHECK(std::abs(chsh::fisher_information(model, map, theta) - 1.0) <= 1e-9);
    }
    // The spelled-out middle point: 4 * (1/4)^2 / (1/2 * 1/2) = 1.
    CHECK(std::abs(chsh::fisher_information(model, map, kPi / 2) - 1.0) <= 1e-12);
}

TEST_CASE("uniform fisher information at pi/2 is 4/pi^2") {
    const auto model = DensityModel::uniform();
    const auto map = GammaMap::build(model);
    CHECK(std::abs(chsh::fisher_information(model, map, kPi / 2) - 4.0 / (kPi * kPi)) <=
          1e-12);
}

TEST_CASE("fisher information endpoints are singular") {
    const auto model = DensityModel::quantum();
    const auto map = GammaMap::build(model);
    CHECK_THROWS_AS(chsh::fisher_information(model, map, 0.0), std::domain_error);
    CHECK_THROWS_AS(chsh::fisher_information(model, map, kPi), std::domain_error);
    CHECK_THROWS_AS(chsh::fisher_information(model, map, -0.5), std::domain_error);
}

TEST_CASE("quantum profile is flat at 1 within 1e-6") {
    const auto model = DensityModel::quantum();
    const auto map = GammaMap::build(model);
    const auto profile = chsh::fisher_profile(model, map, 1001, 1e-3);
    REQUIRE(profile.theta.size() == 1001);
    CHECK(profile.theta.front() == doctest::Approx(1e-3));
    CHECK(profile.theta.back() == doctest::Approx(kPi - 1e-3));
    double worst = 0.0;
    for (double v : profile.info) worst = std::max(worst, std::abs(v - 1.0));
    CHECK(worst <= 1e-6);
    for (double p : profile.p_plus) {
        CHECK(p > 0.0);
        CHECK(p < 1.0);
    }
}

TEST_CASE("tabulated quantum profile is flat at 1 within 1e-4") {
    const auto table = DensityModel::tabulate(DensityModel::quantum(), 8192);
    const auto map = GammaMap::build(table, 8193, 1e-10);
    const auto profile = chsh::fisher_profile(table, map, 1001, 1e-3);
    double worst = 0.0;
    for (double v : profile.info) worst = std::max(worst, std::abs(v - 1.0));
    CHECK(worst <= 1e-4);
}

TEST_CASE("uniform profile matches the closed form and diverges at the edges") {
    const auto model = DensityModel::uniform();
    const auto map = GammaMap::build(model);
    const auto profile = chsh::fisher_profile(model, map, 1001, 1e-3);
    // I(theta) = (1/pi^2) / ((theta/pi)(1 - theta/pi)), checked at 3 nodes.
    for (std::size_t k : {std::size_t{0}, std::size_t{500}, std::size_t{1000}}) {
        const double theta = profile.theta[k];
        const double expected =
            (1.0 / (kPi * kPi)) / ((theta / kPi) * (1.0 - theta / kPi));
        CHECK(std::abs(profile.info[k] - expected) <= 1e-9 * expected);
    }
    for (double v : profile.info) CHECK(v > 0.0);
    // Strictly non-constant, growing toward the endpoints.
    CHECK(profile.info.front() > 100.0 * profile.info[500]);
    CHECK(profile.info.back() > 100.0 * profile.info[500]);
}

TEST_CASE("profile argument validation") {
    const auto model = DensityModel::quantum();
    const auto map = GammaMap::build(model);
    CHECK_THROWS_AS(chsh::fisher_profile(model, map, 0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(chsh::fisher_profile(model, map, 11, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(chsh::fisher_profile(model, map, 11, kPi), std::invalid_argument);
}

TEST_CASE("cramer-rao bound is the reciprocal information") {
    CHECK(chsh::cramer_rao_bound(1.0) == 1.0);
    CHECK(chsh::cramer_rao_bound(4.0) == 0.25);
    CHECK(std::abs(chsh::cramer_rao_bound(4.0 / (kPi * kPi)) - kPi * kPi / 4.0) <= 1e-12);
    CHECK(std::abs(chsh::cramer_rao_bound(4.0 / (kPi * kPi)) - 2.4674011002723395) <= 1e-12);
    CHECK_THROWS_AS(chsh::cramer_rao_bound(0.0), std::domain_error);
    CHECK_THROWS_AS(chsh::cramer_rao_bound(-1.0), std::domain_error);
}

TEST_CASE("average fisher: quantum flat, uniform divergent") {
    const auto quantum = DensityModel::quantum();
    const auto qmap = GammaMap::build(quantum);
    const auto qprofile = chsh::fisher_profile(quantum, qmap, 1001, 1e-3);
    CHECK(std::abs(chsh::average_fisher(qprofile) - 1.0) <= 1e-6);
    const auto qsummary = chsh::summarize_fisher(quantum, qmap, qprofile);
    CHECK(std::abs(qsummary.mean - 1.0) <= 1e-6);
    CHECK(qsummary.max_dev_from_mean <= 1e-6);
    CHECK_FALSE(qsummary.divergence_flag);

    const auto uniform = DensityModel::uniform();
    const auto umap = GammaMap::build(uniform);
    const auto u2 = chsh::fisher_profile(uniform, umap, 1001, 1e-2);
    const auto u3 = chsh::fisher_profile(uniform, umap, 1001, 1e-3);
    CHECK(chsh::average_fisher(u3) > chsh::average_fisher(u2));
    const auto usummary = chsh::summarize_fisher(uniform, umap, u2);
    CHECK(usummary.divergence_flag);
}

TEST_CASE("single-point profile degenerates to that point's value") {
    const auto model = DensityModel::uniform();
    const auto map = GammaMap::build(model);
    const auto profile = chsh::fisher_profile(model, map, 1, kPi / 2 - 0.1);
    REQUIRE(profile.theta.size() == 1);
    CHECK(chsh::average_fisher(profile) == profile.info[0]);
}

TEST_CASE("average_fisher rejects an empty profile") {
    chsh::FisherProfile empty;
    CHECK_THROWS_AS(chsh::average_fisher(empty), std::invalid_argument);
}

TEST_CASE("consistency: 1 - 2 p_plus equals -E across the grid") {
    for (const char* name : {"uniform", "quantum"}) {
        const auto model = DensityModel::builtin(name);
        const auto map = GammaMap::build(model);
        double worst = 0.0;
        for (int k = 0; k <= 1000; ++k) {
            const double theta = 1e-6 + (kPi - 2e-6) * k / 1000.0;
            const double lhs = 1.0 - 2.0 * chsh::p_plus(map, theta);
            const double rhs = -chsh::correlation(map, theta);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        CAPTURE(name);
        CHECK(worst <= 1e-10);
    }
    const auto table = DensityModel::tabulate(DensityModel::quantum(), 8192);
    const auto tmap = GammaMap::build(table, 8193, 1e-10);
    double worst = 0.0;
    for (int k = 0; k <= 1000; ++k) {
        const double theta = 1e-6 + (kPi - 2e-6) * k / 1000.0;
        worst = std::max(worst, std::abs(1.0 - 2.0 * chsh::p_plus(tmap, theta) +
                                         chsh::correlation(tmap, theta)));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("quantum minimizes the average fisher information (spot check)") {
    const auto quantum = DensityModel::quantum();
    const auto qmap = GammaMap::build(quantum);
    const double quantum_avg =
        chsh::average_fisher(chsh::fisher_profile(quantum, qmap, 501, 1e-3));

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto model = oracle::random_symmetric_density(seed);
        const auto map = GammaMap::build(model, 4097, 1e-9);
        const auto profile = chsh::fisher_profile(model, map, 501, 1e-3);
        CAPTURE(seed);
        CHECK(chsh::average_fisher(profile) >= quantum_avg - 1e-9);
    }
}
