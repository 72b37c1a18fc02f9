#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "deco/constants.hpp"
#include "deco/scattering.hpp"

using namespace deco;
using namespace deco::scattering;
using Catch::Approx;

TEST_CASE("localization rate is the plain product k^2 flux sigma") {
    CHECK(localization_rate({"unit", 1.0, 1.0, 1.0, ""}).lambda == 1.0);
    CHECK(localization_rate({"k2", 2.0, 1.0, 1.0, ""}).lambda == 4.0);
    CHECK_THROWS_AS(localization_rate({"bad", -1.0, 1.0, 1.0, ""}), DomainError);
    CHECK_THROWS_AS(localization_rate({"bad", 1.0, 0.0, 1.0, ""}), DomainError);

    SECTION("linear in flux and sigma, quadratic in k") {
        std::mt19937_64 rng(5u);
        std::uniform_real_distribution<double> u(0.1, 10.0);
        for (int i = 0; i < 50; ++i) {
            const double k = u(rng), f = u(rng), s = u(rng), c = u(rng);
            const double base = localization_rate({"p", k, f, s, ""}).lambda;
            CHECK(localization_rate({"p", k, c * f, s, ""}).lambda == Approx(c * base));
            CHECK(localization_rate({"p", k, f, c * s, ""}).lambda == Approx(c * base));
            CHECK(localization_rate({"p", c * k, f, s, ""}).lambda == Approx(c * c * base));
        }
    }
}

TEST_CASE("decoherence factor") {
    CHECK(decoherence_factor(0.0, 1e12, 4.0) == 1.0);
    CHECK(decoherence_factor(1.0, 1.0, 1.0) == Approx(std::exp(-1.0)));
    CHECK_THROWS_AS(decoherence_factor(1.0, 1.0, -0.5), DomainError);

    SECTION("table composition: 300 K photons on a 1e-5 cm particle") {
        // Lambda = 1e12 from the catalog target, dx = 1e-4 cm, t = 1e-4 s.
        CHECK(decoherence_factor(1e-4, 1e12, 1e-4) == Approx(std::exp(-1.0)).epsilon(1e-12));
    }
    SECTION("monotone decreasing in separation, time and rate; symmetric in dx") {
        std::mt19937_64 rng(17u);
        std::uniform_real_distribution<double> u(0.1, 3.0);
        for (int i = 0; i < 50; ++i) {
            const double dx = u(rng), l = u(rng), t = u(rng), c = 1.0 + u(rng);
            const double f = decoherence_factor(dx, l, t);
            CHECK(decoherence_factor(-dx, l, t) == f);
            CHECK(decoherence_factor(c * dx, l, t) <= f);
            CHECK(decoherence_factor(dx, c * l, t) <= f);
            CHECK(decoherence_factor(dx, l, c * t) <= f);
            CHECK(decoherence_factor(0.0, l, t) == 1.0);
        }
    }
}

TEST_CASE("single scattering overlap model") {
    CHECK(single_scattering_overlap(0.0, 5.0).real() == 1.0);
    CHECK(single_scattering_overlap(0.1, 1.0).real() == Approx(std::exp(-0.005)).epsilon(1e-9));
    CHECK(single_scattering_overlap(0.1, 1.0).real() == Approx(0.99501).margin(5e-6));
    CHECK(std::abs(single_scattering_overlap(10.0, 1.0)) < 1e-6);

    SECTION("modulus never exceeds one") {
        std::mt19937_64 rng(23u);
        std::uniform_real_distribution<double> u(0.0, 50.0);
        for (int i = 0; i < 100; ++i)
            CHECK(std::abs(single_scattering_overlap(u(rng), 0.01 + u(rng))) <= 1.0);
    }
}

TEST_CASE("coherence length") {
    CHECK(coherence_length(1.0, 1.0) == 1.0);
    CHECK(coherence_length(1e19, 1.0) == Approx(3.1623e-10).epsilon(1e-4));
    CHECK_THROWS_AS(coherence_length(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(coherence_length(1.0, 0.0), DomainError);

    SECTION("definition round trip: factor at the coherence length is 1/e") {
        for (double lambda : {0.5, 1e6, 1e19})
            for (double t : {1e-6, 1.0, 30.0})
                CHECK(decoherence_factor(coherence_length(lambda, t), lambda, t) ==
                      Approx(std::exp(-1.0)).epsilon(1e-12));
    }
}

namespace {

// Independent re-derivation of the preset inputs from the physical formulas
// named in each preset's notes.
double oracle_lambda(const std::string& name, double a) {
    const double kb = cgs::k_boltzmann, hbar = cgs::hbar, c = cgs::c_light, pi = cgs::pi;
    auto photon = [&](double temp, double flux_override = -1.0) {
        const double kt = kb * temp / (hbar * c);
        const double n = 2.0 * cgs::zeta3 / (pi * pi) * kt * kt * kt;
        const double k = std::pow(pi, 4) / (30.0 * cgs::zeta3) * kt;
        const double flux = flux_override > 0 ? flux_override : n * c;
        const double sigma = std::min(8.0 * pi / 3.0 * std::pow(k, 4) * std::pow(a, 6), pi * a * a);
        return k * k * flux * sigma;
    };
    auto gas = [&](double n, double m, double temp) {
        const double v = std::sqrt(8.0 * kb * temp / (pi * m));
        const double k = m * v / hbar;
        return k * k * (n * v) * (pi * a * a);
    };
    if (name == "cosmic background radiation") return photon(2.725);
    if (name == "300 K photons") return photon(300.0);
    if (name == "sunlight on earth") {
        const double mean_e = std::pow(pi, 4) / (30.0 * cgs::zeta3) * kb * 5778.0;
        return photon(5778.0, 1.361e6 / mean_e);
    }
    if (name == "air molecules") return gas(2.687e19, 4.81e-23, 300.0);
    if (name == "laboratory vacuum") return gas(1e3, 4.81e-23, 300.0);
    throw std::runtime_error("unknown preset " + name);
}

} // namespace

TEST_CASE("preset catalog") {
    const auto rows = preset_environments();
    REQUIRE(rows.size() == 15);

    SECTION("first row is the cosmic background at a = 1e-3 cm targeting 1e6") {
        CHECK(rows[0].env.name == "cosmic background radiation");
        CHECK(rows[0].radius_cm == 1e-3);
        CHECK(rows[0].lambda_paper == 1e6);
    }
    SECTION("inputs agree with the kinetic-theory / blackbody oracle") {
        for (const auto& row : rows) {
            const double lam = localization_rate(row.env).lambda;
            CHECK(lam == Approx(oracle_lambda(row.env.name, row.radius_cm)).epsilon(1e-12));
        }
    }
    SECTION("every preset lands within three decades of its table target") {
        for (const auto& row : rows) {
            INFO(row.env.name << " a=" << row.radius_cm);
            CHECK(std::abs(log10_error(row)) <= 3.0);
        }
    }
    SECTION("best-constrained large-particle rows land within two decades") {
        for (const auto& row : rows) {
            if (row.radius_cm != 1e-3) continue;
            if (row.env.name == "laboratory vacuum") continue;
            INFO(row.env.name);
            CHECK(std::abs(log10_error(row)) <= 2.0);
        }
    }
    SECTION("saturation flag marks presets with k a > 1") {
        for (const auto& row : rows) {
            CHECK(row.saturated == (row.env.k * row.radius_cm > 1.0));
            if (row.saturated) {
                // The capped rate saturates at the total scattering rate.
                const double cap = row.env.flux * row.env.sigma_eff;
                CHECK(capped_decoherence_rate(row.env, 10.0 * row.radius_cm) == Approx(cap));
            }
        }
    }
    SECTION("every preset carries a provenance note") {
        for (const auto& row : rows) CHECK(!row.env.notes.empty());
    }
}

TEST_CASE("catalog CSV export") {
    const std::string path = "test_table1.csv";
    export_catalog(path);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "name,size,k,flux,sigma_eff,lambda_computed,lambda_paper,log10_error");
    int rows = 0;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) ++rows;
    CHECK(rows == 15);
    in.close();
    std::remove(path.c_str());
}
