#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "../oracles.hpp"
#include "vortexdiff/analytic.hpp"
#include "vortexdiff/errors.hpp"

using namespace vortexdiff;
using std::numbers::pi;

TEST_CASE("evolution factor") {
    CHECK(evolution_factor(0.0, 1.0, 1.0) == 1.0);
    CHECK(evolution_factor(0.25, 1.0, 1.0) == 2.0);
    CHECK(evolution_factor(3.0, 0.0, 1.0) == 1.0);
}

TEST_CASE("diffusion params") {
    CHECK_NOTHROW(validate(DiffusionParams{1.0, {0.0, 0.1, 0.25}}));
    CHECK_THROWS_WITH_AS(validate(DiffusionParams{1.0, {0.25, 0.1}}), doctest::Contains("times not ascending"),
                         std::invalid_argument);
    CHECK_THROWS_AS(validate(DiffusionParams{-1.0, {0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(DiffusionParams{1.0, {-0.1}}), std::invalid_argument);
}

TEST_CASE("coherence closed form") {
    ModeSpec s;
    s.m = 1;
    s.w0 = 1.2;
    s.power = 0.8;
    s.amp = {0.3, -0.4};
    for (double r : {0.0, 0.5, 1.5}) {
        const double th = -2.0;
        CHECK(std::abs(coherence_closed_form(r, th, 0.0, s, 1.0) -
                       lg_value(s, r * std::cos(th), r * std::sin(th))) < 1e-15);
        CHECK(coherence_closed_form(0.0, th, 0.7, s, 1.0) == cplx(0.0, 0.0));
    }

    ModeSpec g;
    g.power = pi / 2;
    CHECK(std::abs(coherence_closed_form(0.0, 0.0, 0.25, g, 1.0) - cplx(0.5, 0.0)) < 1e-15);

    // Radial heat-kernel quadrature of the initial profile.
    for (int m : {0, 1, 2}) {
        ModeSpec l;
        l.m = m;
        auto g0 = [&](double r) { return oracle::lg_radial(0, m, 1.0, 1.0, r); };
        for (double t : {0.1, 0.25, 1.0}) {
            for (double r : {0.3, 0.9, 1.8, 3.0}) {
                const double ref = oracle::heat_radial(g0, m, 1.0, t, r, 9.0);
                CHECK(std::abs(coherence_closed_form(r, 0.0, t, l, 1.0).real() - ref) < 1e-10);
            }
        }
    }

    ModeSpec p1;
    p1.p = 1;
    CHECK_THROWS_AS(coherence_closed_form(0.1, 0.0, 0.1, p1, 1.0), std::invalid_argument);
}

TEST_CASE("population closed forms") {
    const double w0 = 1.3, P = 2.0;
    for (int i = 0; i < 20; ++i) {
        const double r = 0.15 * i;
        const double a1 = oracle::lg_radial(0, 1, w0, P, r);
        CHECK(population_m1(r, 0.0, w0, P, 1.0) == doctest::Approx(a1 * a1).epsilon(1e-13).scale(1e-12));
        CHECK(population_m1(r, 0.0, w0, P, 1.0) ==
              doctest::Approx(4 * P * r * r * std::exp(-2 * r * r / (w0 * w0)) / (pi * std::pow(w0, 4))));
    }
    CHECK(population_m1(0.0, 0.125, 1.0, pi, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(population_m0(0.0, 0.0, w0, P, 1.0) == doctest::Approx(2 * P / (pi * w0 * w0)));
    CHECK(population_m0(0.5, 1e9, w0, P, 1.0) < 1e-9);

    // Heat-kernel quadrature of |A_m|^2 and the total population.
    for (int m : {0, 1}) {
        auto rho0 = [&](double r) { return std::pow(oracle::lg_radial(0, m, w0, P, r), 2); };
        for (double t : {0.0, 0.1, 1.0}) {
            auto rho = [&](double r) {
                return m ? population_m1(r, t, w0, P, 0.7) : population_m0(r, t, w0, P, 0.7);
            };
            CHECK(oracle::radial_integral(rho, 30.0, 20000) == doctest::Approx(P).epsilon(1e-10));
            if (t == 0.0) continue;
            for (double r : {0.0, 0.4, 1.1, 2.5}) {
                CHECK(std::abs(rho(r) - oracle::heat_radial(rho0, 0, 0.7, t, r, 12.0)) < 1e-10);
            }
        }
    }
}

TEST_CASE("fidelity closed form") {
    for (int m = 0; m < 4; ++m) CHECK(fidelity_closed_form(m, 0.0, 1.0, 1.0) == 1.0);
    CHECK(fidelity_closed_form(1, 0.25, 1.0, 1.0) == doctest::Approx(0.25));
    CHECK(fidelity_closed_form(0, 0.25, 1.0, 1.0) == doctest::Approx(0.5));
    for (double t : {0.01, 0.3, 2.0}) {
        for (int m = 0; m < 5; ++m) CHECK(fidelity_closed_form(m + 1, t, 1.0, 1.0) < fidelity_closed_form(m, t, 1.0, 1.0));
    }
    // Energy of the diffused radial profile, by quadrature.
    for (int m : {0, 1, 2, 3}) {
        const double t = 0.3, s = 1.0 + 4.0 * t;
        auto ut = [&](double r) {
            return std::pow(s, -(m + 1) / 2.0) * oracle::lg_radial(0, m, std::sqrt(s), 1.0, r);
        };
        const double e = oracle::radial_integral([&](double r) { return ut(r) * ut(r); }, 20.0, 8000);
        CHECK(fidelity_closed_form(m, t, 1.0, 1.0) == doctest::Approx(e).epsilon(1e-10));
    }
    CHECK_THROWS_AS(fidelity_closed_form(-1, 0.1, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("coherence factor") {
    CHECK(coherence_factor(0.3, 0.6, 0.5, 1e-12) == doctest::Approx(1.0));
    CHECK(coherence_factor(0.0, 1.0, 1.0, 1e-12) == doctest::Approx(1e-12 / (1 + 1e-12)));
    CHECK(coherence_factor(0.0, 0.0, 0.0, 1e-12) == 1.0);
    CHECK(coherence_factor(0.3 + 1e-12, 0.3, 1.0, 1e-12) == 1.0);
    CHECK_THROWS_AS(coherence_factor(-1.0, 1.0, 1.0, 1e-12), std::invalid_argument);
    CHECK_THROWS_AS(coherence_factor(2.0, 1.0, 1.0, 1e-12), std::invalid_argument);
    CHECK_THROWS_AS(validate(CoherenceFactorParams{0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(CoherenceFactorParams{1e-6}), std::invalid_argument);
}

TEST_CASE("center peak") {
    const auto peak = center_population_peak_m1(1.0, 1.0, pi);
    CHECK(peak.time == doctest::Approx(0.125));
    CHECK(peak.value == doctest::Approx(0.5));

    // Dense scan of the heat-kernel quadrature at the origin.
    auto rho0 = [](double r) { return std::pow(oracle::lg_radial(0, 1, 1.0, pi, r), 2); };
    double best_t = 0.0, best = 0.0;
    for (int i = 1; i <= 2000; ++i) {
        const double t = 0.0005 * i;
        const double v = oracle::heat_radial(rho0, 0, 1.0, t, 0.0, 10.0, 2000);
        if (v > best) best = v, best_t = t;
    }
    CHECK(std::abs(best_t - peak.time) <= 0.0005);
    CHECK(best == doctest::Approx(peak.value).epsilon(1e-6));

    const auto fast = center_population_peak_m1(1.0, 2.0, pi);
    CHECK(fast.time == doctest::Approx(peak.time / 2));
    CHECK(fast.value == doctest::Approx(peak.value));
    CHECK_THROWS_AS(center_population_peak_m1(1.0, 0.0, pi), std::invalid_argument);
}

TEST_CASE("physicality check") {
    const GridSpec g = make_grid(16, 4.0);
    ModeSpec m;
    StateSnapshot s = initial_snapshot(lg_field(m, g));
    CHECK_NOTHROW(check_physical(s));
    s.rho22.values[5] = -0.1;
    CHECK_THROWS_AS(check_physical(s), NumericError);
    s = initial_snapshot(lg_field(m, g));
    s.rho12.at(8, 5) *= 1.1;
    CHECK_THROWS_AS(check_physical(s), NumericError);
}
