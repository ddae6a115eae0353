#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "../oracles.hpp"
#include "vortexdiff/analysis.hpp"
#include "vortexdiff/solvers.hpp"

using namespace vortexdiff;
using std::numbers::pi;

namespace {

const SolverConfig kOpen{Scheme::Spectral, Boundary::Open};

ModeSpec lg(int p, int m, double power = 1.0) {
    ModeSpec s;
    s.p = p;
    s.m = m;
    s.power = power;
    return s;
}

ComplexField2D evolved(const ModeSpec& s, const GridSpec& g, double t) {
    return diffuse(lg_field(s, g), 1.0, t, kOpen);
}

// First sign change of the diffused radial profile away from the core, by bisection.
double oracle_node(int p, int m, double t) {
    auto g0 = [&](double r) { return oracle::lg_radial(p, m, 1.0, 1.0, r); };
    auto u = [&](double r) { return t == 0.0 ? g0(r) : oracle::heat_radial(g0, m, 1.0, t, r, 9.0); };
    double a = 0.05, b = 0.05;
    while (u(a) * u(b + 0.01) > 0.0) {
        b += 0.01;
        if (b > 4.0) return -1.0;
    }
    b += 0.01;
    a = b - 0.01;
    for (int i = 0; i < 60; ++i) {
        const double c = 0.5 * (a + b);
        (u(a) * u(c) <= 0.0 ? b : a) = c;
    }
    return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("retrieval efficiency") {
    const GridSpec g = make_grid(256, 8.0);
    const ComplexField2D f = lg_field(lg(0, 1), g);
    CHECK(retrieval_efficiency(f, f) == 1.0);
    CHECK(retrieval_efficiency(evolved(lg(0, 0), g, 0.25), lg_field(lg(0, 0), g)) == doctest::Approx(0.5).epsilon(2e-5));
    CHECK(std::abs(retrieval_efficiency(evolved(lg(0, 0), g, 0.25), lg_field(lg(0, 0), g)) - 0.5) <= 1e-5);
    CHECK(std::abs(retrieval_efficiency(evolved(lg(0, 1), g, 0.25), f) - 0.25) <= 1e-5);
    CHECK(std::abs(retrieval_efficiency(evolved(lg(0, 2), g, 0.25), lg_field(lg(0, 2), g)) - 0.125) <= 1e-4);

    CHECK_THROWS_AS(retrieval_efficiency(f, ComplexField2D(g)), std::invalid_argument);
    CHECK_THROWS_AS(retrieval_efficiency(f, ComplexField2D(make_grid(128, 8.0))), std::invalid_argument);
}

TEST_CASE("radial-node penalty and its crossover") {
    // LG_1^1 keeps less energy than LG_0^1 early on; the two ratios meet
    // at t = w0^2/(2D) and the order flips afterwards.
    const GridSpec g = make_grid(320, 10.0);
    const ComplexField2D a0 = lg_field(lg(1, 1), g), b0 = lg_field(lg(0, 1), g);
    auto ratio = [&](double t) {
        return retrieval_efficiency(diffuse(a0, 1.0, t, kOpen), a0) /
               retrieval_efficiency(diffuse(b0, 1.0, t, kOpen), b0);
    };
    CHECK(ratio(0.05) < 1.0);
    CHECK(ratio(0.25) < 0.95);
    CHECK(ratio(0.5) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(ratio(1.0) > 1.0);
}

TEST_CASE("coherence factor field") {
    const GridSpec g = make_grid(256, 8.0);
    const CoherenceFactorParams eta{1e-12};
    const StateSnapshot s0 = initial_snapshot(lg_field(lg(0, 1), g));
    const CoherenceFactorField f0 = coherence_factor_field(s0, eta);
    for (double v : f0.values.values) CHECK(std::abs(v - 1.0) <= 1e-9);

    const StateSnapshot s = evolve_snapshot(s0, 1.0, 0.25, kOpen);
    const CoherenceFactorField f = coherence_factor_field(s, eta);
    CHECK(f.values.origin() <= 2 * eta.eta);
    const double peak = *std::max_element(s.rho22.values.begin(), s.rho22.values.end());
    // Where the population never arrived (below 1e-14 of the peak) f stays
    // at 1 up to eta, and those samples carry a negligible rho22 weight.
    int far = 0;
    double far_weight = 0.0;
    for (std::size_t i = 0; i < f.values.values.size(); ++i) {
        CHECK(f.values.values[i] >= 0.0);
        CHECK(f.values.values[i] <= 1.0 + 1e-9);
        if (s.rho22.values[i] < 1e-14 * peak) {
            ++far;
            far_weight += s.rho22.values[i];
            CHECK(f.values.values[i] >= 0.99);
        }
    }
    CHECK(far > 1000);
    CHECK(far_weight * g.dx() * g.dx() < 1e-8 * total_population(s));
    CHECK(f.weighted_mean == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("radial nodes at t = 0") {
    const GridSpec g = make_grid(256, 8.0);
    const RadialProfile v = azimuthal_average(lg_field(lg(0, 1), g), 256);
    const NodeReport r = find_radial_nodes(v);
    CHECK(r.center_node);
    REQUIRE(r.node_radii.size() == 1);
    CHECK(r.node_radii[0] == 0.0);

    const RadialProfile p = azimuthal_average(lg_field(lg(1, 0), g), 256);
    const NodeReport q = find_radial_nodes(p);
    CHECK(!q.center_node);
    REQUIRE(q.off_center_count() == 1);
    CHECK(std::abs(q.node_radii[0] - 1.0 / std::sqrt(2.0)) <= p.bin_width);
    CHECK(oracle_node(1, 0, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));

    CHECK_THROWS_AS(find_radial_nodes(RadialProfile{}), std::invalid_argument);
}

TEST_CASE("LG_1^1 node drifts inward") {
    const GridSpec g = make_grid(256, 8.0);
    const ComplexField2D f0 = lg_field(lg(1, 1), g);
    const NodeReport start = find_radial_nodes(azimuthal_average(f0, 256));
    REQUIRE(start.off_center_count() == 1);
    const double bin = 8.0 / 256;
    for (double t : {0.05, 0.1, 0.15, 0.2}) {
        const NodeReport r = find_radial_nodes(azimuthal_average(diffuse(f0, 1.0, t, kOpen), 256));
        CAPTURE(t);
        CHECK(r.center_node);
        REQUIRE(r.off_center_count() == 1);
        CHECK(std::abs(r.node_radii[1] - oracle_node(1, 1, t)) <= bin);
    }
    const NodeReport at08 = find_radial_nodes(azimuthal_average(diffuse(f0, 1.0, 0.2, kOpen), 256));
    CHECK(start.node_radii[1] - at08.node_radii[1] > 2 * bin);
}

TEST_CASE("LG_1^1 off-center node merges into the core at 4Dt = w0^2") {
    const GridSpec g = make_grid(256, 8.0);
    const NodeReport r = find_radial_nodes(azimuthal_average(evolved(lg(1, 1), g, 0.25), 256));
    CHECK(r.center_node);
    CHECK(r.off_center_count() == 0);
    CHECK(oracle_node(1, 1, 0.25) < 0.0);
    CHECK(oracle_node(1, 1, 0.24) < 0.3);
}

TEST_CASE("center intensity") {
    const GridSpec g = make_grid(256, 8.0);
    const StateSnapshot s0 = initial_snapshot(lg_field(lg(0, 1, pi), g));
    CHECK(center_intensity(s0) == 0.0);
    double best = 0.0, best_t = -1.0;
    for (int k = 1; k <= 16; ++k) {
        const double t = k / 64.0;
        const double v = center_intensity(evolve_snapshot(s0, 1.0, t, kOpen));
        if (t == 0.125) CHECK(std::abs(v - 0.5) <= 1e-4);
        if (v > best) best = v, best_t = t;
    }
    CHECK(best_t == 0.125);
}

TEST_CASE("total population") {
    const GridSpec g = make_grid(256, 8.0);
    const StateSnapshot s0 = initial_snapshot(lg_field(lg(0, 1), g));
    CHECK(std::abs(total_population(s0) - 1.0) <= 1e-6);
    for (double t : {0.1, 0.5}) {
        CHECK(total_population(evolve_snapshot(s0, 1.0, t, kOpen)) == doctest::Approx(1.0).epsilon(1e-3));
    }
    CHECK(total_population(initial_snapshot(ComplexField2D(g))) == 0.0);
}

TEST_CASE("decay fits") {
    std::vector<double> t, v;
    for (int i = 0; i < 8; ++i) {
        t.push_back(i / 7.0);
        v.push_back(std::pow(1.0 + 4.0 * t.back(), -2.0));
    }
    auto [pw, ex] = fit_decay(t, v, 1.0, 1.0);
    CHECK(pw.rate == doctest::Approx(-2.0).epsilon(0.005));
    CHECK(pw.preferred);
    CHECK(!ex.preferred);
    CHECK(pw.model == DecayModel::PowerLaw);
    CHECK(ex.model == DecayModel::Exponential);

    // Exponential data with the same span.
    std::vector<double> e;
    for (double x : t) e.push_back(3.0 * std::exp(-2.5 * x));
    auto [pw2, ex2] = fit_decay(t, e, 1.0, 1.0);
    CHECK(ex2.preferred);
    CHECK(ex2.rate == doctest::Approx(2.5));
    CHECK(ex2.amplitude == doctest::Approx(3.0));
    CHECK(!pw2.preferred);

    CHECK_THROWS_AS(fit_decay(std::vector<double>(t.begin(), t.begin() + 4), std::vector<double>(v.begin(), v.begin() + 4), 1.0, 1.0),
                    std::invalid_argument);
    v[3] = 0.0;
    CHECK_THROWS_AS(fit_decay(t, v, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("fits on evolved traces") {
    const GridSpec g = make_grid(256, 8.0);
    ModeSpec w;
    w.kind = ModeKind::PlaneWave;
    w.k = 2.0 * pi / 8.0 * 8;
    const ComplexField2D pw0 = plane_wave(w, g);
    const ComplexField2D v0 = lg_field(lg(0, 1), g);
    std::vector<double> t, ip, iv;
    for (int i = 0; i < 6; ++i) {
        t.push_back(0.01 * i);
        ip.push_back(retrieval_efficiency(diffuse_spectral(pw0, 1.0, t.back()), pw0));
    }
    auto [p1, e1] = fit_decay(t, ip, 1.0, 1.0);
    CHECK(e1.preferred);
    CHECK(e1.rate == doctest::Approx(2.0 * w.k * w.k).epsilon(0.005));

    t.clear();
    for (int i = 0; i < 6; ++i) {
        t.push_back(0.05 * i);
        iv.push_back(retrieval_efficiency(diffuse(v0, 1.0, t.back(), kOpen), v0));
    }
    auto [p2, e2] = fit_decay(t, iv, 1.0, 1.0);
    CHECK(p2.preferred);
    CHECK(p2.rate == doctest::Approx(-2.0).epsilon(0.01));
}

TEST_CASE("hole refill") {
    const GridSpec g = make_grid(256, 8.0);
    ModeSpec b;
    b.kind = ModeKind::BlockedGaussian;
    b.block_radius = 1.0;
    const ComplexField2D f0 = blocked_gaussian(b, g);
    CHECK(hole_refill_ratio(f0, 1.0) == 0.0);
    double last = 0.0;
    for (int k = 1; k <= 10; ++k) {
        const double r = hole_refill_ratio(diffuse(f0, 1.0, 0.025 * k, kOpen), 1.0);
        CHECK(r >= last);
        last = r;
    }
    CHECK(last > 0.5);
    CHECK_THROWS_AS(hole_refill_ratio(f0, 1.5 * g.dx()), std::invalid_argument);

    // A vortex core never fills in; the disk-mean ratio only reflects the
    // r^|m| rise inside the disk and shrinks as the mode spreads.
    const ComplexField2D v0 = lg_field(lg(0, 1), g);
    double prev = hole_refill_ratio(v0, 0.5);
    for (double t : {0.05, 0.25, 1.0}) {
        const ComplexField2D v = diffuse(v0, 1.0, t, kOpen);
        CHECK(center_refill_ratio(v, 0.5) <= 1e-8);
        const double r = hole_refill_ratio(v, 0.5);
        CHECK(r < prev);
        prev = r;
    }
}
