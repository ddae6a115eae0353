#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vortexdiff/errors.hpp"
#include "vortexdiff/field_io.hpp"
#include "vortexdiff/scenario.hpp"

using namespace vortexdiff;
namespace fs = std::filesystem;

namespace {

ScenarioConfig small(const std::string& out) {
    ScenarioConfig c = parse_config(R"(name: small
mode: {kind: LG, m: 1, w0: 1, P: 1}
diffusion: {D: 1, times: [0, 0.05, 0.1, 0.15, 0.2, 0.25]}
grid: {n: 64, extent: 6}
solver: {boundary: OPEN}
outputs: [SNAPSHOTS, RADIAL_PROFILES, FIDELITY_TRACE, COHERENCE_FACTOR, NODES, CENTER_TRACE, FIT, HOLE_REFILL]
format: both
)");
    c.out_dir = fs::temp_directory_path() / "vortexdiff_scenario" / out;
    fs::remove_all(c.out_dir);
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("sha256") {
    const std::string abc = "abc";
    CHECK(sha256_hex(std::as_bytes(std::span(abc.data(), abc.size()))) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex({}) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("scenario outputs and manifest") {
    const ScenarioConfig c = small("a");
    const Manifest m = run_scenario(c);
    // 6 times x 2 fields x 2 formats, plus seven tables.
    CHECK(m.files.size() == 24 + 7);
    CHECK(std::is_sorted(m.files.begin(), m.files.end(),
                         [](const auto& a, const auto& b) { return a.path < b.path; }));
    for (const auto& e : m.files) {
        const std::string body = slurp(c.out_dir / e.path);
        CHECK(body.size() == e.bytes);
        CHECK(sha256_hex(std::as_bytes(std::span(body.data(), body.size()))) == e.sha256);
        if (e.path.ends_with(".csv")) CHECK(body.rfind("# vortexdiff resolved config\n# name: small", 0) == 0);
    }
    const auto j = nlohmann::json::parse(slurp(c.out_dir / "manifest.json"));
    CHECK(j["files"].size() == m.files.size());

    const FieldDump d = read_vxf(c.out_dir / "snapshots/rho22_t002.vxf");
    CHECK(d.time == 0.1);
    CHECK(d.kind() == FieldKind::Real);
}

TEST_CASE("repeat runs are byte identical") {
    ScenarioConfig a = small("rep1"), b = small("rep2");
    const Manifest ma = run_scenario(a), mb = run_scenario(b);
    CHECK(ma.to_json() == mb.to_json());
}

TEST_CASE("evolve_scenario") {
    const ScenarioResult r = evolve_scenario(small("none"));
    REQUIRE(r.snapshots.size() == 6);
    CHECK(r.efficiency[5] == doctest::Approx(0.25).epsilon(1e-4));
    for (double p : r.total_population) CHECK(p == doctest::Approx(1.0).epsilon(1e-3));
    for (const auto& n : r.nodes) CHECK(n.center_node);
}

TEST_CASE("sweep spec") {
    const SweepSpec m = parse_sweep("m=0..4");
    CHECK(m.param == "m");
    CHECK(m.values == std::vector<double>{0, 1, 2, 3, 4});
    const SweepSpec w = parse_sweep("w0=0.5,1,2");
    CHECK(w.values == std::vector<double>{0.5, 1.0, 2.0});
    CHECK_THROWS_AS(parse_sweep("q=1"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("m=4..0"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("m=0.5,1"), ConfigError);
    CHECK_THROWS_AS(parse_sweep("m"), ConfigError);
}

TEST_CASE("sweep over m") {
    ScenarioConfig c = small("sweep");
    c.extent = 8.0;
    c.n = 128;
    const SweepTable t = run_sweep(c, parse_sweep("m=0..2"));
    REQUIRE(t.efficiency.size() == 3);
    for (std::size_t k = 1; k < t.times.size(); ++k) {
        CHECK(t.efficiency[0][k] > t.efficiency[1][k]);
        CHECK(t.efficiency[1][k] > t.efficiency[2][k]);
        for (int m = 0; m < 3; ++m) {
            CHECK(t.efficiency[m][k] == doctest::Approx(std::pow(t.s[m][k], -(m + 1))).epsilon(1e-4));
        }
    }
    CHECK(sweep_csv(c, t).find("efficiency[m=2]") != std::string::npos);
    CHECK_THROWS_AS(run_sweep(c, parse_sweep("m=0..9")), ConfigError);
}

TEST_CASE("compare blocked and echo drivers") {
    ScenarioConfig c = small("cb");
    const auto rows = run_compare_blocked(c);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].blocked == 0.0);
    CHECK(rows[5].blocked > 0.5);
    for (const auto& r : rows) CHECK(r.vortex_center <= 1e-8);

    c.quantum = QuantumParams{1.0};
    for (const auto& r : run_echo(c)) {
        CHECK(r.norm_ratio == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.roundtrip_error <= 1e-10);
        if (r.time > 0) CHECK(r.classical_log10_amplification > 6.0);
    }
}
