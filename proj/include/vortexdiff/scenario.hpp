#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vortexdiff/analysis.hpp"
#include "vortexdiff/config.hpp"

namespace vortexdiff {

std::string sha256_hex(std::span<const std::byte> bytes);

struct ManifestEntry {
    std::string path;  // relative to the output directory
    std::uintmax_t bytes = 0;
    std::string sha256;
};

struct Manifest {
    std::vector<ManifestEntry> files;  // sorted by path
    std::string to_json() const;
};

/// Writes files below a root directory and records each in a manifest.
class OutputWriter {
public:
    explicit OutputWriter(std::filesystem::path root) : root_(std::move(root)) {}

    void write_text(const std::string& rel, const std::string& text);
    void write_bytes(const std::string& rel, std::span<const std::byte> bytes);
    /// Registers a file some other routine already wrote below the root.
    void record(const std::string& rel);

    /// Sorts the entries, writes manifest.json and returns the manifest.
    Manifest finish();
    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path root_;
    Manifest manifest_;
};

/// Every quantity the scenario outputs are built from, one entry per time.
struct ScenarioResult {
    ComplexField2D initial;
    std::vector<StateSnapshot> snapshots;
    std::vector<double> efficiency;
    std::vector<double> total_population;
    std::vector<CoherenceFactorField> coherence;
    std::vector<NodeReport> nodes;
};

/// Pure computation: evolves the initial state to each configured time.
ScenarioResult evolve_scenario(const ScenarioConfig& cfg);

/// Runs a scenario, writes the requested outputs below cfg.out_dir and
/// returns the manifest (also written as manifest.json).
Manifest run_scenario(const ScenarioConfig& cfg);

/// Comment header embedded in every CSV: the resolved configuration.
std::string config_comment(const ScenarioConfig& cfg);

// --- sweep -------------------------------------------------------------

struct SweepSpec {
    std::string param;  // m, p, w0, P or D
    std::vector<double> values;
};

/// Accepts "name=a..b" (integer range) or "name=v1,v2,...". Throws ConfigError.
SweepSpec parse_sweep(std::string_view text);

struct SweepTable {
    SweepSpec spec;
    std::vector<double> times;
    std::vector<std::vector<double>> s;           // [value][time]
    std::vector<std::vector<double>> efficiency;  // [value][time]
};

SweepTable run_sweep(const ScenarioConfig& cfg, const SweepSpec& spec);
std::string sweep_csv(const ScenarioConfig& cfg, const SweepTable& table);

// --- nodes / hole refill / echo -------------------------------------------

std::vector<NodeReport> run_nodes(const ScenarioConfig& cfg);
std::string nodes_csv(const ScenarioConfig& cfg, const std::vector<NodeReport>& nodes);

struct HoleRow {
    double time;
    double blocked;        // blocked Gaussian, hole r < block_radius
    double vortex;         // LG vortex, hole r < w0/2
    double vortex_center;  // LG vortex, origin sample over the w0/2 annulus
};

/// Blocked Gaussian (block_radius from the config, default w0) against an LG
/// vortex of the same waist (m from the config, default 1).
std::vector<HoleRow> run_compare_blocked(const ScenarioConfig& cfg);
std::string compare_blocked_csv(const ScenarioConfig& cfg, const std::vector<HoleRow>& rows);

struct EchoRow {
    double time;
    double norm_ratio;       // after / before quantum evolution
    double roundtrip_error;  // relative L2 error of the echo round trip
    double classical_log10_amplification;
};

std::vector<EchoRow> run_echo(const ScenarioConfig& cfg);
std::string echo_csv(const ScenarioConfig& cfg, const std::vector<EchoRow>& rows);

}  // namespace vortexdiff
