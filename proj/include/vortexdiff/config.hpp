#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vortexdiff/analytic.hpp"
#include "vortexdiff/modes.hpp"
#include "vortexdiff/solvers.hpp"

namespace vortexdiff {

enum class OutputKind {
    Snapshots,
    RadialProfiles,
    FidelityTrace,
    CoherenceFactor,
    Nodes,
    CenterTrace,
    Fit,
    HoleRefill,
};

enum class FieldFormat { Csv, Vxf, Both };

struct ScenarioConfig {
    std::string name = "scenario";
    ModeSpec mode;
    DiffusionParams diffusion;
    int n = 256;
    double extent = 8.0;
    SolverConfig solver;
    std::optional<QuantumParams> quantum;
    double eta = 1e-12;
    int nbins = 0;  // 0 selects n
    double node_threshold = 0.02;
    std::vector<OutputKind> outputs;
    FieldFormat format = FieldFormat::Csv;
    std::filesystem::path out_dir = "out";

    /// Unknown keys seen in lenient mode, as "line N: key".
    std::vector<std::string> warnings;

    GridSpec grid() const { return make_grid(n, extent); }
    int radial_bins() const { return nbins > 0 ? nbins : n; }
    bool wants(OutputKind kind) const;
};

struct ParseOptions {
    bool strict = true;
};

/**
 * Parses a YAML scenario document (grammar in docs/config.md), applies
 * defaults and validates it. Syntax and type errors carry the source line;
 * semantic errors name the violated constraint. Throws ConfigError.
 */
ScenarioConfig parse_config(std::string_view text, const ParseOptions& options = {});

ScenarioConfig load_config(const std::filesystem::path& path, const ParseOptions& options = {});

/// Re-checks every cross-field constraint (grid, containment, times, CFL).
void validate(const ScenarioConfig& cfg);

/// Smallest extent accepted for the configured mode and time span:
/// max(4 w0 sqrt(1+|m|+p), 4 w0 sqrt(s_max)). Plane waves need none (0).
double required_extent(const ScenarioConfig& cfg);

/// Canonical YAML of the resolved configuration. Output routing (out_dir) is
/// left out so relocated runs stay byte-identical.
std::string to_yaml(const ScenarioConfig& cfg);

const char* to_string(OutputKind kind);
const char* to_string(FieldFormat format);
std::optional<FieldFormat> parse_field_format(std::string_view text);

}  // namespace vortexdiff
