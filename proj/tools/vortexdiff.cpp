// vortexdiff command-line driver.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "vortexdiff/config.hpp"
#include "vortexdiff/errors.hpp"
#include "vortexdiff/field_io.hpp"
#include "vortexdiff/scenario.hpp"
#include "vortexdiff/solvers.hpp"

using namespace vortexdiff;

namespace {

struct Globals {
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    int threads = 1;
    bool strict = false;
};

int report(ExitCode code, const char* kind, const std::string& message,
           const std::function<void(nlohmann::ordered_json&)>& extra = {}) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    j["exit_code"] = static_cast<int>(code);
    if (extra) extra(j);
    std::cerr << j.dump() << '\n';
    return static_cast<int>(code);
}

ScenarioConfig load(const std::string& path, const Globals& g) {
    ScenarioConfig cfg = load_config(path, ParseOptions{g.strict});
    for (const auto& w : cfg.warnings) std::cerr << "warning: ignoring unknown key (" << w << ")\n";
    if (g.out_dir) cfg.out_dir = *g.out_dir;
    if (g.format) {
        const auto f = parse_field_format(*g.format);
        if (!f) throw ConfigError("--format: expected csv, vxf or both");
        cfg.format = *f;
    }
    return cfg;
}

void print_manifest(const Manifest& m, const std::filesystem::path& root) {
    for (const auto& e : m.files) std::cout << e.sha256 << "  " << (root / e.path).string() << '\n';
    std::cout << "wrote " << m.files.size() << " files and " << (root / "manifest.json").string() << '\n';
}

void write_single(const ScenarioConfig& cfg, const std::string& name, const std::string& csv) {
    OutputWriter out(cfg.out_dir);
    out.write_text(name, csv);
    print_manifest(out.finish(), cfg.out_dir);
}

// Reads one named column (plus "time") from a CSV with "# " comment lines.
void read_trace(const std::string& path, const std::string& column, std::vector<double>& times,
                std::vector<double>& values) {
    std::ifstream in(path);
    if (!in) throw IoError(IoErrorCode::OpenFailed, "cannot open " + path);
    std::string line;
    int tcol = -1, vcol = -1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (tcol < 0) {
            for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
                if (cells[i] == "time") tcol = i;
                if (cells[i] == column) vcol = i;
            }
            if (tcol < 0 || vcol < 0) {
                throw IoError(IoErrorCode::BadCsv, path + ": needs columns 'time' and '" + column + "'");
            }
            continue;
        }
        if (static_cast<int>(cells.size()) <= std::max(tcol, vcol)) {
            throw IoError(IoErrorCode::BadCsv, path + ": short row");
        }
        try {
            times.push_back(std::stod(cells[tcol]));
            values.push_back(std::stod(cells[vcol]));
        } catch (const std::exception&) {
            throw IoError(IoErrorCode::BadCsv, path + ": bad number in row '" + line + "'");
        }
    }
    if (tcol < 0) throw IoError(IoErrorCode::BadCsv, path + ": no header row");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diffusion of optical vortex coherence in atomic ensembles.\n"
                 "Units are nondimensional: w0 = 1 and D = 1 make w0^2/D the time unit."};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--out-dir", g.out_dir, "Output directory (overrides out_dir in the config)");
    app.add_option("--format", g.format, "Field dump format")->check(CLI::IsMember({"csv", "vxf", "both"}));
    app.add_option("--threads", g.threads, "Worker threads (1 = bit-reproducible reference mode)")
        ->check(CLI::Range(1, 256));
    app.add_flag("--strict", g.strict, "Reject unknown config keys instead of warning");

    std::string config;
    auto* simulate = app.add_subcommand("simulate", "Run one scenario")->fallthrough();
    simulate->add_option("config", config, "Scenario YAML")->required();

    std::string sweep_param;
    auto* sweep = app.add_subcommand("sweep", "Repeat a scenario over a parameter; fidelity vs s table")->fallthrough();
    sweep->add_option("--param", sweep_param, "name=a..b or name=v1,v2,... (m, p, w0, P, D)")->required();
    sweep->add_option("config", config, "Scenario YAML")->required();

    std::string trace;
    std::string column = "efficiency";
    double fit_D = 1.0, fit_w0 = 1.0;
    auto* fit = app.add_subcommand("fit", "Fit power-law and exponential decay to a trace CSV")->fallthrough();
    fit->add_option("trace", trace, "CSV with a 'time' column")->required();
    fit->add_option("--column", column, "Value column")->capture_default_str();
    fit->add_option("--D", fit_D, "Diffusion coefficient for s(t)")->capture_default_str();
    fit->add_option("--w0", fit_w0, "Waist for s(t)")->capture_default_str();

    auto* nodes = app.add_subcommand("nodes", "Radial node table vs time")->fallthrough();
    nodes->add_option("config", config, "Scenario YAML")->required();

    auto* blocked = app.add_subcommand("compare-blocked", "Blocked Gaussian vs vortex hole refill")->fallthrough();
    blocked->add_option("config", config, "Scenario YAML")->required();

    auto* echo = app.add_subcommand("echo", "Quantum echo round trip and classical reversal conditioning")
                     ->fallthrough();
    echo->add_option("config", config, "Scenario YAML")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report(ExitCode::Config, "usage", e.what());
    }

    try {
        set_threads(g.threads);
        if (*simulate) {
            const ScenarioConfig cfg = load(config, g);
            print_manifest(run_scenario(cfg), cfg.out_dir);
        } else if (*sweep) {
            const ScenarioConfig cfg = load(config, g);
            const SweepTable table = run_sweep(cfg, parse_sweep(sweep_param));
            write_single(cfg, "sweep.csv", sweep_csv(cfg, table));
        } else if (*fit) {
            std::vector<double> times, values;
            read_trace(trace, column, times, values);
            auto [power, expo] = [&] {
                try {
                    return fit_decay(times, values, fit_D, fit_w0);
                } catch (const std::invalid_argument& e) {
                    throw NumericError(e.what());
                }
            }();
            std::printf("model,amplitude,rate,rms_log_residual,preferred\n");
            for (const DecayFit& f : {power, expo}) {
                std::printf("%s,%s,%s,%s,%d\n", to_string(f.model), format_double(f.amplitude).c_str(),
                            format_double(f.rate).c_str(), format_double(f.rms_log_residual).c_str(),
                            f.preferred ? 1 : 0);
            }
            std::printf("preferred: %s\n", to_string(power.preferred ? power.model : expo.model));
        } else if (*nodes) {
            const ScenarioConfig cfg = load(config, g);
            write_single(cfg, "nodes.csv", nodes_csv(cfg, run_nodes(cfg)));
        } else if (*blocked) {
            const ScenarioConfig cfg = load(config, g);
            write_single(cfg, "compare_blocked.csv", compare_blocked_csv(cfg, run_compare_blocked(cfg)));
        } else if (*echo) {
            const ScenarioConfig cfg = load(config, g);
            write_single(cfg, "echo.csv", echo_csv(cfg, run_echo(cfg)));
        }
    } catch (const ConfigError& e) {
        return report(ExitCode::Config, "config", e.what(), [&](auto& j) {
            if (e.line() > 0) j["line"] = e.line();
        });
    } catch (const IrreversibleError& e) {
        return report(ExitCode::Numeric, "irreversible", e.what(),
                      [&](auto& j) { j["log10_amplification"] = e.log10_amplification(); });
    } catch (const NumericError& e) {
        return report(ExitCode::Numeric, "numeric", e.what());
    } catch (const IoError& e) {
        return report(ExitCode::Io, "io", e.what(), [&](auto& j) { j["code"] = to_string(e.code()); });
    } catch (const std::invalid_argument& e) {
        return report(ExitCode::Numeric, "numeric", e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return report(ExitCode::Io, "io", e.what());
    }
    return 0;
}
