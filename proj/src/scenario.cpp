#include "vortexdiff/scenario.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "vortexdiff/errors.hpp"
#include "vortexdiff/field_io.hpp"
#include "vortexdiff/modes.hpp"
#include "vortexdiff/solvers.hpp"

namespace vortexdiff {

std::string sha256_hex(std::span<const std::byte> bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
        throw IoError(IoErrorCode::WriteFailed, "sha256 failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::string Manifest::to_json() const {
    nlohmann::ordered_json j;
    j["files"] = nlohmann::ordered_json::array();
    for (const auto& e : files) {
        j["files"].push_back({{"path", e.path}, {"bytes", e.bytes}, {"sha256", e.sha256}});
    }
    return j.dump(2) + "\n";
}

void OutputWriter::write_text(const std::string& rel, const std::string& text) {
    write_bytes(rel, std::as_bytes(std::span(text.data(), text.size())));
}

void OutputWriter::write_bytes(const std::string& rel, std::span<const std::byte> bytes) {
    write_file(root_ / rel, bytes);
    manifest_.files.push_back({rel, bytes.size(), sha256_hex(bytes)});
}

void OutputWriter::record(const std::string& rel) {
    const auto bytes = read_file(root_ / rel);
    manifest_.files.push_back({rel, bytes.size(), sha256_hex(bytes)});
}

Manifest OutputWriter::finish() {
    std::sort(manifest_.files.begin(), manifest_.files.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
    write_file(root_ / "manifest.json", manifest_.to_json());
    return manifest_;
}

std::string config_comment(const ScenarioConfig& cfg) {
    return "vortexdiff resolved config\n" + to_yaml(cfg);
}

namespace {

std::string csv_header(const ScenarioConfig& cfg) {
    std::string out;
    std::istringstream lines(config_comment(cfg));
    std::string line;
    while (std::getline(lines, line)) out += "# " + line + "\n";
    return out;
}

std::string fmt(double v) { return format_double(v); }

ComplexField2D as_complex(const RealField2D& f) {
    ComplexField2D out(f.grid);
    std::copy(f.values.begin(), f.values.end(), out.values.begin());
    return out;
}

bool has_coherence_closed_form(const ModeSpec& mode) { return mode.kind == ModeKind::LG && mode.p == 0; }

bool has_population_closed_form(const ModeSpec& mode) {
    return has_coherence_closed_form(mode) && std::abs(mode.m) <= 1;
}

ComplexField2D closed_coherence_field(const ScenarioConfig& cfg, const GridSpec& g, double t) {
    ComplexField2D f(g);
    for (int iy = 0; iy < g.n(); ++iy) {
        const double y = g.coord(iy);
        for (int ix = 0; ix < g.n(); ++ix) {
            const double x = g.coord(ix);
            f.at(ix, iy) = coherence_closed_form(std::hypot(x, y), std::atan2(y, x), t, cfg.mode, cfg.diffusion.D);
        }
    }
    return f;
}

double closed_population(const ScenarioConfig& cfg, double r, double t) {
    const ModeSpec& m = cfg.mode;
    const double scale = std::norm(m.amp);
    return std::abs(m.m) == 1 ? scale * population_m1(r, t, m.w0, m.power, cfg.diffusion.D)
                              : scale * population_m0(r, t, m.w0, m.power, cfg.diffusion.D);
}

RealField2D closed_population_field(const ScenarioConfig& cfg, const GridSpec& g, double t) {
    RealField2D f(g);
    for (int iy = 0; iy < g.n(); ++iy) {
        const double y = g.coord(iy);
        for (int ix = 0; ix < g.n(); ++ix) f.at(ix, iy) = closed_population(cfg, std::hypot(g.coord(ix), y), t);
    }
    return f;
}

// Hole radius for the refill diagnostic: the mask for blocked modes, w0/2 otherwise.
double hole_radius(const ScenarioConfig& cfg) {
    return cfg.mode.kind == ModeKind::BlockedGaussian && cfg.mode.block_radius > 0.0 ? cfg.mode.block_radius
                                                                                      : 0.5 * cfg.mode.w0;
}

template <typename Fn>
decltype(auto) numeric_guard(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        throw NumericError(e.what());
    }
}

}  // namespace

ScenarioResult evolve_scenario(const ScenarioConfig& cfg) {
    validate(cfg);
    return numeric_guard([&] {
        const GridSpec g = cfg.grid();
        ScenarioResult res{make_mode(cfg.mode, g), {}, {}, {}, {}, {}};
        const StateSnapshot start = initial_snapshot(res.initial);
        const CoherenceFactorParams cf{cfg.eta};
        for (double t : cfg.diffusion.times) {
            StateSnapshot snap = t == 0.0 ? start : evolve_snapshot(start, cfg.diffusion.D, t, cfg.solver);
            snap.time = t;
            res.efficiency.push_back(retrieval_efficiency(snap.rho12, res.initial));
            res.total_population.push_back(total_population(snap));
            res.coherence.push_back(coherence_factor_field(snap, cf));
            NodeReport nodes = find_radial_nodes(azimuthal_average(snap.rho12, cfg.radial_bins()), cfg.node_threshold);
            nodes.time = t;
            res.nodes.push_back(std::move(nodes));
            res.snapshots.push_back(std::move(snap));
        }
        return res;
    });
}

Manifest run_scenario(const ScenarioConfig& cfg) {
    const ScenarioResult res = evolve_scenario(cfg);
    const std::string head = csv_header(cfg);
    const std::string comment = config_comment(cfg);
    const auto& times = cfg.diffusion.times;
    const GridSpec g = cfg.grid();
    OutputWriter out(cfg.out_dir);

    if (cfg.wants(OutputKind::Snapshots)) {
        for (std::size_t k = 0; k < times.size(); ++k) {
            char stem[32];
            std::snprintf(stem, sizeof stem, "t%03zu", k);
            const StateSnapshot& s = res.snapshots[k];
            if (cfg.format != FieldFormat::Csv) {
                out.write_bytes("snapshots/rho12_" + std::string(stem) + ".vxf", encode_vxf(s.rho12, s.time));
                out.write_bytes("snapshots/rho22_" + std::string(stem) + ".vxf", encode_vxf(s.rho22, s.time));
            }
            if (cfg.format != FieldFormat::Vxf) {
                const std::string c = comment + "time: " + fmt(s.time);
                const std::string r12 = "snapshots/rho12_" + std::string(stem) + ".csv";
                const std::string r22 = "snapshots/rho22_" + std::string(stem) + ".csv";
                write_field_csv(out.root() / r12, s.rho12, c);
                write_field_csv(out.root() / r22, s.rho22, c);
                out.record(r12);
                out.record(r22);
            }
        }
    }

    if (cfg.wants(OutputKind::RadialProfiles)) {
        std::string csv = head + "time,r,mean_r,count,abs_rho12,rho22,coherence_factor,abs_rho12_closed,rho22_closed\n";
        const int nbins = cfg.radial_bins();
        for (std::size_t k = 0; k < times.size(); ++k) {
            const StateSnapshot& s = res.snapshots[k];
            const RadialProfile p12 = azimuthal_average(s.rho12, nbins);
            const RadialProfile p22 = azimuthal_average(as_complex(s.rho22), nbins);
            const RadialProfile pf = azimuthal_average(as_complex(res.coherence[k].values), nbins);
            RadialProfile c12, c22;
            if (has_coherence_closed_form(cfg.mode)) c12 = azimuthal_average(closed_coherence_field(cfg, g, times[k]), nbins);
            if (has_population_closed_form(cfg.mode)) {
                c22 = azimuthal_average(as_complex(closed_population_field(cfg, g, times[k])), nbins);
            }
            for (std::size_t b = 0; b < p12.size(); ++b) {
                csv += fmt(times[k]) + ',' + fmt(p12.radii[b]) + ',' + fmt(p12.mean_radius[b]) + ',' +
                       std::to_string(p12.counts[b]) + ',' + fmt(std::sqrt(p12.mean_intensity[b])) + ',' +
                       fmt(p22.mean_amplitude[b].real()) + ',' + fmt(pf.mean_amplitude[b].real()) + ',' +
                       (c12.empty() ? "" : fmt(std::sqrt(c12.mean_intensity[b]))) + ',' +
                       (c22.empty() ? "" : fmt(c22.mean_amplitude[b].real())) + '\n';
            }
        }
        out.write_text("radial_profiles.csv", csv);
    }

    if (cfg.wants(OutputKind::FidelityTrace)) {
        std::string csv = head + "time,s,efficiency,fidelity_closed,total_population\n";
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double s = evolution_factor(times[k], cfg.diffusion.D, cfg.mode.w0);
            const std::string closed = has_coherence_closed_form(cfg.mode)
                                           ? fmt(fidelity_closed_form(std::abs(cfg.mode.m), times[k],
                                                                      cfg.diffusion.D, cfg.mode.w0))
                                           : "";
            csv += fmt(times[k]) + ',' + fmt(s) + ',' + fmt(res.efficiency[k]) + ',' + closed + ',' +
                   fmt(res.total_population[k]) + '\n';
        }
        out.write_text("fidelity_trace.csv", csv);
    }

    if (cfg.wants(OutputKind::CoherenceFactor)) {
        std::string csv = head + "time,f_center,f_weighted_mean\n";
        for (std::size_t k = 0; k < times.size(); ++k) {
            csv += fmt(times[k]) + ',' + fmt(res.coherence[k].values.origin()) + ',' +
                   fmt(res.coherence[k].weighted_mean) + '\n';
        }
        out.write_text("coherence_factor.csv", csv);
    }

    if (cfg.wants(OutputKind::Nodes)) out.write_text("nodes.csv", nodes_csv(cfg, res.nodes));

    if (cfg.wants(OutputKind::CenterTrace)) {
        std::string csv = head + "time,rho22_center,abs_rho12_center,f_center,rho22_center_closed\n";
        for (std::size_t k = 0; k < times.size(); ++k) {
            const StateSnapshot& s = res.snapshots[k];
            csv += fmt(times[k]) + ',' + fmt(center_intensity(s)) + ',' + fmt(std::abs(s.rho12.origin())) + ',' +
                   fmt(res.coherence[k].values.origin()) + ',' +
                   (has_population_closed_form(cfg.mode) ? fmt(closed_population(cfg, 0.0, times[k])) : "") + '\n';
        }
        out.write_text("center_trace.csv", csv);
    }

    if (cfg.wants(OutputKind::Fit)) {
        const auto [power, expo] = numeric_guard(
            [&] { return fit_decay(times, res.efficiency, cfg.diffusion.D, cfg.mode.w0); });
        std::string csv = head + "model,amplitude,rate,rms_log_residual,preferred\n";
        for (const DecayFit& f : {power, expo}) {
            csv += std::string(to_string(f.model)) + ',' + fmt(f.amplitude) + ',' + fmt(f.rate) + ',' +
                   fmt(f.rms_log_residual) + ',' + (f.preferred ? "1" : "0") + '\n';
        }
        out.write_text("fit.csv", csv);
    }

    if (cfg.wants(OutputKind::HoleRefill)) {
        const double radius = hole_radius(cfg);
        std::string csv = head + "time,hole_radius,refill_ratio,center_ratio\n";
        for (std::size_t k = 0; k < times.size(); ++k) {
            const ComplexField2D& f = res.snapshots[k].rho12;
            const double ratio = numeric_guard([&] { return hole_refill_ratio(f, radius); });
            const double center = numeric_guard([&] { return center_refill_ratio(f, radius); });
            csv += fmt(times[k]) + ',' + fmt(radius) + ',' + fmt(ratio) + ',' + fmt(center) + '\n';
        }
        out.write_text("hole_refill.csv", csv);
    }

    return out.finish();
}

SweepSpec parse_sweep(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0) throw ConfigError("sweep: expected name=values");
    SweepSpec spec;
    spec.param = std::string(text.substr(0, eq));
    static const char* known[] = {"m", "p", "w0", "P", "D"};
    if (std::none_of(std::begin(known), std::end(known), [&](const char* k) { return spec.param == k; })) {
        throw ConfigError("sweep: unknown parameter '" + spec.param + "' (expected m, p, w0, P or D)");
    }
    const std::string rest(text.substr(eq + 1));
    try {
        if (const auto dots = rest.find(".."); dots != std::string::npos) {
            std::size_t used = 0;
            const int lo = std::stoi(rest.substr(0, dots), &used);
            if (used != dots) throw std::invalid_argument("range");
            const std::string hi_text = rest.substr(dots + 2);
            const int hi = std::stoi(hi_text, &used);
            if (used != hi_text.size() || hi < lo) throw std::invalid_argument("range");
            for (int v = lo; v <= hi; ++v) spec.values.push_back(v);
        } else {
            std::istringstream items(rest);
            std::string item;
            while (std::getline(items, item, ',')) {
                std::size_t used = 0;
                spec.values.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument("list");
            }
        }
    } catch (const std::exception&) {
        throw ConfigError("sweep: cannot parse values '" + rest + "' (use a..b or v1,v2,...)");
    }
    if (spec.values.empty()) throw ConfigError("sweep: no values");
    if ((spec.param == "m" || spec.param == "p") &&
        std::any_of(spec.values.begin(), spec.values.end(), [](double v) { return v != std::round(v); })) {
        throw ConfigError("sweep: " + spec.param + " takes integer values");
    }
    return spec;
}

namespace {

ScenarioConfig with_param(ScenarioConfig cfg, const std::string& param, double v) {
    if (param == "m") cfg.mode.m = static_cast<int>(v);
    if (param == "p") cfg.mode.p = static_cast<int>(v);
    if (param == "w0") cfg.mode.w0 = v;
    if (param == "P") cfg.mode.power = v;
    if (param == "D") cfg.diffusion.D = v;
    validate(cfg);
    return cfg;
}

}  // namespace

SweepTable run_sweep(const ScenarioConfig& cfg, const SweepSpec& spec) {
    SweepTable table{spec, cfg.diffusion.times, {}, {}};
    for (double v : spec.values) {
        const ScenarioConfig c = with_param(cfg, spec.param, v);
        numeric_guard([&] {
            const GridSpec g = c.grid();
            const ComplexField2D f0 = make_mode(c.mode, g);
            std::vector<double> s, eff;
            for (double t : c.diffusion.times) {
                s.push_back(evolution_factor(t, c.diffusion.D, c.mode.w0));
                eff.push_back(retrieval_efficiency(diffuse(f0, c.diffusion.D, t, c.solver), f0));
            }
            table.s.push_back(std::move(s));
            table.efficiency.push_back(std::move(eff));
            return 0;
        });
    }
    return table;
}

std::string sweep_csv(const ScenarioConfig& cfg, const SweepTable& table) {
    // s depends on the value only when w0 or D is swept; one s column per value.
    std::string csv = csv_header(cfg) + "# sweep: " + table.spec.param + "\ntime";
    for (double v : table.spec.values) {
        const std::string tag = table.spec.param + "=" + fmt(v);
        csv += ",s[" + tag + "],efficiency[" + tag + "]";
    }
    csv += '\n';
    for (std::size_t k = 0; k < table.times.size(); ++k) {
        csv += fmt(table.times[k]);
        for (std::size_t i = 0; i < table.spec.values.size(); ++i) {
            csv += ',' + fmt(table.s[i][k]) + ',' + fmt(table.efficiency[i][k]);
        }
        csv += '\n';
    }
    return csv;
}

std::vector<NodeReport> run_nodes(const ScenarioConfig& cfg) {
    validate(cfg);
    return numeric_guard([&] {
        const GridSpec g = cfg.grid();
        const ComplexField2D f0 = make_mode(cfg.mode, g);
        std::vector<NodeReport> out;
        for (double t : cfg.diffusion.times) {
            const ComplexField2D f = diffuse(f0, cfg.diffusion.D, t, cfg.solver);
            NodeReport r = find_radial_nodes(azimuthal_average(f, cfg.radial_bins()), cfg.node_threshold);
            r.time = t;
            out.push_back(std::move(r));
        }
        return out;
    });
}

std::string nodes_csv(const ScenarioConfig& cfg, const std::vector<NodeReport>& nodes) {
    std::string csv = csv_header(cfg) + "time,center_node,off_center_count,node_radii\n";
    for (const NodeReport& r : nodes) {
        std::string radii;
        for (std::size_t i = 0; i < r.node_radii.size(); ++i) {
            if (i) radii += ';';
            radii += fmt(r.node_radii[i]);
        }
        csv += fmt(r.time) + ',' + (r.center_node ? "1" : "0") + ',' + std::to_string(r.off_center_count()) + ',' +
               radii + '\n';
    }
    return csv;
}

std::vector<HoleRow> run_compare_blocked(const ScenarioConfig& cfg) {
    validate(cfg);
    return numeric_guard([&] {
        const GridSpec g = cfg.grid();
        ModeSpec blocked = cfg.mode;
        blocked.kind = ModeKind::BlockedGaussian;
        blocked.p = blocked.m = 0;
        if (!(cfg.mode.kind == ModeKind::BlockedGaussian && cfg.mode.block_radius > 0.0)) {
            blocked.block_radius = cfg.mode.w0;
        }
        ModeSpec vortex = cfg.mode;
        vortex.kind = ModeKind::LG;
        vortex.p = 0;
        vortex.m = cfg.mode.kind == ModeKind::LG && cfg.mode.m != 0 ? cfg.mode.m : 1;

        const ComplexField2D b0 = blocked_gaussian(blocked, g);
        const ComplexField2D v0 = lg_field(vortex, g);
        const double vortex_hole = 0.5 * cfg.mode.w0;
        std::vector<HoleRow> rows;
        for (double t : cfg.diffusion.times) {
            const ComplexField2D b = diffuse(b0, cfg.diffusion.D, t, cfg.solver);
            const ComplexField2D v = diffuse(v0, cfg.diffusion.D, t, cfg.solver);
            rows.push_back({t, hole_refill_ratio(b, blocked.block_radius), hole_refill_ratio(v, vortex_hole),
                            center_refill_ratio(v, vortex_hole)});
        }
        return rows;
    });
}

std::string compare_blocked_csv(const ScenarioConfig& cfg, const std::vector<HoleRow>& rows) {
    std::string csv = csv_header(cfg) + "time,blocked_refill,vortex_refill,vortex_center_ratio\n";
    for (const HoleRow& r : rows) {
        csv += fmt(r.time) + ',' + fmt(r.blocked) + ',' + fmt(r.vortex) + ',' + fmt(r.vortex_center) + '\n';
    }
    return csv;
}

std::vector<EchoRow> run_echo(const ScenarioConfig& cfg) {
    validate(cfg);
    return numeric_guard([&] {
        const GridSpec g = cfg.grid();
        const QuantumParams q = cfg.quantum.value_or(QuantumParams{});
        const ComplexField2D f0 = make_mode(cfg.mode, g);
        const double n0 = l2_norm_sq(f0);
        std::vector<EchoRow> rows;
        for (double t : cfg.diffusion.times) {
            const ComplexField2D forward = evolve_quantum(f0, q, t);
            const ComplexField2D back = echo_reverse(forward, q, t);
            ComplexField2D diff(g);
            for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] = back.values[i] - f0.values[i];
            double log10_amp = 0.0;
            try {
                echo_reverse_classical(diffuse(f0, cfg.diffusion.D, t, cfg.solver), cfg.diffusion.D, t);
            } catch (const IrreversibleError& e) {
                log10_amp = e.log10_amplification();
            }
            rows.push_back({t, l2_norm_sq(forward) / n0, std::sqrt(l2_norm_sq(diff) / n0), log10_amp});
        }
        return rows;
    });
}

std::string echo_csv(const ScenarioConfig& cfg, const std::vector<EchoRow>& rows) {
    std::string csv = csv_header(cfg) + "time,quantum_norm_ratio,echo_roundtrip_error,classical_log10_amplification\n";
    for (const EchoRow& r : rows) {
        csv += fmt(r.time) + ',' + fmt(r.norm_ratio) + ',' + fmt(r.roundtrip_error) + ',' +
               fmt(r.classical_log10_amplification) + '\n';
    }
    return csv;
}

}  // namespace vortexdiff
