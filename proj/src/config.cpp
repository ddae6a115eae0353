#include "vortexdiff/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "vortexdiff/errors.hpp"

namespace vortexdiff {

namespace {

int line_of(const YAML::Node& node) {
    const YAML::Mark mark = node.Mark();
    return mark.is_null() ? 0 : mark.line + 1;
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
    if (!node.IsScalar()) throw ConfigError(key + ": expected a scalar", line_of(node));
    try {
        return node.as<T>();
    } catch (const YAML::BadConversion&) {
        throw ConfigError(key + ": cannot convert '" + node.Scalar() + "'", line_of(node));
    }
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    return s;
}

class Reader {
public:
    explicit Reader(const ParseOptions& opts, std::vector<std::string>& warnings)
        : opts_(opts), warnings_(warnings) {}

    // Rejects (strict) or records (lenient) keys outside `allowed`.
    void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& section) {
        if (!map.IsMap()) throw ConfigError(section + ": expected a mapping", line_of(map));
        for (const auto& kv : map) {
            const std::string key = kv.first.as<std::string>();
            if (allowed.count(key)) continue;
            const std::string where = section.empty() ? key : section + "." + key;
            if (opts_.strict) throw ConfigError("unknown key '" + where + "'", line_of(kv.first));
            warnings_.push_back("line " + std::to_string(line_of(kv.first)) + ": unknown key '" + where + "'");
        }
    }

private:
    const ParseOptions& opts_;
    std::vector<std::string>& warnings_;
};

ModeKind parse_mode_kind(const YAML::Node& node) {
    const std::string v = upper(scalar<std::string>(node, "mode.kind"));
    if (v == "LG") return ModeKind::LG;
    if (v == "PLANE_WAVE") return ModeKind::PlaneWave;
    if (v == "BLOCKED_GAUSSIAN") return ModeKind::BlockedGaussian;
    throw ConfigError("mode.kind: expected LG, PLANE_WAVE or BLOCKED_GAUSSIAN", line_of(node));
}

Scheme parse_scheme(const YAML::Node& node) {
    const std::string v = upper(scalar<std::string>(node, "solver.scheme"));
    if (v == "SPECTRAL") return Scheme::Spectral;
    if (v == "FD_EXPLICIT" || v == "FD") return Scheme::FdExplicit;
    if (v == "KERNEL") return Scheme::Kernel;
    throw ConfigError("solver.scheme: expected SPECTRAL, FD_EXPLICIT or KERNEL", line_of(node));
}

Boundary parse_boundary(const YAML::Node& node) {
    const std::string v = upper(scalar<std::string>(node, "solver.boundary"));
    if (v == "PERIODIC") return Boundary::Periodic;
    if (v == "OPEN") return Boundary::Open;
    throw ConfigError("solver.boundary: expected PERIODIC or OPEN", line_of(node));
}

OutputKind parse_output(const YAML::Node& node) {
    static const std::pair<const char*, OutputKind> table[] = {
        {"SNAPSHOTS", OutputKind::Snapshots},
        {"RADIAL_PROFILES", OutputKind::RadialProfiles},
        {"FIDELITY_TRACE", OutputKind::FidelityTrace},
        {"COHERENCE_FACTOR", OutputKind::CoherenceFactor},
        {"NODES", OutputKind::Nodes},
        {"CENTER_TRACE", OutputKind::CenterTrace},
        {"FIT", OutputKind::Fit},
        {"HOLE_REFILL", OutputKind::HoleRefill},
    };
    const std::string v = upper(scalar<std::string>(node, "outputs"));
    for (const auto& [name, kind] : table) {
        if (v == name) return kind;
    }
    throw ConfigError("outputs: unknown output '" + v + "'", line_of(node));
}

cplx parse_amp(const YAML::Node& node) {
    if (node.IsScalar()) return {scalar<double>(node, "mode.amp"), 0.0};
    if (node.IsSequence() && node.size() == 2) {
        return {scalar<double>(node[0], "mode.amp"), scalar<double>(node[1], "mode.amp")};
    }
    throw ConfigError("mode.amp: expected a number or [re, im]", line_of(node));
}

std::vector<double> parse_times(const YAML::Node& node, Reader& reader) {
    std::vector<double> times;
    if (node.IsSequence()) {
        for (const auto& item : node) times.push_back(scalar<double>(item, "diffusion.times"));
        return times;
    }
    if (node.IsMap()) {
        reader.check_keys(node, {"start", "stop", "count"}, "diffusion.times");
        if (!node["start"] || !node["stop"] || !node["count"]) {
            throw ConfigError("diffusion.times: range needs start, stop and count", line_of(node));
        }
        const double start = scalar<double>(node["start"], "diffusion.times.start");
        const double stop = scalar<double>(node["stop"], "diffusion.times.stop");
        const int count = scalar<int>(node["count"], "diffusion.times.count");
        if (count < 2) throw ConfigError("diffusion.times.count must be >= 2", line_of(node["count"]));
        for (int i = 0; i < count; ++i) times.push_back(start + (stop - start) * i / (count - 1));
        return times;
    }
    throw ConfigError("diffusion.times: expected a list or {start, stop, count}", line_of(node));
}

YAML::Node parse_document(std::string_view text) {
    try {
        return YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ConfigError(e.msg, e.mark.line + 1);
    }
}

}  // namespace

const char* to_string(OutputKind kind) {
    switch (kind) {
        case OutputKind::Snapshots: return "SNAPSHOTS";
        case OutputKind::RadialProfiles: return "RADIAL_PROFILES";
        case OutputKind::FidelityTrace: return "FIDELITY_TRACE";
        case OutputKind::CoherenceFactor: return "COHERENCE_FACTOR";
        case OutputKind::Nodes: return "NODES";
        case OutputKind::CenterTrace: return "CENTER_TRACE";
        case OutputKind::Fit: return "FIT";
        case OutputKind::HoleRefill: return "HOLE_REFILL";
    }
    return "?";
}

const char* to_string(FieldFormat format) {
    switch (format) {
        case FieldFormat::Csv: return "csv";
        case FieldFormat::Vxf: return "vxf";
        case FieldFormat::Both: return "both";
    }
    return "?";
}

std::optional<FieldFormat> parse_field_format(std::string_view text) {
    if (text == "csv") return FieldFormat::Csv;
    if (text == "vxf") return FieldFormat::Vxf;
    if (text == "both") return FieldFormat::Both;
    return std::nullopt;
}

bool ScenarioConfig::wants(OutputKind kind) const {
    return std::find(outputs.begin(), outputs.end(), kind) != outputs.end();
}

double required_extent(const ScenarioConfig& cfg) {
    if (cfg.mode.kind == ModeKind::PlaneWave) return 0.0;
    ModeSpec shape = cfg.mode;
    if (shape.kind == ModeKind::BlockedGaussian) shape.p = shape.m = 0;
    double need = containment_extent(shape);
    if (!cfg.diffusion.times.empty()) {
        const double s_max = evolution_factor(cfg.diffusion.times.back(), cfg.diffusion.D, cfg.mode.w0);
        need = std::max(need, 4.0 * cfg.mode.w0 * std::sqrt(s_max));
    }
    return need;
}

void validate(const ScenarioConfig& cfg) {
    GridSpec grid = [&] {
        try {
            return cfg.grid();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }();
    try {
        validate(cfg.diffusion);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.diffusion.times.empty()) throw ConfigError("diffusion.times must not be empty");

    if (!(cfg.mode.w0 > 0.0)) throw ConfigError("mode.w0 must be positive");
    const double need = required_extent(cfg);
    if (need > cfg.extent) {
        std::ostringstream os;
        os.precision(6);
        os << "containment rule violated: grid.extent " << cfg.extent << " < required minimum extent "
           << need << " (max of 4*w0*sqrt(1+|m|+p) and 4*w0*sqrt(s_max))";
        throw ConfigError(os.str());
    }
    try {
        validate(cfg.mode, grid);
        validate(CoherenceFactorParams{cfg.eta});
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.mode.kind == ModeKind::PlaneWave && cfg.solver.boundary == Boundary::Open &&
        cfg.solver.scheme == Scheme::Spectral) {
        throw ConfigError("PLANE_WAVE requires solver.boundary PERIODIC (the wave is not contained)");
    }
    if (cfg.mode.kind == ModeKind::PlaneWave && cfg.solver.scheme == Scheme::Kernel) {
        throw ConfigError("PLANE_WAVE cannot use the KERNEL scheme (zero outside the window)");
    }
    if (!(cfg.solver.cfl_safety > 0.0 && cfg.solver.cfl_safety <= 1.0)) {
        throw ConfigError("solver.cfl_safety must lie in (0, 1]");
    }
    if (cfg.solver.dt < 0.0) throw ConfigError("solver.dt must be >= 0");
    if (cfg.solver.scheme == Scheme::FdExplicit && cfg.solver.dt > 0.0 && cfg.diffusion.D > 0.0) {
        const double max_dt = fd_max_dt(grid, cfg.diffusion.D, cfg.solver.cfl_safety);
        if (cfg.solver.dt > max_dt) {
            std::ostringstream os;
            os << "solver.dt " << cfg.solver.dt << " violates the stability bound; maximum admissible dt "
               << max_dt;
            throw ConfigError(os.str());
        }
    }
    if (cfg.nbins != 0 && cfg.nbins < 4) throw ConfigError("analysis.nbins must be >= 4");
    if (!(cfg.node_threshold > 0.0 && cfg.node_threshold <= 0.1)) {
        throw ConfigError("analysis.node_threshold must lie in (0, 0.1]");
    }
    if (cfg.quantum && !std::isfinite(cfg.quantum->beta)) throw ConfigError("quantum.beta must be finite");
    if (cfg.wants(OutputKind::Fit) && cfg.diffusion.times.size() < 5) {
        throw ConfigError("outputs: FIT needs at least 5 diffusion times");
    }
}

ScenarioConfig parse_config(std::string_view text, const ParseOptions& options) {
    const YAML::Node root = parse_document(text);
    if (!root.IsMap()) throw ConfigError("config: top level must be a mapping", line_of(root));

    ScenarioConfig cfg;
    Reader reader(options, cfg.warnings);
    reader.check_keys(root,
                      {"name", "mode", "diffusion", "grid", "solver", "quantum", "eta", "analysis",
                       "outputs", "out_dir", "format"},
                      "");

    if (root["name"]) cfg.name = scalar<std::string>(root["name"], "name");

    const YAML::Node mode = root["mode"];
    if (!mode) throw ConfigError("missing required section 'mode'");
    reader.check_keys(mode, {"kind", "p", "m", "w0", "P", "amp", "k", "block_radius", "allow_nonperiodic"},
                      "mode");
    if (mode["kind"]) cfg.mode.kind = parse_mode_kind(mode["kind"]);
    if (mode["p"]) cfg.mode.p = scalar<int>(mode["p"], "mode.p");
    if (mode["m"]) cfg.mode.m = scalar<int>(mode["m"], "mode.m");
    if (!mode["w0"]) throw ConfigError("mode.w0 is required", line_of(mode));
    cfg.mode.w0 = scalar<double>(mode["w0"], "mode.w0");
    if (!mode["P"]) throw ConfigError("mode.P is required", line_of(mode));
    cfg.mode.power = scalar<double>(mode["P"], "mode.P");
    if (mode["amp"]) cfg.mode.amp = parse_amp(mode["amp"]);
    if (mode["k"]) cfg.mode.k = scalar<double>(mode["k"], "mode.k");
    if (mode["block_radius"]) cfg.mode.block_radius = scalar<double>(mode["block_radius"], "mode.block_radius");
    if (mode["allow_nonperiodic"]) {
        cfg.mode.allow_nonperiodic = scalar<bool>(mode["allow_nonperiodic"], "mode.allow_nonperiodic");
    }

    const YAML::Node diffusion = root["diffusion"];
    if (!diffusion) throw ConfigError("missing required section 'diffusion'");
    reader.check_keys(diffusion, {"D", "times"}, "diffusion");
    if (!diffusion["D"]) throw ConfigError("diffusion.D is required", line_of(diffusion));
    cfg.diffusion.D = scalar<double>(diffusion["D"], "diffusion.D");
    if (!diffusion["times"]) throw ConfigError("diffusion.times is required", line_of(diffusion));
    cfg.diffusion.times = parse_times(diffusion["times"], reader);

    const YAML::Node grid = root["grid"];
    if (!grid) throw ConfigError("missing required section 'grid'");
    reader.check_keys(grid, {"n", "extent"}, "grid");
    if (!grid["n"] || !grid["extent"]) throw ConfigError("grid needs n and extent", line_of(grid));
    cfg.n = scalar<int>(grid["n"], "grid.n");
    cfg.extent = scalar<double>(grid["extent"], "grid.extent");

    if (const YAML::Node solver = root["solver"]) {
        reader.check_keys(solver, {"scheme", "boundary", "dt", "cfl_safety"}, "solver");
        if (solver["scheme"]) cfg.solver.scheme = parse_scheme(solver["scheme"]);
        if (solver["boundary"]) cfg.solver.boundary = parse_boundary(solver["boundary"]);
        if (solver["dt"]) cfg.solver.dt = scalar<double>(solver["dt"], "solver.dt");
        if (solver["cfl_safety"]) cfg.solver.cfl_safety = scalar<double>(solver["cfl_safety"], "solver.cfl_safety");
    }
    if (const YAML::Node quantum = root["quantum"]) {
        reader.check_keys(quantum, {"beta"}, "quantum");
        QuantumParams q;
        if (quantum["beta"]) q.beta = scalar<double>(quantum["beta"], "quantum.beta");
        cfg.quantum = q;
    }
    if (root["eta"]) cfg.eta = scalar<double>(root["eta"], "eta");
    if (const YAML::Node analysis = root["analysis"]) {
        reader.check_keys(analysis, {"nbins", "node_threshold"}, "analysis");
        if (analysis["nbins"]) cfg.nbins = scalar<int>(analysis["nbins"], "analysis.nbins");
        if (analysis["node_threshold"]) {
            cfg.node_threshold = scalar<double>(analysis["node_threshold"], "analysis.node_threshold");
        }
    }
    if (const YAML::Node outputs = root["outputs"]) {
        if (!outputs.IsSequence()) throw ConfigError("outputs: expected a list", line_of(outputs));
        for (const auto& item : outputs) {
            const OutputKind kind = parse_output(item);
            if (!cfg.wants(kind)) cfg.outputs.push_back(kind);
        }
    }
    if (root["out_dir"]) cfg.out_dir = scalar<std::string>(root["out_dir"], "out_dir");
    if (root["format"]) {
        const auto fmt = parse_field_format(scalar<std::string>(root["format"], "format"));
        if (!fmt) throw ConfigError("format: expected csv, vxf or both", line_of(root["format"]));
        cfg.format = *fmt;
    }

    validate(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError(IoErrorCode::OpenFailed, "cannot open config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), options);
}

std::string to_yaml(const ScenarioConfig& cfg) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << cfg.name;

    out << YAML::Key << "mode" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << to_string(cfg.mode.kind);
    out << YAML::Key << "p" << YAML::Value << cfg.mode.p;
    out << YAML::Key << "m" << YAML::Value << cfg.mode.m;
    out << YAML::Key << "w0" << YAML::Value << cfg.mode.w0;
    out << YAML::Key << "P" << YAML::Value << cfg.mode.power;
    out << YAML::Key << "amp" << YAML::Value << YAML::Flow << YAML::BeginSeq << cfg.mode.amp.real()
        << cfg.mode.amp.imag() << YAML::EndSeq;
    out << YAML::Key << "k" << YAML::Value << cfg.mode.k;
    out << YAML::Key << "block_radius" << YAML::Value << cfg.mode.block_radius;
    out << YAML::Key << "allow_nonperiodic" << YAML::Value << cfg.mode.allow_nonperiodic;
    out << YAML::EndMap;

    out << YAML::Key << "diffusion" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "D" << YAML::Value << cfg.diffusion.D;
    out << YAML::Key << "times" << YAML::Value << YAML::Flow << cfg.diffusion.times;
    out << YAML::EndMap;

    out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "n" << YAML::Value << cfg.n;
    out << YAML::Key << "extent" << YAML::Value << cfg.extent;
    out << YAML::EndMap;

    out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "scheme" << YAML::Value << to_string(cfg.solver.scheme);
    out << YAML::Key << "boundary" << YAML::Value << to_string(cfg.solver.boundary);
    out << YAML::Key << "dt" << YAML::Value << cfg.solver.dt;
    out << YAML::Key << "cfl_safety" << YAML::Value << cfg.solver.cfl_safety;
    out << YAML::EndMap;

    if (cfg.quantum) {
        out << YAML::Key << "quantum" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "beta" << YAML::Value << cfg.quantum->beta;
        out << YAML::EndMap;
    }
    out << YAML::Key << "eta" << YAML::Value << cfg.eta;
    out << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "nbins" << YAML::Value << cfg.radial_bins();
    out << YAML::Key << "node_threshold" << YAML::Value << cfg.node_threshold;
    out << YAML::EndMap;

    out << YAML::Key << "outputs" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (OutputKind kind : cfg.outputs) out << to_string(kind);
    out << YAML::EndSeq;
    out << YAML::Key << "format" << YAML::Value << to_string(cfg.format);
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace vortexdiff
