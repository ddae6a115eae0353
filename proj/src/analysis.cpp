#include "vortexdiff/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vortexdiff {

double retrieval_efficiency(const ComplexField2D& f_t, const ComplexField2D& f_0) {
    if (!(f_t.grid == f_0.grid)) throw std::invalid_argument("retrieval_efficiency: grids differ");
    const double e0 = l2_norm_sq(f_0);
    if (!(e0 > 0.0)) throw std::invalid_argument("retrieval_efficiency: reference field is zero");
    return l2_norm_sq(f_t) / e0;
}

CoherenceFactorField coherence_factor_field(const StateSnapshot& s, const CoherenceFactorParams& params) {
    validate(params);
    const auto& pop = s.rho22.values;
    const double peak = pop.empty() ? 0.0 : *std::max_element(pop.begin(), pop.end());
    const double scale = peak > 0.0 ? peak : 1.0;

    CoherenceFactorField out{RealField2D(s.rho22.grid), 1.0};
    std::vector<double> weighted(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const double coh = std::norm(s.rho12.values[i]) / scale;
        const double p = std::max(pop[i], 0.0) / scale;
        const double f = std::clamp((coh + params.eta) / (s.rho11 * p + params.eta), 0.0, 1.0);
        out.values.values[i] = f;
        weighted[i] = f * p;
    }
    const double total = stable_sum(pop) / scale;
    if (total > 0.0) out.weighted_mean = stable_sum(weighted) / total;
    return out;
}

namespace {

// Vertex of the parabola through three points (Newton form). False unless
// the parabola opens upward.
bool parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2, double& xv,
                     double& yv) {
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double a = (d12 - d01) / (x2 - x0);
    if (!(a > 0.0)) return false;
    xv = 0.5 * (x0 + x1) - d01 / (2.0 * a);
    yv = y0 + d01 * (xv - x0) + a * (xv - x0) * (xv - x1);
    return true;
}

}  // namespace

NodeReport find_radial_nodes(const RadialProfile& prof, double rel_threshold) {
    if (prof.empty()) throw std::invalid_argument("find_radial_nodes: empty profile");
    if (!(rel_threshold > 0.0 && rel_threshold <= 0.1)) {
        throw std::invalid_argument("find_radial_nodes: rel_threshold must lie in (0, 0.1]");
    }
    const std::size_t nb = prof.size();

    double peak = std::abs(prof.origin_amplitude);
    std::size_t ref = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        peak = std::max(peak, std::sqrt(prof.mean_intensity[b]));
        if (std::abs(prof.demodulated[b]) > std::abs(prof.demodulated[ref])) ref = b;
    }
    NodeReport report;
    if (!(peak > 0.0)) return report;
    const double level = rel_threshold * peak;

    if (std::abs(prof.origin_amplitude) < level) {
        report.center_node = true;
        report.node_radii.push_back(0.0);
    }

    // Signed radial amplitude with the global phase removed.
    const cplx phase = std::polar(1.0, -std::arg(prof.demodulated[ref]));
    std::vector<double> signed_amp(nb);
    for (std::size_t b = 0; b < nb; ++b) signed_amp[b] = (prof.demodulated[b] * phase).real();

    // Lobes are maximal runs of constant sign; crossings separate them.
    std::vector<std::size_t> run_start{0};
    for (std::size_t b = 1; b < nb; ++b) {
        if (signed_amp[b - 1] * signed_amp[b] < 0.0) run_start.push_back(b);
    }
    run_start.push_back(nb);
    auto lobe_height = [&](std::size_t run) {
        double h = 0.0;
        for (std::size_t b = run_start[run]; b < run_start[run + 1]; ++b) {
            h = std::max(h, std::abs(signed_amp[b]));
        }
        return h;
    };

    for (std::size_t run = 1; run + 1 < run_start.size(); ++run) {
        if (lobe_height(run - 1) < level || lobe_height(run) < level) continue;
        const std::size_t hi = run_start[run];
        const std::size_t lo = hi - 1;
        std::size_t c = std::abs(signed_amp[lo]) <= std::abs(signed_amp[hi]) ? lo : hi;
        c = std::clamp<std::size_t>(c, 1, nb - 2);

        const double x0 = prof.mean_radius[c - 1], x1 = prof.mean_radius[c], x2 = prof.mean_radius[c + 1];
        const double y0 = signed_amp[c - 1] * signed_amp[c - 1];
        const double y1 = signed_amp[c] * signed_amp[c];
        const double y2 = signed_amp[c + 1] * signed_amp[c + 1];
        double xv = 0.0, yv = 0.0;
        if (!parabola_vertex(x0, y0, x1, y1, x2, y2, xv, yv)) continue;
        xv = std::clamp(xv, x0, x2);
        if (std::sqrt(std::max(yv, 0.0)) >= level) continue;
        report.node_radii.push_back(xv);
    }
    std::sort(report.node_radii.begin(), report.node_radii.end());
    return report;
}

double center_intensity(const StateSnapshot& s) { return s.rho22.origin(); }

double total_population(const StateSnapshot& s) { return integrate(s.rho22); }

const char* to_string(DecayModel model) {
    return model == DecayModel::PowerLaw ? "POWER_LAW" : "EXPONENTIAL";
}

namespace {

struct LineFit {
    double intercept;
    double slope;
    double rms;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double count = static_cast<double>(x.size());
    const double mx = stable_sum(x) / count;
    const double my = stable_sum(y) / count;
    std::vector<double> sxy(x.size()), sxx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy[i] = (x[i] - mx) * (y[i] - my);
        sxx[i] = (x[i] - mx) * (x[i] - mx);
    }
    const double vxx = stable_sum(sxx);
    if (!(vxx > 0.0)) throw std::invalid_argument("fit_decay: abscissae do not vary");
    const double slope = stable_sum(sxy) / vxx;
    const double intercept = my - slope * mx;
    std::vector<double> r2(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        r2[i] = r * r;
    }
    return {intercept, slope, std::sqrt(stable_sum(r2) / count)};
}

}  // namespace

std::pair<DecayFit, DecayFit> fit_decay(std::span<const double> times, std::span<const double> values,
                                        double D, double w0) {
    if (times.size() != values.size()) throw std::invalid_argument("fit_decay: length mismatch");
    if (times.size() < 5) throw std::invalid_argument("fit_decay: need at least 5 samples");
    if (!(w0 > 0.0)) throw std::invalid_argument("fit_decay: w0 must be positive");
    std::vector<double> log_s, t, log_v;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(values[i] > 0.0)) throw std::invalid_argument("fit_decay: values must be positive");
        log_s.push_back(std::log(evolution_factor(times[i], D, w0)));
        t.push_back(times[i]);
        log_v.push_back(std::log(values[i]));
    }
    const LineFit pw = least_squares(log_s, log_v);
    const LineFit ex = least_squares(t, log_v);

    DecayFit power{DecayModel::PowerLaw, std::exp(pw.intercept), pw.slope, pw.rms, false};
    DecayFit expo{DecayModel::Exponential, std::exp(ex.intercept), -ex.slope, ex.rms, false};
    if (power.rms_log_residual <= expo.rms_log_residual) {
        power.preferred = true;
    } else {
        expo.preferred = true;
    }
    return {power, expo};
}

namespace {

// Mean |f| over samples with lo <= r < hi.
double ring_mean_abs(const ComplexField2D& f, double lo, double hi) {
    const GridSpec& g = f.grid;
    std::vector<double> mags;
    for (int iy = 0; iy < g.n(); ++iy) {
        const double y = g.coord(iy);
        for (int ix = 0; ix < g.n(); ++ix) {
            const double r = std::hypot(g.coord(ix), y);
            if (r >= lo && r < hi) mags.push_back(std::abs(f.at(ix, iy)));
        }
    }
    if (mags.empty()) throw std::invalid_argument("ring average: no samples in ring");
    return stable_sum(mags) / static_cast<double>(mags.size());
}

double safe_ratio(double num, double den) {
    if (den > 0.0) return num / den;
    return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace

double hole_refill_ratio(const ComplexField2D& f, double block_radius) {
    if (block_radius < 2.0 * f.grid.dx()) {
        throw std::invalid_argument("hole_refill_ratio: block_radius below 2*dx");
    }
    return safe_ratio(ring_mean_abs(f, 0.0, block_radius), ring_mean_abs(f, block_radius, 2.0 * block_radius));
}

double center_refill_ratio(const ComplexField2D& f, double radius) {
    if (radius < 2.0 * f.grid.dx()) throw std::invalid_argument("center_refill_ratio: radius below 2*dx");
    return safe_ratio(std::abs(f.origin()), ring_mean_abs(f, radius, 2.0 * radius));
}

}  // namespace vortexdiff
