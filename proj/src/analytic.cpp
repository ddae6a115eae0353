#include "vortexdiff/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vortexdiff/errors.hpp"

namespace vortexdiff {

using std::numbers::pi;

void validate(const DiffusionParams& params) {
    if (!(params.D >= 0.0) || !std::isfinite(params.D)) {
        throw std::invalid_argument("diffusion: D must be finite and >= 0");
    }
    for (std::size_t i = 0; i < params.times.size(); ++i) {
        if (!(params.times[i] >= 0.0)) throw std::invalid_argument("diffusion: times must be >= 0");
        if (i > 0 && !(params.times[i] > params.times[i - 1])) {
            throw std::invalid_argument("times not ascending");
        }
    }
}

void validate(const CoherenceFactorParams& params) {
    if (!(params.eta > 0.0 && params.eta <= 1e-8)) {
        throw std::invalid_argument("eta must lie in (0, 1e-8]");
    }
}

StateSnapshot initial_snapshot(const ComplexField2D& mode) {
    return StateSnapshot{0.0, mode, intensity(mode), 1.0};
}

void check_physical(const StateSnapshot& s) {
    if (!(s.rho12.grid == s.rho22.grid)) throw NumericError("snapshot: rho12 and rho22 grids differ");
    const double peak = s.rho22.values.empty()
                            ? 0.0
                            : *std::max_element(s.rho22.values.begin(), s.rho22.values.end());
    const double scale = peak > 0.0 ? peak : 1.0;
    for (std::size_t i = 0; i < s.rho22.values.size(); ++i) {
        const double p = s.rho22.values[i];
        if (!(p >= 0.0)) throw NumericError("snapshot: rho22 negative or not finite");
        if (std::norm(s.rho12.values[i]) / scale > s.rho11 * p / scale + kPhysicalityTolerance) {
            throw NumericError("snapshot: |rho12|^2 exceeds rho11*rho22");
        }
    }
}

double evolution_factor(double t, double D, double w0) {
    return (w0 * w0 + 4.0 * D * t) / (w0 * w0);
}

cplx coherence_closed_form(double r, double theta, double t, const ModeSpec& spec, double D) {
    if (spec.p != 0) {
        throw std::invalid_argument("coherence_closed_form: no closed form for p > 0");
    }
    const double s = evolution_factor(t, D, spec.w0);
    ModeSpec widened = spec;
    widened.kind = ModeKind::LG;
    widened.w0 = std::sqrt(s) * spec.w0;
    // lg_value at the widened waist is amp * A_m(r, sqrt(s) w0) * exp(-i m theta).
    const cplx spread = lg_value(widened, r * std::cos(theta), r * std::sin(theta));
    return spread / std::sqrt(std::pow(s, std::abs(spec.m) + 1));
}

double population_m1(double r, double t, double w0, double power, double D) {
    const double w2 = w0 * w0;
    const double q = 8.0 * D * t + w2;
    return 4.0 * power * std::exp(-2.0 * r * r / q) *
           (32.0 * D * D * t * t + r * r * w2 + 4.0 * D * t * w2) / (pi * q * q * q);
}

double population_m0(double r, double t, double w0, double power, double D) {
    const double q = 8.0 * D * t + w0 * w0;
    return 2.0 * power * std::exp(-2.0 * r * r / q) / (pi * q);
}

double fidelity_closed_form(int m, double t, double D, double w0) {
    if (m < 0) throw std::invalid_argument("fidelity_closed_form: m must be >= 0");
    return std::pow(evolution_factor(t, D, w0), -(m + 1));
}

double coherence_factor(double coh_sq, double pbb, double pcc, double eta) {
    if (coh_sq < 0.0 || pbb < 0.0 || pcc < 0.0) {
        throw std::invalid_argument("coherence_factor: inputs must be nonnegative");
    }
    if (!(eta > 0.0)) throw std::invalid_argument("coherence_factor: eta must be positive");
    const double f = (coh_sq + eta) / (pbb * pcc + eta);
    if (coh_sq - pbb * pcc > kPhysicalityTolerance) {
        throw std::invalid_argument("coherence_factor: |rho_bc|^2 exceeds rho_bb*rho_cc");
    }
    return std::clamp(f, 0.0, 1.0);
}

CenterPeak center_population_peak_m1(double w0, double D, double power) {
    if (!(D > 0.0)) throw std::invalid_argument("center_population_peak_m1: D must be positive");
    // rho22(0,t) = 16 P D t / (pi (8Dt + w0^2)^2), maximal at 8Dt = w0^2.
    return {w0 * w0 / (8.0 * D), power / (2.0 * pi * w0 * w0)};
}

}  // namespace vortexdiff
