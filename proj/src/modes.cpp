#include "vortexdiff/modes.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace vortexdiff {

namespace {

// log(n!) without overflow for the factorial ratios in the normalization.
double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

void check_common(const ModeSpec& spec) {
    if (!(spec.w0 > 0.0)) throw std::invalid_argument("mode: w0 must be positive");
    if (!(spec.power > 0.0)) throw std::invalid_argument("mode: P must be positive");
    if (!(spec.block_radius >= 0.0)) throw std::invalid_argument("mode: block_radius must be >= 0");
    if (spec.p < 0) throw std::invalid_argument("mode: p must be >= 0");
}

}  // namespace

const char* to_string(ModeKind kind) {
    switch (kind) {
        case ModeKind::LG: return "LG";
        case ModeKind::PlaneWave: return "PLANE_WAVE";
        case ModeKind::BlockedGaussian: return "BLOCKED_GAUSSIAN";
    }
    return "?";
}

double assoc_laguerre(int p, int alpha, double x) {
    if (p < 0 || alpha < 0) {
        throw std::invalid_argument("assoc_laguerre: p and alpha must be nonnegative");
    }
    double prev = 1.0;  // L_0
    if (p == 0) return prev;
    double cur = 1.0 + alpha - x;  // L_1
    for (int k = 1; k < p; ++k) {
        const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double containment_extent(const ModeSpec& spec) {
    return 4.0 * spec.w0 * std::sqrt(1.0 + std::abs(spec.m) + spec.p);
}

cplx lg_value(const ModeSpec& spec, double x, double y) {
    const int am = std::abs(spec.m);
    const double w0 = spec.w0;
    const double r2 = x * x + y * y;
    // sqrt(2P/pi * p!/(p+|m|)!) / w0; reduces to the p = 0 radial profile.
    const double norm = std::sqrt(2.0 * spec.power / std::numbers::pi *
                                  std::exp(log_factorial(spec.p) - log_factorial(spec.p + am))) / w0;
    const double rho = std::sqrt(2.0 * r2) / w0;
    double radial = norm * std::pow(rho, am) * std::exp(-r2 / (w0 * w0));
    if (spec.p > 0) radial *= assoc_laguerre(spec.p, am, 2.0 * r2 / (w0 * w0));
    if (spec.m == 0) return spec.amp * radial;
    const double theta = std::atan2(y, x);
    return spec.amp * radial * std::polar(1.0, -spec.m * theta);
}

void validate(const ModeSpec& spec, const GridSpec& grid) {
    check_common(spec);
    switch (spec.kind) {
        case ModeKind::LG:
        case ModeKind::BlockedGaussian: {
            const double need = containment_extent(spec);
            if (need > grid.extent()) {
                std::ostringstream os;
                os << "mode not contained: 4*w0*sqrt(1+|m|+p) = " << need
                   << " exceeds grid extent " << grid.extent() << " (minimum extent " << need << ")";
                throw std::invalid_argument(os.str());
            }
            if (spec.kind == ModeKind::BlockedGaussian && spec.block_radius >= grid.extent()) {
                throw std::invalid_argument("mode: block_radius must be smaller than the grid extent");
            }
            break;
        }
        case ModeKind::PlaneWave: {
            const double kdx = std::abs(spec.k) * grid.dx();
            if (kdx > std::numbers::pi * (1.0 + 1e-12)) {
                throw std::invalid_argument("plane wave: k*dx exceeds pi (above Nyquist)");
            }
            const double harmonic = spec.k * grid.extent() / std::numbers::pi;
            if (!spec.allow_nonperiodic && std::abs(harmonic - std::round(harmonic)) > 1e-9) {
                throw std::invalid_argument(
                    "plane wave: k must be an integer multiple of pi/L to be grid-periodic");
            }
            break;
        }
    }
}

ComplexField2D lg_field(const ModeSpec& spec, const GridSpec& grid) {
    ModeSpec s = spec;
    s.kind = ModeKind::LG;
    validate(s, grid);
    ComplexField2D f(grid);
    const int n = grid.n();
    for (int iy = 0; iy < n; ++iy) {
        const double y = grid.coord(iy);
        for (int ix = 0; ix < n; ++ix) f.at(ix, iy) = lg_value(s, grid.coord(ix), y);
    }
    return f;
}

ComplexField2D blocked_gaussian(const ModeSpec& spec, const GridSpec& grid) {
    ModeSpec s = spec;
    s.kind = ModeKind::BlockedGaussian;
    s.p = 0;
    s.m = 0;
    validate(s, grid);
    ComplexField2D f(grid);
    const int n = grid.n();
    const double rb2 = s.block_radius * s.block_radius;
    for (int iy = 0; iy < n; ++iy) {
        const double y = grid.coord(iy);
        for (int ix = 0; ix < n; ++ix) {
            const double x = grid.coord(ix);
            f.at(ix, iy) = (x * x + y * y < rb2) ? cplx{} : lg_value(s, x, y);
        }
    }
    return f;
}

ComplexField2D plane_wave(const ModeSpec& spec, const GridSpec& grid) {
    ModeSpec s = spec;
    s.kind = ModeKind::PlaneWave;
    validate(s, grid);
    ComplexField2D f(grid);
    const int n = grid.n();
    std::vector<cplx> row(n);
    for (int ix = 0; ix < n; ++ix) row[ix] = s.amp * std::polar(1.0, -s.k * grid.coord(ix));
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) f.at(ix, iy) = row[ix];
    }
    return f;
}

ComplexField2D make_mode(const ModeSpec& spec, const GridSpec& grid) {
    switch (spec.kind) {
        case ModeKind::LG: return lg_field(spec, grid);
        case ModeKind::PlaneWave: return plane_wave(spec, grid);
        case ModeKind::BlockedGaussian: return blocked_gaussian(spec, grid);
    }
    throw std::invalid_argument("mode: unknown kind");
}

}  // namespace vortexdiff
