#include "vortexdiff/solvers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "fft.hpp"
#include "vortexdiff/errors.hpp"

namespace vortexdiff {

namespace {

std::atomic<int> g_threads{1};

// Splits [0, n) into contiguous row blocks, one per worker.
void parallel_rows(int n, const std::function<void(int, int)>& body) {
    const int workers = std::clamp(g_threads.load(), 1, n);
    if (workers == 1) {
        body(0, n);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        const int begin = n * w / workers;
        const int end = n * (w + 1) / workers;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
}

// Multiplies the spectrum by factor(kx^2) * factor(ky^2); every multiplier used
// here is separable.
ComplexField2D apply_multiplier(const ComplexField2D& f, Boundary boundary,
                                const std::function<cplx(double)>& axis_factor) {
    const GridSpec& g = f.grid;
    const int n = g.n();
    const int size = boundary == Boundary::Open ? 2 * n : n;
    const int offset = boundary == Boundary::Open ? n / 2 : 0;

    std::vector<cplx> work(static_cast<std::size_t>(size) * size);
    for (int iy = 0; iy < n; ++iy) {
        std::copy_n(&f.values[g.index(0, iy)], n,
                    &work[static_cast<std::size_t>(iy + offset) * size + offset]);
    }

    detail::fft2_forward(work, size);
    const std::vector<double> k = detail::wavenumbers(size, g.dx());
    std::vector<cplx> factor(size);
    for (int j = 0; j < size; ++j) factor[j] = axis_factor(k[j] * k[j]);
    for (int ky = 0; ky < size; ++ky) {
        cplx* row = &work[static_cast<std::size_t>(ky) * size];
        for (int kx = 0; kx < size; ++kx) row[kx] *= factor[kx] * factor[ky];
    }
    detail::fft2_inverse(work, size);

    ComplexField2D out(g);
    for (int iy = 0; iy < n; ++iy) {
        std::copy_n(&work[static_cast<std::size_t>(iy + offset) * size + offset], n,
                    &out.values[g.index(0, iy)]);
    }
    return out;
}

ComplexField2D to_complex(const RealField2D& f) {
    ComplexField2D out(f.grid);
    std::copy(f.values.begin(), f.values.end(), out.values.begin());
    return out;
}

RealField2D real_part(const ComplexField2D& f) {
    RealField2D out(f.grid);
    std::transform(f.values.begin(), f.values.end(), out.values.begin(),
                   [](const cplx& z) { return z.real(); });
    return out;
}

void check_time(double D, double t) {
    if (!(D >= 0.0) || !std::isfinite(D)) throw std::invalid_argument("diffusion: D must be >= 0");
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("diffusion: t must be >= 0");
}

}  // namespace

const char* to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::Spectral: return "SPECTRAL";
        case Scheme::FdExplicit: return "FD_EXPLICIT";
        case Scheme::Kernel: return "KERNEL";
    }
    return "?";
}

const char* to_string(Boundary boundary) {
    return boundary == Boundary::Open ? "OPEN" : "PERIODIC";
}

void set_threads(int threads) {
    const int t = threads < 1 ? 1 : threads;
    g_threads = t;
    detail::set_fft_threads(t);
}

int threads() { return g_threads.load(); }

ComplexField2D diffuse_spectral(const ComplexField2D& f, double D, double t, Boundary boundary) {
    check_time(D, t);
    if (D == 0.0 || t == 0.0) return f;
    const double a = D * t;
    return apply_multiplier(f, boundary, [a](double k2) { return cplx(std::exp(-a * k2), 0.0); });
}

RealField2D diffuse_spectral(const RealField2D& f, double D, double t, Boundary boundary) {
    return real_part(diffuse_spectral(to_complex(f), D, t, boundary));
}

double fd_max_dt(const GridSpec& grid, double D, double cfl_safety) {
    const double dx = grid.dx();
    return cfl_safety * dx * dx / (4.0 * D);
}

ComplexField2D diffuse_fd(const ComplexField2D& f, double D, double t, const SolverConfig& cfg) {
    check_time(D, t);
    if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0)) {
        throw std::invalid_argument("solver: cfl_safety must lie in (0, 1]");
    }
    if (cfg.dt < 0.0) throw std::invalid_argument("solver: dt must be >= 0");
    if (D == 0.0 || t == 0.0) return f;

    const GridSpec& g = f.grid;
    const double max_dt = fd_max_dt(g, D, cfg.cfl_safety);
    double step = cfg.dt;
    long full_steps = 0;
    double last = 0.0;
    if (step == 0.0) {
        full_steps = static_cast<long>(std::ceil(t / max_dt));
        step = t / full_steps;
    } else {
        if (step > max_dt) throw CflViolation(step, max_dt);
        full_steps = static_cast<long>(std::floor(t / step));
        last = t - full_steps * step;
        // Remainders at rounding level are not worth a step.
        if (last <= 1e-12 * step) last = 0.0;
    }

    const int n = g.n();
    const double dx = g.dx();
    ComplexField2D cur = f;
    ComplexField2D next(g);
    auto sweep = [&](double h) {
        const double c = D * h / (dx * dx);
        parallel_rows(n, [&](int begin, int end) {
            for (int iy = begin; iy < end; ++iy) {
                const int up = iy + 1 == n ? 0 : iy + 1;
                const int down = iy == 0 ? n - 1 : iy - 1;
                const cplx* row = &cur.values[g.index(0, iy)];
                const cplx* rup = &cur.values[g.index(0, up)];
                const cplx* rdn = &cur.values[g.index(0, down)];
                cplx* out = &next.values[g.index(0, iy)];
                for (int ix = 0; ix < n; ++ix) {
                    const int right = ix + 1 == n ? 0 : ix + 1;
                    const int left = ix == 0 ? n - 1 : ix - 1;
                    const cplx lap = row[right] + row[left] + rup[ix] + rdn[ix] - 4.0 * row[ix];
                    out[ix] = row[ix] + c * lap;
                }
            }
        });
        std::swap(cur.values, next.values);
    };
    for (long s = 0; s < full_steps; ++s) sweep(step);
    if (last > 0.0) sweep(last);
    return cur;
}

ComplexField2D diffuse_kernel(const ComplexField2D& f, double D, double t) {
    check_time(D, t);
    if (D * t == 0.0) throw std::invalid_argument("diffuse_kernel: D*t must be positive (t = 0 is the identity)");

    const GridSpec& g = f.grid;
    const int n = g.n();
    const double dx = g.dx();
    const double four_dt = 4.0 * D * t;
    // G(r) < 1e-16 G(0) beyond r^2 = 4Dt ln(1e16).
    const double cutoff = std::sqrt(four_dt * 16.0 * std::numbers::ln10);
    const int reach = std::min(n - 1, static_cast<int>(std::floor(cutoff / dx)));

    // exp(-r^2/4Dt)/(4 pi D t) = g(x) g(y) with g(x) = exp(-x^2/4Dt)/sqrt(4 pi D t).
    std::vector<double> taps(2 * reach + 1);
    const double norm = dx / std::sqrt(std::numbers::pi * four_dt);
    for (int d = -reach; d <= reach; ++d) {
        const double x = d * dx;
        taps[d + reach] = norm * std::exp(-x * x / four_dt);
    }

    ComplexField2D pass(g);
    parallel_rows(n, [&](int begin, int end) {
        for (int iy = begin; iy < end; ++iy) {
            for (int ix = 0; ix < n; ++ix) {
                const int lo = std::max(-reach, -ix);
                const int hi = std::min(reach, n - 1 - ix);
                cplx acc{};
                for (int d = lo; d <= hi; ++d) acc += taps[d + reach] * f.at(ix + d, iy);
                pass.at(ix, iy) = acc;
            }
        }
    });
    ComplexField2D out(g);
    parallel_rows(n, [&](int begin, int end) {
        for (int iy = begin; iy < end; ++iy) {
            const int lo = std::max(-reach, -iy);
            const int hi = std::min(reach, n - 1 - iy);
            cplx* dst = &out.values[g.index(0, iy)];
            for (int d = lo; d <= hi; ++d) {
                const double w = taps[d + reach];
                const cplx* src = &pass.values[g.index(0, iy + d)];
                for (int ix = 0; ix < n; ++ix) dst[ix] += w * src[ix];
            }
        }
    });
    return out;
}

ComplexField2D diffuse(const ComplexField2D& f, double D, double t, const SolverConfig& cfg) {
    check_time(D, t);
    if (D == 0.0 || t == 0.0) return f;
    switch (cfg.scheme) {
        case Scheme::Spectral: return diffuse_spectral(f, D, t, cfg.boundary);
        case Scheme::FdExplicit: return diffuse_fd(f, D, t, cfg);
        case Scheme::Kernel: return diffuse_kernel(f, D, t);
    }
    throw std::invalid_argument("diffuse: unknown scheme");
}

RealField2D diffuse(const RealField2D& f, double D, double t, const SolverConfig& cfg) {
    return real_part(diffuse(to_complex(f), D, t, cfg));
}

ComplexField2D evolve_quantum(const ComplexField2D& f, const QuantumParams& q, double t) {
    if (!std::isfinite(q.beta) || !std::isfinite(t)) {
        throw std::invalid_argument("evolve_quantum: beta and t must be finite");
    }
    if (q.beta == 0.0 || t == 0.0) return f;
    const double a = q.beta * t;
    return apply_multiplier(f, Boundary::Periodic, [a](double k2) { return std::polar(1.0, -a * k2); });
}

ComplexField2D echo_reverse(const ComplexField2D& f, const QuantumParams& q, double t) {
    ComplexField2D flipped = f;
    for (auto& z : flipped.values) z = std::conj(z);
    ComplexField2D out = evolve_quantum(flipped, q, t);
    for (auto& z : out.values) z = std::conj(z);
    return out;
}

double classical_reversal_log10_amplification(const GridSpec& grid, double D, double t) {
    const double kmax = std::numbers::pi / grid.dx();
    return D * kmax * kmax * t / std::numbers::ln10;
}

ComplexField2D echo_reverse_classical(const ComplexField2D& f, double D, double t) {
    check_time(D, t);
    if (D * t == 0.0) return f;
    throw IrreversibleError(classical_reversal_log10_amplification(f.grid, D, t));
}

StateSnapshot evolve_snapshot(const StateSnapshot& s, double D, double t, const SolverConfig& cfg) {
    StateSnapshot out{s.time + t, diffuse(s.rho12, D, t, cfg), diffuse(s.rho22, D, t, cfg), s.rho11};
    double peak = 0.0;
    for (double v : out.rho22.values) peak = std::max(peak, v);
    const double floor = -1e-12 * peak;
    for (double& v : out.rho22.values) {
        if (v < 0.0) {
            if (v < floor) {
                throw NumericError(
                    "evolve_snapshot: rho22 lost positivity (diffusion length below grid resolution)");
            }
            v = 0.0;
        }
    }
    check_physical(out);
    return out;
}

}  // namespace vortexdiff
