#pragma once

#include "vortexdiff/analytic.hpp"
#include "vortexdiff/grid.hpp"

namespace vortexdiff {

enum class Scheme { Spectral, FdExplicit, Kernel };

/// Periodic wraps the window onto a torus. Open zero-pads to twice the
/// window, so contained fields evolve as on the infinite plane and mass that
/// leaves the window is dropped.
enum class Boundary { Periodic, Open };

struct SolverConfig {
    Scheme scheme = Scheme::Spectral;
    Boundary boundary = Boundary::Periodic;
    double dt = 0.0;  // FD only; 0 selects the largest stable uniform step
    double cfl_safety = 0.9;
};

/// Dispersion coefficient of the unitary evolution exp(-i beta k^2 t).
struct QuantumParams {
    double beta = 1.0;
};

const char* to_string(Scheme scheme);
const char* to_string(Boundary boundary);

/// Worker threads for FFTs and stencil sweeps. Results are deterministic for
/// a fixed count.
void set_threads(int threads);
int threads();

/// Exact heat-equation step: every Fourier component times exp(-D k^2 t).
ComplexField2D diffuse_spectral(const ComplexField2D& f, double D, double t,
                                Boundary boundary = Boundary::Periodic);
RealField2D diffuse_spectral(const RealField2D& f, double D, double t,
                             Boundary boundary = Boundary::Periodic);

/// Largest step the explicit stencil accepts: cfl_safety * dx^2 / (4 D).
double fd_max_dt(const GridSpec& grid, double D, double cfl_safety);

/**
 * Forward-Euler, 5-point Laplacian, periodic wrap.
 *
 * With cfg.dt == 0 the run uses ceil(t/max_dt) equal steps. With an explicit
 * dt it takes floor(t/dt) full steps plus one shorter final step for the
 * remainder. Throws CflViolation before computing anything if dt is too large.
 */
ComplexField2D diffuse_fd(const ComplexField2D& f, double D, double t, const SolverConfig& cfg);

/// Direct convolution with the sampled heat kernel exp(-r^2/4Dt)/(4 pi D t)
/// times dx^2, zero outside the window. The kernel is cut where it drops
/// below 1e-16 of its peak. Rejects D*t == 0.
ComplexField2D diffuse_kernel(const ComplexField2D& f, double D, double t);

/// Scheme dispatch. Spectral honors cfg.boundary; FD is always periodic and
/// the kernel always open. t == 0 returns the input.
ComplexField2D diffuse(const ComplexField2D& f, double D, double t, const SolverConfig& cfg);
RealField2D diffuse(const RealField2D& f, double D, double t, const SolverConfig& cfg);

/// Unitary free evolution exp(-i beta k^2 t) on the periodic grid. t may be negative.
ComplexField2D evolve_quantum(const ComplexField2D& f, const QuantumParams& q, double t);

/// Echo reversal of evolve_quantum(f, q, t): conjugate, evolve forward by t,
/// conjugate again.
ComplexField2D echo_reverse(const ComplexField2D& f, const QuantumParams& q, double t);

/// log10 of exp(D k_max^2 t) with k_max = pi/dx, the gain an inverse heat
/// step would apply to the highest single-axis wavenumber.
double classical_reversal_log10_amplification(const GridSpec& grid, double D, double t);

/// Classical diffusion has no bounded inverse. Returns f unchanged when
/// D*t == 0; otherwise throws IrreversibleError without computing anything.
ComplexField2D echo_reverse_classical(const ComplexField2D& f, double D, double t);

/**
 * Propagate both density-matrix fields by the configured classical scheme.
 * rho22 stays real; roundoff-level negatives (<= 1e-12 of the peak) are set
 * to zero and larger ones raise NumericError.
 */
StateSnapshot evolve_snapshot(const StateSnapshot& s, double D, double t, const SolverConfig& cfg);

}  // namespace vortexdiff
