#pragma once

#include <vector>

#include "vortexdiff/grid.hpp"
#include "vortexdiff/modes.hpp"

namespace vortexdiff {

/// Diffusion coefficient (length^2/time) and strictly ascending evaluation times.
struct DiffusionParams {
    double D = 1.0;
    std::vector<double> times;
};

void validate(const DiffusionParams& params);

/**
 * Density-matrix fields at one instant. rho11 is identically 1 and kept as a
 * scalar; rho22 is real and nonnegative on the rho12 grid.
 */
struct StateSnapshot {
    double time = 0.0;
    ComplexField2D rho12;
    RealField2D rho22;
    double rho11 = 1.0;
};

/// Weak-probe initial state: rho12 = mode, rho22 = |rho12|^2, rho11 = 1.
StateSnapshot initial_snapshot(const ComplexField2D& mode);

/// Absolute tolerance of the |rho12|^2 <= rho11*rho22 check, applied after
/// scaling both sides by max(rho22).
inline constexpr double kPhysicalityTolerance = 1e-9;

/// Throws NumericError if rho22 < 0 somewhere or Cauchy-Schwarz is violated.
void check_physical(const StateSnapshot& s);

struct CoherenceFactorParams {
    double eta = 1e-12;
};

void validate(const CoherenceFactorParams& params);

/// s(t) = (w0^2 + 4 D t) / w0^2.
double evolution_factor(double t, double D, double w0);

/// Closed-form coherence of a diffused p = 0 LG mode at polar point (r, theta):
/// amp * s^-(m+1)/2 * A_m(r, sqrt(s) w0) * exp(-i m theta). Rejects p > 0.
cplx coherence_closed_form(double r, double theta, double t, const ModeSpec& spec, double D);

/// Population of a diffused m = 1 vortex.
double population_m1(double r, double t, double w0, double power, double D);

/// Population of a diffused Gaussian.
double population_m0(double r, double t, double w0, double power, double D);

/// F = s(t)^-(m+1).
double fidelity_closed_form(int m, double t, double D, double w0);

/// f = (coh_sq + eta) / (pbb*pcc + eta), clamped to [0, 1] once within the
/// physicality tolerance. Throws std::invalid_argument on negative input.
double coherence_factor(double coh_sq, double pbb, double pcc, double eta);

struct CenterPeak {
    double time;
    double value;
};

/// Time and value of the maximum of rho22(0, t) for the m = 1 vortex.
CenterPeak center_population_peak_m1(double w0, double D, double power);

}  // namespace vortexdiff
