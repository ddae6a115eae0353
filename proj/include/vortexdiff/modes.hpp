#pragma once

#include "vortexdiff/grid.hpp"

namespace vortexdiff {

enum class ModeKind { LG, PlaneWave, BlockedGaussian };

/// Parameters of the stored optical mode.
///
/// `amp` is the complex prefactor in front of the normalized mode (the
/// probe-to-pump coupling ratio); it is carried through but cancels in every
/// fidelity and coherence-factor diagnostic.
struct ModeSpec {
    ModeKind kind = ModeKind::LG;
    int p = 0;
    int m = 0;
    double w0 = 1.0;
    double power = 1.0;
    cplx amp{1.0, 0.0};
    double k = 0.0;             // plane waves only
    double block_radius = 0.0;  // blocked Gaussian only
    bool allow_nonperiodic = false;
};

/// Generalized Laguerre polynomial L_p^alpha(x) by three-term recurrence.
double assoc_laguerre(int p, int alpha, double x);

/// Smallest grid half-width that contains the mode: 4*w0*sqrt(1+|m|+p).
double containment_extent(const ModeSpec& spec);

/// Pointwise LG_p^m value at (x, y); phase exp(-i*m*theta), theta = atan2(y, x).
cplx lg_value(const ModeSpec& spec, double x, double y);

/// Sampled LG_p^m mode normalized so l2_norm_sq == |amp|^2 * power.
ComplexField2D lg_field(const ModeSpec& spec, const GridSpec& grid);

/// Gaussian (p = m = 0) with the disk r < block_radius set to exactly zero.
ComplexField2D blocked_gaussian(const ModeSpec& spec, const GridSpec& grid);

/// amp * exp(-i*k*x). k must be a multiple of pi/L below the Nyquist limit
/// unless spec.allow_nonperiodic is set.
ComplexField2D plane_wave(const ModeSpec& spec, const GridSpec& grid);

/// Dispatches on spec.kind.
ComplexField2D make_mode(const ModeSpec& spec, const GridSpec& grid);

/// Throws std::invalid_argument describing the first violated constraint.
void validate(const ModeSpec& spec, const GridSpec& grid);

const char* to_string(ModeKind kind);

}  // namespace vortexdiff
