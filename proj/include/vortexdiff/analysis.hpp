#pragma once

#include <span>
#include <utility>
#include <vector>

#include "vortexdiff/analytic.hpp"
#include "vortexdiff/grid.hpp"

namespace vortexdiff {

/// Coherent-energy ratio l2_norm_sq(f_t) / l2_norm_sq(f_0). This is both the
/// storage fidelity and the forward retrieval efficiency.
double retrieval_efficiency(const ComplexField2D& f_t, const ComplexField2D& f_0);

struct CoherenceFactorField {
    RealField2D values;
    /// Average of f weighted by rho22; 1 when rho22 vanishes everywhere.
    double weighted_mean = 1.0;
};

/// Pointwise (|rho12|^2 + eta) / (rho11 rho22 + eta) with both populations and
/// the coherence scaled by max(rho22) first, so eta is relative to the peak.
CoherenceFactorField coherence_factor_field(const StateSnapshot& s, const CoherenceFactorParams& params);

struct NodeReport {
    double time = 0.0;
    std::vector<double> node_radii;  // ascending; 0 when the core is a node
    bool center_node = false;

    std::size_t off_center_count() const { return node_radii.size() - (center_node ? 1 : 0); }
};

inline constexpr double kDefaultNodeThreshold = 0.02;

/**
 * Radial nodes of a profile.
 *
 * The core counts as a node when |origin sample| < rel_threshold * peak.
 * Off-center nodes sit where the signed radial amplitude (the demodulated
 * azimuthal mean, real part after removing the global phase) changes sign
 * between two lobes that each exceed rel_threshold * peak. The position is
 * the vertex of a parabola through the squared amplitude at three bins, and
 * the vertex amplitude must lie below the threshold.
 */
NodeReport find_radial_nodes(const RadialProfile& prof, double rel_threshold = kDefaultNodeThreshold);

/// rho22 at the origin sample.
double center_intensity(const StateSnapshot& s);

/// Sum of rho22 dx^2.
double total_population(const StateSnapshot& s);

enum class DecayModel { PowerLaw, Exponential };

struct DecayFit {
    DecayModel model = DecayModel::PowerLaw;
    double amplitude = 1.0;
    /// Exponent q of a * s(t)^q, or the rate gamma of a * exp(-gamma t).
    double rate = 0.0;
    double rms_log_residual = 0.0;
    bool preferred = false;
};

const char* to_string(DecayModel model);

/// Log-domain least squares of both decay laws. The power law regresses on
/// s(t) = (w0^2 + 4 D t)/w0^2. Returns {power_law, exponential}; the fit with
/// the lower rms log residual is marked preferred (power law on ties).
std::pair<DecayFit, DecayFit> fit_decay(std::span<const double> times, std::span<const double> values,
                                        double D, double w0);

/// Mean |f| on r < block_radius divided by mean |f| on block_radius <= r < 2*block_radius.
/// Rejects block_radius < 2*dx.
double hole_refill_ratio(const ComplexField2D& f, double block_radius);

/// |f(origin)| divided by the mean |f| on radius <= r < 2*radius. Probes the
/// vortex core itself, which stays dark under diffusion.
double center_refill_ratio(const ComplexField2D& f, double radius);

}  // namespace vortexdiff
