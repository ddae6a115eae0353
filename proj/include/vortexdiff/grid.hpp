#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace vortexdiff {

using cplx = std::complex<double>;

/**
 * Square, uniform, cell-vertex grid covering [-L, L) on both axes.
 *
 * Sample i sits at -L + i*dx with dx = 2L/n. Because n is even the origin is
 * an exact sample (index n/2), so a vortex core is observable directly.
 * Construct through make_grid().
 */
class GridSpec {
public:
    int n() const noexcept { return n_; }
    double extent() const noexcept { return extent_; }
    double dx() const noexcept { return 2.0 * extent_ / n_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }

    double coord(int i) const noexcept { return -extent_ + i * dx(); }
    int origin_index() const noexcept { return n_ / 2; }
    std::size_t index(int ix, int iy) const noexcept {
        return static_cast<std::size_t>(iy) * n_ + ix;
    }
    std::vector<double> coords() const;

    bool operator==(const GridSpec&) const = default;

private:
    friend GridSpec make_grid(int n, double extent);
    GridSpec(int n, double extent) : n_(n), extent_(extent) {}

    int n_;
    double extent_;
};

/// Throws std::invalid_argument for odd n, n < 8 or nonpositive extent.
GridSpec make_grid(int n, double extent);

/// Complex samples stored row-major: values[iy*n + ix].
struct ComplexField2D {
    GridSpec grid;
    std::vector<cplx> values;

    explicit ComplexField2D(const GridSpec& g) : grid(g), values(g.size()) {}
    ComplexField2D(const GridSpec& g, std::vector<cplx> v);

    cplx& at(int ix, int iy) { return values[grid.index(ix, iy)]; }
    const cplx& at(int ix, int iy) const { return values[grid.index(ix, iy)]; }
    const cplx& origin() const { return at(grid.origin_index(), grid.origin_index()); }
};

/// Real samples with the same layout as ComplexField2D.
struct RealField2D {
    GridSpec grid;
    std::vector<double> values;

    explicit RealField2D(const GridSpec& g) : grid(g), values(g.size()) {}
    RealField2D(const GridSpec& g, std::vector<double> v);

    double& at(int ix, int iy) { return values[grid.index(ix, iy)]; }
    double at(int ix, int iy) const { return values[grid.index(ix, iy)]; }
    double origin() const { return at(grid.origin_index(), grid.origin_index()); }
};

// Compensated (Neumaier) summation. Used by every spatial reduction.
double stable_sum(std::span<const double> xs);

/// Riemann sum of |f|^2 dx^2.
double l2_norm_sq(const ComplexField2D& f);

/// Riemann sum of g dx^2.
double integrate(const RealField2D& g);

bool all_finite(const ComplexField2D& f);
bool all_finite(const RealField2D& g);

RealField2D intensity(const ComplexField2D& f);

/**
 * Azimuthal reduction of a field on rings of width dr = L/nbins.
 *
 * Bin b holds samples with r in [b*dr, (b+1)*dr); samples with r >= L (the
 * grid corners) are dropped, as are empty bins.
 *
 * Besides the plain complex mean, each bin stores the mean of
 * f*exp(+i*winding*theta) where `winding` is the dominant azimuthal order of
 * the field in the convention f ~ exp(-i*m*theta). For a mode with a single
 * winding this demodulated mean is the (complex-phased) radial function,
 * whose sign changes mark radial nodes.
 */
struct RadialProfile {
    std::vector<double> radii;       // bin centers
    std::vector<double> mean_radius; // mean sample radius per bin
    std::vector<cplx> mean_amplitude;
    std::vector<double> mean_intensity;
    std::vector<int> counts;
    std::vector<cplx> demodulated;
    int winding = 0;
    double bin_width = 0.0;
    cplx origin_amplitude{};

    std::size_t size() const noexcept { return radii.size(); }
    bool empty() const noexcept { return radii.empty(); }
};

// Orders searched when estimating the dominant winding.
inline constexpr int kMaxWindingSearch = 8;

/// Throws std::invalid_argument when nbins < 4.
RadialProfile azimuthal_average(const ComplexField2D& f, int nbins);

}  // namespace vortexdiff
