#include "vortexdiff/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vortexdiff {

GridSpec make_grid(int n, double extent) {
    if (n < 8) {
        throw std::invalid_argument("grid: n must be >= 8, got " + std::to_string(n));
    }
    if (n % 2 != 0) {
        throw std::invalid_argument("grid: n must be even, got " + std::to_string(n));
    }
    if (!(extent > 0.0) || !std::isfinite(extent)) {
        throw std::invalid_argument("grid: extent must be positive and finite");
    }
    return GridSpec(n, extent);
}

std::vector<double> GridSpec::coords() const {
    std::vector<double> c(n_);
    for (int i = 0; i < n_; ++i) c[i] = coord(i);
    return c;
}

ComplexField2D::ComplexField2D(const GridSpec& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) {
        throw std::invalid_argument("field: value count does not match grid");
    }
}

RealField2D::RealField2D(const GridSpec& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) {
        throw std::invalid_argument("field: value count does not match grid");
    }
}

double stable_sum(std::span<const double> xs) {
    double sum = 0.0;
    double comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

double l2_norm_sq(const ComplexField2D& f) {
    std::vector<double> mags(f.values.size());
    std::transform(f.values.begin(), f.values.end(), mags.begin(),
                   [](const cplx& z) { return std::norm(z); });
    const double dx = f.grid.dx();
    return stable_sum(mags) * dx * dx;
}

double integrate(const RealField2D& g) {
    const double dx = g.grid.dx();
    return stable_sum(g.values) * dx * dx;
}

bool all_finite(const ComplexField2D& f) {
    return std::all_of(f.values.begin(), f.values.end(), [](const cplx& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

bool all_finite(const RealField2D& g) {
    return std::all_of(g.values.begin(), g.values.end(), [](double v) { return std::isfinite(v); });
}

RealField2D intensity(const ComplexField2D& f) {
    RealField2D out(f.grid);
    std::transform(f.values.begin(), f.values.end(), out.values.begin(),
                   [](const cplx& z) { return std::norm(z); });
    return out;
}

RadialProfile azimuthal_average(const ComplexField2D& f, int nbins) {
    if (nbins < 4) {
        throw std::invalid_argument("azimuthal_average: nbins must be >= 4");
    }
    const GridSpec& g = f.grid;
    const int n = g.n();
    const double dr = g.extent() / nbins;
    constexpr int kOrders = 2 * kMaxWindingSearch + 1;

    std::vector<int> counts(nbins, 0);
    std::vector<double> rsum(nbins, 0.0);
    std::vector<cplx> asum(nbins);
    std::vector<double> isum(nbins, 0.0);
    // Per-bin sums of f*exp(i*m*theta) for every searched order m.
    std::vector<cplx> msum(static_cast<std::size_t>(nbins) * kOrders);

    for (int iy = 0; iy < n; ++iy) {
        const double y = g.coord(iy);
        for (int ix = 0; ix < n; ++ix) {
            const double x = g.coord(ix);
            const double r = std::hypot(x, y);
            if (r >= g.extent()) continue;
            const int b = std::min(static_cast<int>(r / dr), nbins - 1);
            const cplx v = f.at(ix, iy);
            counts[b] += 1;
            rsum[b] += r;
            asum[b] += v;
            isum[b] += std::norm(v);

            // exp(i*theta) powers; theta is undefined at the origin, where any
            // m != 0 mode vanishes anyway.
            const cplx unit = r > 0.0 ? cplx(x / r, y / r) : cplx(1.0, 0.0);
            cplx* row = &msum[static_cast<std::size_t>(b) * kOrders];
            row[kMaxWindingSearch] += v;
            cplx up = v;
            cplx down = v;
            for (int m = 1; m <= kMaxWindingSearch; ++m) {
                up *= unit;
                down *= std::conj(unit);
                row[kMaxWindingSearch + m] += up;
                row[kMaxWindingSearch - m] += down;
            }
        }
    }

    // Dominant order: the demodulation that captures the most energy.
    int best = 0;
    double best_energy = -1.0;
    for (int m = -kMaxWindingSearch; m <= kMaxWindingSearch; ++m) {
        double e = 0.0;
        for (int b = 0; b < nbins; ++b) {
            if (counts[b] == 0) continue;
            const cplx mean = msum[static_cast<std::size_t>(b) * kOrders + kMaxWindingSearch + m] /
                              static_cast<double>(counts[b]);
            e += counts[b] * std::norm(mean);
        }
        // Ties resolve toward the smallest |m|, then positive m.
        if (e > best_energy * (1.0 + 1e-12)) {
            best_energy = e;
            best = m;
        }
    }

    RadialProfile prof;
    prof.bin_width = dr;
    prof.winding = best;
    prof.origin_amplitude = f.origin();
    for (int b = 0; b < nbins; ++b) {
        if (counts[b] == 0) continue;
        const double c = counts[b];
        prof.radii.push_back((b + 0.5) * dr);
        prof.mean_radius.push_back(rsum[b] / c);
        prof.mean_amplitude.push_back(asum[b] / c);
        prof.mean_intensity.push_back(isum[b] / c);
        prof.counts.push_back(counts[b]);
        prof.demodulated.push_back(msum[static_cast<std::size_t>(b) * kOrders + kMaxWindingSearch + best] / c);
    }
    return prof;
}

}  // namespace vortexdiff
