#pragma once

// Thin FFTW wrapper shared by the spectral propagators. Not installed.

#include <span>

#include "vortexdiff/grid.hpp"

namespace vortexdiff::detail {

/// Unnormalized forward 2-D DFT of an n x n row-major array, in place.
void fft2_forward(std::span<cplx> data, int n);

/// Inverse 2-D DFT including the 1/n^2 factor, in place.
void fft2_inverse(std::span<cplx> data, int n);

/// Angular wavenumbers 2*pi*j/(n*dx) in FFT order (j = 0..n/2-1, -n/2..-1).
std::vector<double> wavenumbers(int n, double dx);

void set_fft_threads(int threads);

}  // namespace vortexdiff::detail
