#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

namespace vortexdiff::detail {

namespace {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

struct FftwBuffer {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};
using Buffer = std::unique_ptr<fftw_complex, FftwBuffer>;

Buffer allocate(std::size_t count) {
    return Buffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count)));
}

// FFTW planning is not thread-safe; execution with new arrays is.
std::mutex g_plan_mutex;
int g_threads = 1;
bool g_threads_initialized = false;

const PlanPair& plans_for(int n) {
    static std::map<std::pair<int, int>, PlanPair> cache;
    std::lock_guard lock(g_plan_mutex);
    const auto key = std::make_pair(n, g_threads);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    if (!g_threads_initialized) {
        fftw_init_threads();
        g_threads_initialized = true;
    }
    fftw_plan_with_nthreads(g_threads);
    const std::size_t count = static_cast<std::size_t>(n) * n;
    Buffer scratch = allocate(count);
    // ESTIMATE keeps the chosen algorithm, and so the output bits, reproducible.
    PlanPair pp;
    pp.forward = fftw_plan_dft_2d(n, n, scratch.get(), scratch.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    pp.inverse = fftw_plan_dft_2d(n, n, scratch.get(), scratch.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
    return cache.emplace(key, pp).first->second;
}

void execute(fftw_plan plan, std::span<cplx> data, int n, double scale) {
    const std::size_t count = static_cast<std::size_t>(n) * n;
    Buffer buf = allocate(count);
    auto* z = reinterpret_cast<cplx*>(buf.get());
    std::copy(data.begin(), data.end(), z);
    fftw_execute_dft(plan, buf.get(), buf.get());
    for (std::size_t i = 0; i < count; ++i) data[i] = z[i] * scale;
}

}  // namespace

void fft2_forward(std::span<cplx> data, int n) { execute(plans_for(n).forward, data, n, 1.0); }

void fft2_inverse(std::span<cplx> data, int n) {
    execute(plans_for(n).inverse, data, n, 1.0 / (static_cast<double>(n) * n));
}

std::vector<double> wavenumbers(int n, double dx) {
    std::vector<double> k(n);
    const double dk = 2.0 * std::numbers::pi / (n * dx);
    for (int j = 0; j < n; ++j) k[j] = (j < n / 2 ? j : j - n) * dk;
    return k;
}

void set_fft_threads(int threads) {
    std::lock_guard lock(g_plan_mutex);
    g_threads = threads < 1 ? 1 : threads;
}

}  // namespace vortexdiff::detail
