#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense-vector kernels used by the Q-network. Every kernel has a scalar
// reference implementation; an AVX2/FMA variant is used when the CPU
// supports it. Results of the two agree to rounding (FMA and the 4-lane
// reduction order change the last bits), not bit-for-bit.

namespace slicesim::agents::kernels {

struct KernelTable {
    const char* name;
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // x = max(x, 0)
    void (*relu)(double* x, std::size_t n);
    // grad[i] = 0 where activation[i] <= 0
    void (*relu_mask)(const double* activation, double* grad, std::size_t n);
    // v = momentum * v + g; w -= lr * v
    void (*momentum_step)(double* w, double* v, const double* g, double lr, double momentum,
                          std::size_t n);
};

const KernelTable& scalar_table();

/// nullptr when the AVX2 translation unit was not built.
const KernelTable* avx2_table();

bool cpu_has_avx2_fma();

/// The table selected for this process: AVX2 when available unless the
/// environment variable SLICESIM_KERNELS is set to "scalar".
const KernelTable& active();

/// Force a table by name ("scalar" or "avx2"); returns false if unavailable.
bool select(std::string_view name);

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

} // namespace slicesim::agents::kernels
