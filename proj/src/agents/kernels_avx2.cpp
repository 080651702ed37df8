#include "slicesim/agents/kernels.hpp"

#if defined(SLICESIM_HAVE_AVX2_TU) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace slicesim::agents::kernels {
namespace {

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc0 = _mm256_add_pd(acc0, acc1);
    __m128d lo = _mm256_castpd256_pd128(acc0);
    __m128d hi = _mm256_extractf128_pd(acc0, 1);
    lo = _mm_add_pd(lo, hi);
    double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void relu_avx2(double* x, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        // keep v where v > 0 (NaN compares false and becomes 0, as in scalar)
        __m256d keep = _mm256_cmp_pd(v, zero, _CMP_GT_OQ);
        _mm256_storeu_pd(x + i, _mm256_and_pd(v, keep));
    }
    for (; i < n; ++i)
        if (!(x[i] > 0.0)) x[i] = 0.0;
}

void relu_mask_avx2(const double* act, double* grad, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d keep = _mm256_cmp_pd(_mm256_loadu_pd(act + i), zero, _CMP_GT_OQ);
        _mm256_storeu_pd(grad + i, _mm256_and_pd(_mm256_loadu_pd(grad + i), keep));
    }
    for (; i < n; ++i)
        if (!(act[i] > 0.0)) grad[i] = 0.0;
}

void momentum_step_avx2(double* w, double* v, const double* g, double lr, double momentum,
                        std::size_t n) {
    const __m256d vm = _mm256_set1_pd(momentum);
    const __m256d vlr = _mm256_set1_pd(-lr);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vel = _mm256_fmadd_pd(vm, _mm256_loadu_pd(v + i), _mm256_loadu_pd(g + i));
        _mm256_storeu_pd(v + i, vel);
        _mm256_storeu_pd(w + i, _mm256_fmadd_pd(vlr, vel, _mm256_loadu_pd(w + i)));
    }
    for (; i < n; ++i) {
        v[i] = momentum * v[i] + g[i];
        w[i] -= lr * v[i];
    }
}

} // namespace

const KernelTable* avx2_table() {
    static const KernelTable table{"avx2",    dot_avx2,       axpy_avx2,
                                   relu_avx2, relu_mask_avx2, momentum_step_avx2};
    return &table;
}

} // namespace slicesim::agents::kernels

#else

namespace slicesim::agents::kernels {
const KernelTable* avx2_table() { return nullptr; }
} // namespace slicesim::agents::kernels

#endif
