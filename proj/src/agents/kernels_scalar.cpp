#include "slicesim/agents/kernels.hpp"

namespace slicesim::agents::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void relu_scalar(double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (!(x[i] > 0.0)) x[i] = 0.0;
}

void relu_mask_scalar(const double* act, double* grad, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (!(act[i] > 0.0)) grad[i] = 0.0;
}

void momentum_step_scalar(double* w, double* v, const double* g, double lr, double momentum,
                          std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = momentum * v[i] + g[i];
        w[i] -= lr * v[i];
    }
}

} // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{"scalar",    dot_scalar,       axpy_scalar,
                                   relu_scalar, relu_mask_scalar, momentum_step_scalar};
    return table;
}

} // namespace slicesim::agents::kernels
