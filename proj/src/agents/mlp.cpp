#include "slicesim/agents/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "slicesim/agents/kernels.hpp"
#include "slicesim/core/errors.hpp"

namespace slicesim::agents {

Mlp::Mlp(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2) throw InvalidParams("network needs an input and an output layer");
    for (auto s : sizes_)
        if (s == 0) throw InvalidParams("zero-width layer");
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        offsets_.push_back(total);
        total += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
    }
    params_.assign(total, 0.0);
}

void Mlp::initialize(sim::RngStream& stream) {
    for (std::size_t l = 0; l < num_layers(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
        const std::size_t begin = offsets_[l];
        const std::size_t end = bias_offset(l) + sizes_[l + 1];
        for (std::size_t i = begin; i < end; ++i)
            params_[i] = (2.0 * stream.uniform() - 1.0) * bound;
    }
}

void Mlp::forward(std::span<const double> input, Workspace& ws) const {
    if (input.size() != input_dim()) throw InvalidParams("input dimension mismatch");
    const auto& k = kernels::active();
    ws.activations.resize(sizes_.size());
    ws.activations[0].assign(input.begin(), input.end());
    for (std::size_t l = 0; l < num_layers(); ++l) {
        const std::size_t in = sizes_[l], out = sizes_[l + 1];
        const double* w = params_.data() + offsets_[l];
        const double* b = params_.data() + bias_offset(l);
        const auto& a = ws.activations[l];
        auto& z = ws.activations[l + 1];
        z.resize(out);
        for (std::size_t j = 0; j < out; ++j) z[j] = b[j] + k.dot(w + j * in, a.data(), in);
        if (l + 1 < num_layers()) k.relu(z.data(), out);
    }
}

void Mlp::backward(Workspace& ws, std::span<const double> output_grad,
                   std::span<double> grad) const {
    if (output_grad.size() != output_dim() || grad.size() != params_.size())
        throw InvalidParams("gradient buffer shape mismatch");
    const auto& k = kernels::active();
    ws.delta.assign(output_grad.begin(), output_grad.end());
    for (std::size_t l = num_layers(); l-- > 0;) {
        const std::size_t in = sizes_[l], out = sizes_[l + 1];
        const double* w = params_.data() + offsets_[l];
        double* gw = grad.data() + offsets_[l];
        double* gb = grad.data() + bias_offset(l);
        const auto& a = ws.activations[l];
        if (l > 0) ws.delta_prev.assign(in, 0.0);
        for (std::size_t j = 0; j < out; ++j) {
            const double d = ws.delta[j];
            if (d == 0.0) continue;
            k.axpy(d, a.data(), gw + j * in, in);
            gb[j] += d;
            if (l > 0) k.axpy(d, w + j * in, ws.delta_prev.data(), in);
        }
        if (l > 0) {
            k.relu_mask(a.data(), ws.delta_prev.data(), in);
            std::swap(ws.delta, ws.delta_prev);
        }
    }
}

} // namespace slicesim::agents
