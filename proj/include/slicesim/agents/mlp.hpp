#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "slicesim/sim/rng.hpp"

namespace slicesim::agents {

/// Fully connected network with ReLU hidden layers and a linear output.
/// All weights and biases live in one flat array: for each layer, the
/// row-major (out x in) weight matrix followed by the bias vector.
class Mlp {
public:
    /// Activations of one forward pass; reused between calls.
    struct Workspace {
        std::vector<std::vector<double>> activations; // [0] = input
        std::vector<double> delta;
        std::vector<double> delta_prev;
    };

    Mlp() = default;
    /// sizes = {input, hidden..., output}; at least two entries.
    explicit Mlp(std::vector<std::size_t> sizes);

    /// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights and biases.
    void initialize(sim::RngStream& stream);

    std::size_t input_dim() const { return sizes_.front(); }
    std::size_t output_dim() const { return sizes_.back(); }
    std::size_t num_layers() const { return sizes_.size() - 1; }
    const std::vector<std::size_t>& sizes() const { return sizes_; }

    std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
    std::size_t bias_offset(std::size_t layer) const {
        return offsets_[layer] + sizes_[layer] * sizes_[layer + 1];
    }

    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }
    std::size_t param_count() const { return params_.size(); }

    /// Runs the network; the output is ws.activations.back().
    void forward(std::span<const double> input, Workspace& ws) const;

    /// Adds d(loss)/d(params) to `grad` given d(loss)/d(output) for the pass
    /// stored in `ws`.
    void backward(Workspace& ws, std::span<const double> output_grad,
                  std::span<double> grad) const;

private:
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> offsets_;
    std::vector<double> params_;
};

} // namespace slicesim::agents
