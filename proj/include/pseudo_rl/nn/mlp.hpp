#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pseudo_rl/core/matrix.hpp"
#include "pseudo_rl/core/rng.hpp"

namespace pseudo_rl {

enum class Activation { relu, none };

struct DenseLayer {
    Matrix weight; // in x out
    Matrix bias;   // 1 x out
    Activation activation = Activation::relu;

    std::size_t in_dim() const noexcept { return weight.rows(); }
    std::size_t out_dim() const noexcept { return weight.cols(); }

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Fully connected network. Gradients use the same type.
struct MlpParams {
    std::vector<DenseLayer> layers;

    std::size_t input_dim() const { return layers.front().in_dim(); }
    std::size_t output_dim() const { return layers.back().out_dim(); }
    std::size_t parameter_count() const;

    /// Same layer shapes, all entries zero.
    MlpParams zeros_like() const;

    /// Weight/bias matrices in layer order: w0, b0, w1, b1, ...
    std::vector<Matrix*> tensors();
    std::vector<const Matrix*> tensors() const;

    /// Throws ConfigError naming the first layer whose input does not match
    /// the previous layer's output.
    void validate() const;

    friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

/// Human-readable name for tensor index i of MlpParams::tensors().
std::string tensor_name(std::size_t index);

/// Hidden layers use ReLU, the output layer is linear. With hidden_width 256
/// and two hidden layers this is the three-layer default network. Weights are
/// uniform in +-1/sqrt(fan_in), biases zero.
MlpParams make_mlp(std::size_t input_dim, std::size_t hidden_width, std::size_t hidden_layers,
                   std::size_t output_dim, Rng& rng);

/// Element [0] is the input, element [k+1] is the output of layer k.
using Activations = std::vector<Matrix>;

Activations mlp_forward(const MlpParams& params, const Matrix& input);

/// Convenience: output only.
Matrix mlp_output(const MlpParams& params, const Matrix& input);

struct MlpGradients {
    MlpParams params;
    Matrix input;
};

/// Backpropagates `upstream` (d loss / d output) through the network.
/// When `need_input_grad` is false the input gradient is left empty.
MlpGradients mlp_backward(const MlpParams& params, const Activations& activations,
                          const Matrix& upstream, bool need_input_grad = true);

/// Flattened parameter vector in tensors() order, and its inverse.
std::vector<double> flatten(const MlpParams& params);
void unflatten(std::span<const double> flat, MlpParams& params);

/// target <- (1 - tau) * target + tau * online, elementwise.
void polyak_update(MlpParams& target, const MlpParams& online, double tau);
void polyak_update(Matrix& target, const Matrix& online, double tau);

} // namespace pseudo_rl
