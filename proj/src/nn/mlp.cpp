#include "pseudo_rl/nn/mlp.hpp"

#include <cmath>

#include "pseudo_rl/nn/kernels.hpp"

namespace pseudo_rl {

std::size_t MlpParams::parameter_count() const
{
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weight.size() + l.bias.size();
    return n;
}

MlpParams MlpParams::zeros_like() const
{
    MlpParams z;
    z.layers.reserve(layers.size());
    for (const auto& l : layers) {
        z.layers.push_back({Matrix(l.weight.rows(), l.weight.cols()),
                            Matrix(l.bias.rows(), l.bias.cols()), l.activation});
    }
    return z;
}

std::vector<Matrix*> MlpParams::tensors()
{
    std::vector<Matrix*> out;
    out.reserve(2 * layers.size());
    for (auto& l : layers) {
        out.push_back(&l.weight);
        out.push_back(&l.bias);
    }
    return out;
}

std::vector<const Matrix*> MlpParams::tensors() const
{
    std::vector<const Matrix*> out;
    out.reserve(2 * layers.size());
    for (const auto& l : layers) {
        out.push_back(&l.weight);
        out.push_back(&l.bias);
    }
    return out;
}

void MlpParams::validate() const
{
    if (layers.empty()) throw ConfigError("MlpParams: network has no layers");
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const auto& l = layers[k];
        if (l.bias.rows() != 1 || l.bias.cols() != l.out_dim()) {
            throw ConfigError("MlpParams: layer " + std::to_string(k) + " bias shape " +
                              l.bias.shape_string() + " does not match weight " +
                              l.weight.shape_string());
        }
        if (k > 0 && layers[k - 1].out_dim() != l.in_dim()) {
            throw ConfigError("MlpParams: layer " + std::to_string(k) + " expects input dim " +
                              std::to_string(l.in_dim()) + " but layer " +
                              std::to_string(k - 1) + " outputs " +
                              std::to_string(layers[k - 1].out_dim()));
        }
    }
}

std::string tensor_name(std::size_t index)
{
    return "layer " + std::to_string(index / 2) + (index % 2 == 0 ? " weight" : " bias");
}

MlpParams make_mlp(std::size_t input_dim, std::size_t hidden_width, std::size_t hidden_layers,
                   std::size_t output_dim, Rng& rng)
{
    MlpParams p;
    std::size_t fan_in = input_dim;
    for (std::size_t k = 0; k <= hidden_layers; ++k) {
        const bool last = k == hidden_layers;
        const std::size_t fan_out = last ? output_dim : hidden_width;
        DenseLayer layer{Matrix(fan_in, fan_out), Matrix(1, fan_out),
                         last ? Activation::none : Activation::relu};
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& w : layer.weight.values()) w = rng.uniform(-bound, bound);
        p.layers.push_back(std::move(layer));
        fan_in = fan_out;
    }
    return p;
}

Activations mlp_forward(const MlpParams& params, const Matrix& input)
{
    if (params.layers.empty()) throw ConfigError("mlp_forward: network has no layers");
    Activations acts;
    acts.reserve(params.layers.size() + 1);
    acts.push_back(input);
    for (std::size_t k = 0; k < params.layers.size(); ++k) {
        const auto& layer = params.layers[k];
        const Matrix& x = acts.back();
        if (x.cols() != layer.in_dim()) {
            throw ConfigError("mlp_forward: layer " + std::to_string(k) + " expects input dim " +
                              std::to_string(layer.in_dim()) + ", got " +
                              std::to_string(x.cols()));
        }
        Matrix y;
        kernels::dense_forward(x, layer.weight, layer.bias, y);
        if (layer.activation == Activation::relu) kernels::relu_inplace(y);
        acts.push_back(std::move(y));
    }
    return acts;
}

Matrix mlp_output(const MlpParams& params, const Matrix& input)
{
    return std::move(mlp_forward(params, input).back());
}

MlpGradients mlp_backward(const MlpParams& params, const Activations& activations,
                          const Matrix& upstream, bool need_input_grad)
{
    const std::size_t depth = params.layers.size();
    if (activations.size() != depth + 1) {
        throw IntegrityError("mlp_backward: " + std::to_string(activations.size()) +
                             " activations for a " + std::to_string(depth) + "-layer network");
    }
    if (!upstream.same_shape(activations.back())) {
        throw IntegrityError("mlp_backward: upstream gradient " + upstream.shape_string() +
                             " does not match output " + activations.back().shape_string());
    }
    MlpGradients grads{params.zeros_like(), Matrix()};
    Matrix delta = upstream;
    for (std::size_t k = depth; k-- > 0;) {
        const auto& layer = params.layers[k];
        if (activations[k].cols() != layer.in_dim()) {
            throw IntegrityError("mlp_backward: activation " + std::to_string(k) +
                                 " inconsistent with layer shape");
        }
        if (layer.activation == Activation::relu) {
            kernels::relu_backward_inplace(activations[k + 1], delta);
        }
        auto& g = grads.params.layers[k];
        kernels::dense_backward_params(activations[k], delta, g.weight, g.bias);
        if (k > 0 || need_input_grad) {
            Matrix next;
            kernels::dense_backward_input(delta, layer.weight, next);
            delta = std::move(next);
        }
    }
    if (need_input_grad) grads.input = std::move(delta);
    return grads;
}

std::vector<double> flatten(const MlpParams& params)
{
    std::vector<double> flat;
    flat.reserve(params.parameter_count());
    for (const Matrix* t : params.tensors()) flat.insert(flat.end(), t->values().begin(), t->values().end());
    return flat;
}

void unflatten(std::span<const double> flat, MlpParams& params)
{
    if (flat.size() != params.parameter_count()) {
        throw ConfigError("unflatten: expected " + std::to_string(params.parameter_count()) +
                          " values, got " + std::to_string(flat.size()));
    }
    std::size_t pos = 0;
    for (Matrix* t : params.tensors()) {
        for (double& v : t->values()) v = flat[pos++];
    }
}

void polyak_update(Matrix& target, const Matrix& online, double tau)
{
    if (!target.same_shape(online)) {
        throw ConfigError("polyak_update: shape mismatch " + target.shape_string() + " vs " +
                          online.shape_string());
    }
    if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("polyak_update: tau outside [0, 1]");
    const double keep = 1.0 - tau;
    auto t = target.values();
    const auto o = online.values();
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = keep * t[i] + tau * o[i];
}

void polyak_update(MlpParams& target, const MlpParams& online, double tau)
{
    if (target.layers.size() != online.layers.size()) {
        throw ConfigError("polyak_update: layer count mismatch");
    }
    auto ts = target.tensors();
    auto os = online.tensors();
    for (std::size_t i = 0; i < ts.size(); ++i) polyak_update(*ts[i], *os[i], tau);
}

} // namespace pseudo_rl
