#include "pseudo_rl/nn/adam.hpp"

#include <cmath>
#include <string>

namespace pseudo_rl {

AdamState make_adam_state(std::span<const Matrix* const> params, const AdamConfig& config)
{
    AdamState s;
    s.config = config;
    for (const Matrix* p : params) {
        s.first_moment.emplace_back(p->rows(), p->cols());
        s.second_moment.emplace_back(p->rows(), p->cols());
    }
    return s;
}

AdamState make_adam_state(const MlpParams& params, const AdamConfig& config)
{
    const auto t = params.tensors();
    return make_adam_state(std::span<const Matrix* const>(t), config);
}

namespace {

void adam_step_named(std::span<Matrix* const> params, std::span<const Matrix* const> grads,
                     AdamState& state, bool mlp_names)
{
    if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
        throw ConfigError("adam_step: tensor count mismatch");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const std::string name = mlp_names ? tensor_name(i) : "tensor " + std::to_string(i);
        if (!params[i]->same_shape(*grads[i]) || !params[i]->same_shape(state.first_moment[i])) {
            throw ConfigError("adam_step: shape mismatch at " + name);
        }
        if (!grads[i]->all_finite()) {
            throw NumericError("adam_step: non-finite gradient in " + name);
        }
    }

    const auto& c = state.config;
    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double correction1 = 1.0 - std::pow(c.beta1, t);
    const double correction2 = 1.0 - std::pow(c.beta2, t);

    for (std::size_t i = 0; i < params.size(); ++i) {
        auto p = params[i]->values();
        const auto g = grads[i]->values();
        auto m = state.first_moment[i].values();
        auto v = state.second_moment[i].values();
        for (std::size_t j = 0; j < p.size(); ++j) {
            m[j] = c.beta1 * m[j] + (1.0 - c.beta1) * g[j];
            v[j] = c.beta2 * v[j] + (1.0 - c.beta2) * g[j] * g[j];
            const double m_hat = m[j] / correction1;
            const double v_hat = v[j] / correction2;
            p[j] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
        }
    }
}

} // namespace

void adam_step(std::span<Matrix* const> params, std::span<const Matrix* const> grads,
               AdamState& state)
{
    adam_step_named(params, grads, state, false);
}

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state)
{
    auto p = params.tensors();
    auto g = grads.tensors();
    adam_step_named(p, g, state, true);
}

} // namespace pseudo_rl
