#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pseudo_rl/core/matrix.hpp"
#include "pseudo_rl/nn/mlp.hpp"

namespace pseudo_rl {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    friend bool operator==(const AdamConfig&, const AdamConfig&) = default;
};

/// First/second moments shaped like the parameter tensors they track.
struct AdamState {
    AdamConfig config;
    std::vector<Matrix> first_moment;
    std::vector<Matrix> second_moment;
    std::uint64_t step = 0;

    friend bool operator==(const AdamState&, const AdamState&) = default;
};

AdamState make_adam_state(std::span<const Matrix* const> params, const AdamConfig& config);
AdamState make_adam_state(const MlpParams& params, const AdamConfig& config);

/// One bias-corrected Adam update. Throws NumericError naming the first
/// tensor with a non-finite gradient; parameters are untouched in that case.
void adam_step(std::span<Matrix* const> params, std::span<const Matrix* const> grads,
               AdamState& state);
void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state);

} // namespace pseudo_rl
