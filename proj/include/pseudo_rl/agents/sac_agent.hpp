#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>

#include "pseudo_rl/core/matrix.hpp"
#include "pseudo_rl/core/rng.hpp"
#include "pseudo_rl/envs/environment.hpp"
#include "pseudo_rl/nn/adam.hpp"
#include "pseudo_rl/nn/mlp.hpp"
#include "pseudo_rl/nn/tanh_gaussian.hpp"
#include "pseudo_rl/replay/pseudo_batch.hpp"

namespace pseudo_rl {

struct SacConfig {
    std::size_t state_dim = 0;
    std::size_t action_dim = 1;
    /// Environment actions are action_scale * tanh(...); the networks see
    /// actions divided by this scale.
    double action_scale = 1.0;
    std::size_t hidden_width = 256;
    std::size_t hidden_layers = 2;
    double learning_rate = 1e-3;
    double init_alpha = 0.1;
    /// Defaults to -action_dim when unset.
    std::optional<double> target_entropy;
    /// Adds a second critic and uses the minimum of the two.
    bool twin_q = false;
};

/// Soft actor-critic with a single critic by default. The temperature is
/// trained in log space, so alpha = exp(log_alpha) stays positive.
struct SacAgent {
    SacConfig config;
    MlpParams q;
    MlpParams q_target;
    MlpParams q2; // twin_q only
    MlpParams q2_target;
    MlpParams policy; // outputs [mean | log_std]
    double log_alpha = 0.0;
    double target_entropy = -1.0;
    AdamState q_opt;
    AdamState q2_opt;
    AdamState policy_opt;
    AdamState alpha_opt;

    double alpha() const { return std::exp(log_alpha); }

    friend bool operator==(const SacAgent& a, const SacAgent& b);
};

SacAgent make_sac_agent(const SacConfig& config, Rng& rng);

/// Critic input [state | action / action_scale].
Matrix sac_critic_input(const SacAgent& agent, const Matrix& states, const Matrix& env_actions);

struct PolicyHead {
    Activations activations;
    Matrix mean;
    Matrix log_std;
};

PolicyHead sac_policy_head(const SacAgent& agent, const Matrix& states);

/// y = reward_sum + mask * discount * (Q'(s', a') - alpha * log pi(a'|s')),
/// a' drawn from the current policy at s' with the given standard-normal
/// noise (one sample per row). Returns n x 1.
Matrix sac_q_target(const PseudoBatch& batch, const SacAgent& agent, const Matrix& noise);

struct SacQLoss {
    double loss = 0.0;
    MlpParams grad;
    MlpParams grad2; // twin_q only
    Matrix targets;
};

/// Mean squared TD error against fixed targets; gradients reach only the
/// critic(s). The action input is the row's pseudo-action. With twin_q the
/// loss is the sum of both critics' errors.
SacQLoss sac_q_loss_against(const PseudoBatch& batch, const SacAgent& agent,
                            const Matrix& targets);

/// Computes targets with sac_q_target(noise), then sac_q_loss_against.
SacQLoss sac_q_loss_and_grads(const PseudoBatch& batch, const SacAgent& agent,
                              const Matrix& noise);

struct SacPolicyLoss {
    double loss = 0.0;
    MlpParams grad;
    Matrix log_prob; // n x 1, of the reparameterized sample
};

/// Reparameterized surrogate mean(alpha * log pi(a|s) - Q(s, a)) with the
/// critic held fixed. Only canonical batches are accepted.
SacPolicyLoss sac_policy_loss_and_grads(const PseudoBatch& batch, const SacAgent& agent,
                                        const Matrix& noise);

struct SacAlphaLoss {
    double loss = 0.0;
    double grad_log_alpha = 0.0;
};

/// mean(-alpha * log pi - alpha * target_entropy) and its derivative with
/// respect to log_alpha; log pi is treated as a constant.
SacAlphaLoss sac_alpha_loss_and_grad(const SacAgent& agent, std::span<const double> log_prob);
SacAlphaLoss sac_alpha_loss_and_grad(const PseudoBatch& batch, const SacAgent& agent,
                                     const Matrix& noise);

/// Explore: tanh-Gaussian sample. Evaluate: tanh(mean). Both scaled to the
/// environment's action range.
Action sac_act(const SacAgent& agent, std::span<const double> state, bool explore, Rng& rng);

} // namespace pseudo_rl
