#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pseudo_rl/core/matrix.hpp"
#include "pseudo_rl/core/rng.hpp"
#include "pseudo_rl/envs/environment.hpp"
#include "pseudo_rl/nn/adam.hpp"
#include "pseudo_rl/nn/mlp.hpp"
#include "pseudo_rl/replay/pseudo_batch.hpp"

namespace pseudo_rl {

/// One learned vector per discrete action, trained with the Q-network.
struct EmbeddingTable {
    Matrix rows; // n_actions x dim

    std::size_t n_actions() const noexcept { return rows.rows(); }
    std::size_t dim() const noexcept { return rows.cols(); }

    friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;
};

struct DqnConfig {
    std::size_t state_dim = 0;
    std::size_t n_actions = 2;
    std::size_t embed_dim = 8;
    std::size_t hidden_width = 256;
    std::size_t hidden_layers = 2;
    double learning_rate = 3e-4;
    /// Clip each env-step reward to [-1, 1] before summing a window.
    bool reward_clip = true;

    friend bool operator==(const DqnConfig&, const DqnConfig&) = default;
};

/// Q(s, a) = MLP([s | e(a)]) with a scalar head. A window of actions is fed
/// as the mean of its embeddings.
struct DqnAgent {
    DqnConfig config;
    EmbeddingTable embed;
    EmbeddingTable embed_target;
    MlpParams q;
    MlpParams q_target;
    AdamState q_opt;
    AdamState embed_opt;

    friend bool operator==(const DqnAgent&, const DqnAgent&) = default;
};

DqnAgent make_dqn_agent(const DqnConfig& config, Rng& rng);

/// Mean of the listed rows, as e_0 + (1/T) * sum(e_t - e_0) so a window of one
/// repeated id returns that row bit-for-bit. Throws ConfigError on a bad id.
Matrix embedding_pseudo_action(const EmbeddingTable& table, std::span<const std::size_t> ids);

/// Q head on [state | embedding].
double dqn_q_value(const DqnAgent& agent, std::span<const double> state, const Matrix& embedding);

/// n x n_actions matrix of Q(s_i, e(a)) for every action, using the given
/// network and table.
Matrix dqn_q_all_actions(const MlpParams& q, const EmbeddingTable& table, const Matrix& states);

/// Double DQN: a* = argmax_a Q_online(s', e_online(a)) (lowest id on ties),
/// y = r + mask * discount * Q_target(s', e_target(a*)). With reward_clip the
/// window's env-step rewards are clipped before summing.
std::vector<double> double_dqn_target(const PseudoBatch& batch, const DqnAgent& agent);

/// Reward of each row as used in the target (clipped per step when enabled).
std::vector<double> dqn_window_rewards(const PseudoBatch& batch, const DqnAgent& agent);

struct DqnLoss {
    double loss = 0.0;
    MlpParams grad_q;
    Matrix grad_embed; // n_actions x dim; zero rows for ids absent from the batch
    std::vector<double> targets;
};

/// Mean squared error between fixed targets and Q_online(s, mean embedding of
/// the row's window). Each id in a window receives (count / T) of that row's
/// embedding gradient.
DqnLoss dqn_loss_against(const PseudoBatch& batch, const DqnAgent& agent,
                         std::span<const double> targets);

/// double_dqn_target followed by dqn_loss_against.
DqnLoss dqn_loss_and_grads(const PseudoBatch& batch, const DqnAgent& agent);

/// Greedy action by enumeration (ties to the lowest id).
std::size_t dqn_greedy_action(const DqnAgent& agent, std::span<const double> state);

/// Epsilon-greedy: with probability epsilon a uniform action, else greedy.
Action dqn_act(const DqnAgent& agent, std::span<const double> state, double epsilon, Rng& rng);

} // namespace pseudo_rl
