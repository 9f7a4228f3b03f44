#include "pseudo_rl/agents/sac_agent.hpp"

#include <algorithm>

#include "pseudo_rl/core/errors.hpp"

namespace pseudo_rl {

bool operator==(const SacAgent& a, const SacAgent& b)
{
    return a.q == b.q && a.q_target == b.q_target && a.q2 == b.q2 &&
           a.q2_target == b.q2_target && a.policy == b.policy && a.log_alpha == b.log_alpha &&
           a.target_entropy == b.target_entropy && a.q_opt == b.q_opt && a.q2_opt == b.q2_opt &&
           a.policy_opt == b.policy_opt && a.alpha_opt == b.alpha_opt;
}

SacAgent make_sac_agent(const SacConfig& config, Rng& rng)
{
    if (config.state_dim == 0 || config.action_dim == 0) {
        throw ConfigError("make_sac_agent: state and action dims must be positive");
    }
    if (!(config.action_scale > 0.0)) throw ConfigError("make_sac_agent: action_scale must be > 0");
    if (!(config.init_alpha > 0.0)) throw ConfigError("make_sac_agent: init_alpha must be > 0");
    SacAgent a;
    a.config = config;
    const std::size_t q_in = config.state_dim + config.action_dim;
    a.q = make_mlp(q_in, config.hidden_width, config.hidden_layers, 1, rng);
    a.q_target = a.q;
    if (config.twin_q) {
        a.q2 = make_mlp(q_in, config.hidden_width, config.hidden_layers, 1, rng);
        a.q2_target = a.q2;
    }
    a.policy = make_mlp(config.state_dim, config.hidden_width, config.hidden_layers,
                        2 * config.action_dim, rng);
    a.log_alpha = std::log(config.init_alpha);
    a.target_entropy = config.target_entropy.value_or(-static_cast<double>(config.action_dim));

    const AdamConfig adam{config.learning_rate};
    a.q_opt = make_adam_state(a.q, adam);
    if (config.twin_q) a.q2_opt = make_adam_state(a.q2, adam);
    a.policy_opt = make_adam_state(a.policy, adam);
    Matrix alpha_shape(1, 1);
    const Matrix* alpha_tensor[] = {&alpha_shape};
    a.alpha_opt = make_adam_state(alpha_tensor, adam);
    return a;
}

Matrix sac_critic_input(const SacAgent& agent, const Matrix& states, const Matrix& env_actions)
{
    Matrix normalized = env_actions;
    const double inv = 1.0 / agent.config.action_scale;
    for (double& v : normalized.values()) v *= inv;
    return hconcat(states, normalized);
}

PolicyHead sac_policy_head(const SacAgent& agent, const Matrix& states)
{
    PolicyHead h;
    h.activations = mlp_forward(agent.policy, states);
    const Matrix& out = h.activations.back();
    const std::size_t d = agent.config.action_dim;
    h.mean = slice_cols(out, 0, d);
    h.log_std = slice_cols(out, d, d);
    return h;
}

namespace {

/// Critic on normalized actions already in (-1, 1).
Matrix critic_on_normalized(const MlpParams& q, const Matrix& states, const Matrix& actions)
{
    return mlp_output(q, hconcat(states, actions));
}

void check_noise(const Matrix& noise, std::size_t rows, std::size_t cols, const char* who)
{
    if (noise.rows() != rows || noise.cols() != cols) {
        throw ConfigError(std::string(who) + ": noise shape " + noise.shape_string() +
                          " does not match batch " + std::to_string(rows) + "x" +
                          std::to_string(cols));
    }
}

} // namespace

Matrix sac_q_target(const PseudoBatch& batch, const SacAgent& agent, const Matrix& noise)
{
    const std::size_t n = batch.size();
    check_noise(noise, n, agent.config.action_dim, "sac_q_target");
    const auto head = sac_policy_head(agent, batch.next_states);
    const auto sample = tanh_gaussian_sample(head.mean, head.log_std, noise);
    Matrix q_next = critic_on_normalized(agent.q_target, batch.next_states, sample.action);
    if (agent.config.twin_q) {
        const Matrix q2_next = critic_on_normalized(agent.q2_target, batch.next_states, sample.action);
        for (std::size_t i = 0; i < n; ++i) q_next(i, 0) = std::min(q_next(i, 0), q2_next(i, 0));
    }
    const double alpha = agent.alpha();
    Matrix y(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double soft_value = q_next(i, 0) - alpha * sample.log_prob(i, 0);
        y(i, 0) = batch.reward_sum[i] + batch.bootstrap_mask[i] * batch.discount[i] * soft_value;
    }
    return y;
}

namespace {

double mse_and_grad(const MlpParams& q, const Matrix& input, const Matrix& targets,
                    MlpParams& grad)
{
    const auto acts = mlp_forward(q, input);
    const Matrix& pred = acts.back();
    const std::size_t n = pred.rows();
    Matrix upstream(n, 1);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double err = pred(i, 0) - targets(i, 0);
        loss += err * err;
        upstream(i, 0) = 2.0 * err / static_cast<double>(n);
    }
    grad = mlp_backward(q, acts, upstream, false).params;
    return loss / static_cast<double>(n);
}

} // namespace

SacQLoss sac_q_loss_against(const PseudoBatch& batch, const SacAgent& agent, const Matrix& targets)
{
    if (batch.discrete()) throw ContractError("sac_q_loss: batch carries discrete actions");
    if (targets.rows() != batch.size() || targets.cols() != 1) {
        throw ConfigError("sac_q_loss: targets must be n x 1");
    }
    const Matrix input = sac_critic_input(agent, batch.states, batch.actions);
    SacQLoss out;
    out.targets = targets;
    out.loss = mse_and_grad(agent.q, input, targets, out.grad);
    if (agent.config.twin_q) out.loss += mse_and_grad(agent.q2, input, targets, out.grad2);
    return out;
}

SacQLoss sac_q_loss_and_grads(const PseudoBatch& batch, const SacAgent& agent, const Matrix& noise)
{
    return sac_q_loss_against(batch, agent, sac_q_target(batch, agent, noise));
}

SacPolicyLoss sac_policy_loss_and_grads(const PseudoBatch& batch, const SacAgent& agent,
                                        const Matrix& noise)
{
    if (batch.mode != SampleMode::canonical) {
        throw ContractError("sac_policy_loss: policy updates take canonical batches only");
    }
    const std::size_t n = batch.size();
    const std::size_t d = agent.config.action_dim;
    const std::size_t sd = agent.config.state_dim;
    check_noise(noise, n, d, "sac_policy_loss");

    const auto head = sac_policy_head(agent, batch.states);
    const auto sample = tanh_gaussian_sample(head.mean, head.log_std, noise);
    const Matrix critic_in = hconcat(batch.states, sample.action);

    const double alpha = agent.alpha();
    const double inv_n = 1.0 / static_cast<double>(n);

    // Per-row critic value and d value / d action, taking the smaller critic
    // when twin_q is on.
    const auto acts1 = mlp_forward(agent.q, critic_in);
    Matrix q_value = acts1.back();
    Matrix pick_first(n, 1, 1.0);
    Activations acts2;
    if (agent.config.twin_q) {
        acts2 = mlp_forward(agent.q2, critic_in);
        for (std::size_t i = 0; i < n; ++i) {
            if (acts2.back()(i, 0) < q_value(i, 0)) {
                q_value(i, 0) = acts2.back()(i, 0);
                pick_first(i, 0) = 0.0;
            }
        }
    }
    Matrix up1(n, 1);
    Matrix up2(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        up1(i, 0) = pick_first(i, 0) * -inv_n;
        up2(i, 0) = (1.0 - pick_first(i, 0)) * -inv_n;
    }
    Matrix grad_action = slice_cols(mlp_backward(agent.q, acts1, up1).input, sd, d);
    if (agent.config.twin_q) {
        const Matrix g2 = slice_cols(mlp_backward(agent.q2, acts2, up2).input, sd, d);
        for (std::size_t k = 0; k < grad_action.size(); ++k) grad_action[k] += g2[k];
    }

    SacPolicyLoss out;
    double loss = 0.0;
    Matrix grad_log_prob(n, 1, alpha * inv_n);
    for (std::size_t i = 0; i < n; ++i) loss += alpha * sample.log_prob(i, 0) - q_value(i, 0);
    out.loss = loss * inv_n;
    out.log_prob = sample.log_prob;

    const auto dist_grads =
        tanh_gaussian_backward(sample, head.log_std, noise, grad_action, grad_log_prob);
    Matrix upstream = hconcat(dist_grads.mean, dist_grads.log_std);
    out.grad = mlp_backward(agent.policy, head.activations, upstream, false).params;
    return out;
}

SacAlphaLoss sac_alpha_loss_and_grad(const SacAgent& agent, std::span<const double> log_prob)
{
    if (log_prob.empty()) throw ConfigError("sac_alpha_loss: empty batch");
    double mean_term = 0.0;
    for (double lp : log_prob) mean_term += lp + agent.target_entropy;
    mean_term /= static_cast<double>(log_prob.size());
    const double alpha = agent.alpha();
    // L = -alpha * mean(log pi + H), dL/dlog_alpha = dL/dalpha * alpha.
    return {-alpha * mean_term, -alpha * mean_term};
}

SacAlphaLoss sac_alpha_loss_and_grad(const PseudoBatch& batch, const SacAgent& agent,
                                     const Matrix& noise)
{
    if (batch.mode != SampleMode::canonical) {
        throw ContractError("sac_alpha_loss: temperature updates take canonical batches only");
    }
    check_noise(noise, batch.size(), agent.config.action_dim, "sac_alpha_loss");
    const auto head = sac_policy_head(agent, batch.states);
    const auto sample = tanh_gaussian_sample(head.mean, head.log_std, noise);
    return sac_alpha_loss_and_grad(agent, sample.log_prob.values());
}

Action sac_act(const SacAgent& agent, std::span<const double> state, bool explore, Rng& rng)
{
    if (state.size() != agent.config.state_dim) {
        throw ConfigError("sac_act: state has " + std::to_string(state.size()) + " entries, expected " +
                          std::to_string(agent.config.state_dim));
    }
    const auto head = sac_policy_head(agent, Matrix::row(state));
    const std::size_t d = agent.config.action_dim;
    std::vector<double> action(d);
    if (explore) {
        Matrix noise(1, d);
        for (double& v : noise.values()) v = rng.normal();
        const auto sample = tanh_gaussian_sample(head.mean, head.log_std, noise);
        for (std::size_t j = 0; j < d; ++j) action[j] = agent.config.action_scale * sample.action(0, j);
    } else {
        for (std::size_t j = 0; j < d; ++j) {
            action[j] = agent.config.action_scale * std::tanh(head.mean(0, j));
        }
    }
    return Action::continuous(std::move(action));
}

} // namespace pseudo_rl
