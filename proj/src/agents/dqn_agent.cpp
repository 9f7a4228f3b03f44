#include "pseudo_rl/agents/dqn_agent.hpp"

#include <algorithm>
#include <cmath>

#include "pseudo_rl/core/errors.hpp"

namespace pseudo_rl {

DqnAgent make_dqn_agent(const DqnConfig& config, Rng& rng)
{
    if (config.state_dim == 0 || config.n_actions == 0 || config.embed_dim == 0) {
        throw ConfigError("make_dqn_agent: state dim, action count and embed dim must be positive");
    }
    DqnAgent a;
    a.config = config;
    a.embed.rows = Matrix(config.n_actions, config.embed_dim);
    const double bound = 1.0 / std::sqrt(static_cast<double>(config.embed_dim));
    for (double& v : a.embed.rows.values()) v = rng.uniform(-bound, bound);
    a.embed_target = a.embed;
    a.q = make_mlp(config.state_dim + config.embed_dim, config.hidden_width, config.hidden_layers,
                   1, rng);
    a.q_target = a.q;
    const AdamConfig adam{config.learning_rate};
    a.q_opt = make_adam_state(a.q, adam);
    const Matrix* table[] = {&a.embed.rows};
    a.embed_opt = make_adam_state(table, adam);
    return a;
}

Matrix embedding_pseudo_action(const EmbeddingTable& table, std::span<const std::size_t> ids)
{
    if (ids.empty()) throw ConfigError("embedding_pseudo_action: empty action window");
    for (std::size_t id : ids) {
        if (id >= table.n_actions()) {
            throw ConfigError("embedding_pseudo_action: action id " + std::to_string(id) +
                              " out of range (" + std::to_string(table.n_actions()) + " actions)");
        }
    }
    const std::size_t d = table.dim();
    const auto first = table.rows.row_span(ids.front());
    Matrix out(1, d);
    for (std::size_t id : ids) {
        const auto row = table.rows.row_span(id);
        for (std::size_t j = 0; j < d; ++j) out(0, j) += row[j] - first[j];
    }
    const double inv = 1.0 / static_cast<double>(ids.size());
    for (std::size_t j = 0; j < d; ++j) out(0, j) = first[j] + out(0, j) * inv;
    return out;
}

double dqn_q_value(const DqnAgent& agent, std::span<const double> state, const Matrix& embedding)
{
    if (embedding.rows() != 1 || embedding.cols() != agent.embed.dim()) {
        throw ConfigError("dqn_q_value: embedding shape " + embedding.shape_string() +
                          " does not match table dim " + std::to_string(agent.embed.dim()));
    }
    if (state.size() != agent.config.state_dim) {
        throw ConfigError("dqn_q_value: state has " + std::to_string(state.size()) +
                          " entries, expected " + std::to_string(agent.config.state_dim));
    }
    return mlp_output(agent.q, hconcat(Matrix::row(state), embedding))(0, 0);
}

Matrix dqn_q_all_actions(const MlpParams& q, const EmbeddingTable& table, const Matrix& states)
{
    const std::size_t n = states.rows();
    const std::size_t sd = states.cols();
    const std::size_t na = table.n_actions();
    const std::size_t d = table.dim();
    Matrix input(n * na, sd + d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < na; ++a) {
            auto dst = input.row_span(i * na + a);
            std::copy(states.row_span(i).begin(), states.row_span(i).end(), dst.begin());
            std::copy(table.rows.row_span(a).begin(), table.rows.row_span(a).end(),
                      dst.begin() + static_cast<std::ptrdiff_t>(sd));
        }
    }
    const Matrix flat = mlp_output(q, input);
    return Matrix(n, na, std::vector<double>(flat.values().begin(), flat.values().end()));
}

namespace {

std::size_t argmax_lowest(std::span<const double> values)
{
    std::size_t best = 0;
    for (std::size_t a = 1; a < values.size(); ++a)
        if (values[a] > values[best]) best = a;
    return best;
}

} // namespace

std::vector<double> dqn_window_rewards(const PseudoBatch& batch, const DqnAgent& agent)
{
    if (!agent.config.reward_clip) return batch.reward_sum;
    std::vector<double> out(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        double sum = 0.0;
        for (std::size_t t = 0; t < batch.repeat; ++t) {
            sum += std::clamp(batch.rewards(i, t), -1.0, 1.0);
        }
        out[i] = sum;
    }
    return out;
}

std::vector<double> double_dqn_target(const PseudoBatch& batch, const DqnAgent& agent)
{
    const std::size_t n = batch.size();
    const Matrix online = dqn_q_all_actions(agent.q, agent.embed, batch.next_states);
    Matrix target_in(n, agent.config.state_dim + agent.embed.dim());
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t best = argmax_lowest(online.row_span(i));
        auto dst = target_in.row_span(i);
        std::copy(batch.next_states.row_span(i).begin(), batch.next_states.row_span(i).end(),
                  dst.begin());
        const auto e = agent.embed_target.rows.row_span(best);
        std::copy(e.begin(), e.end(), dst.begin() + static_cast<std::ptrdiff_t>(agent.config.state_dim));
    }
    const Matrix q_next = mlp_output(agent.q_target, target_in);
    const auto rewards = dqn_window_rewards(batch, agent);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = rewards[i] + batch.bootstrap_mask[i] * batch.discount[i] * q_next(i, 0);
    }
    return y;
}

DqnLoss dqn_loss_against(const PseudoBatch& batch, const DqnAgent& agent,
                         std::span<const double> targets)
{
    if (!batch.discrete()) throw ContractError("dqn_loss: batch carries no action-id windows");
    const std::size_t n = batch.size();
    if (targets.size() != n) throw ConfigError("dqn_loss: one target per row required");
    const std::size_t sd = agent.config.state_dim;
    const std::size_t d = agent.embed.dim();

    Matrix input(n, sd + d);
    for (std::size_t i = 0; i < n; ++i) {
        auto dst = input.row_span(i);
        std::copy(batch.states.row_span(i).begin(), batch.states.row_span(i).end(), dst.begin());
        const Matrix e = embedding_pseudo_action(agent.embed, batch.window(i));
        std::copy(e.values().begin(), e.values().end(), dst.begin() + static_cast<std::ptrdiff_t>(sd));
    }
    const auto acts = mlp_forward(agent.q, input);
    const Matrix& pred = acts.back();
    Matrix upstream(n, 1);
    DqnLoss out;
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double err = pred(i, 0) - targets[i];
        loss += err * err;
        upstream(i, 0) = 2.0 * err / static_cast<double>(n);
    }
    out.loss = loss / static_cast<double>(n);
    out.targets.assign(targets.begin(), targets.end());
    auto grads = mlp_backward(agent.q, acts, upstream, true);
    out.grad_q = std::move(grads.params);

    out.grad_embed = Matrix(agent.embed.n_actions(), d);
    std::vector<std::size_t> counts(agent.embed.n_actions());
    const double inv_t = 1.0 / static_cast<double>(batch.repeat);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t id : batch.window(i)) ++counts[id];
        const auto g = grads.input.row_span(i).subspan(sd, d);
        for (std::size_t a = 0; a < counts.size(); ++a) {
            if (counts[a] == 0) continue;
            // count * (1/T) is exactly 1 for a window of one repeated id.
            const double share = counts[a] == batch.repeat ? 1.0 : static_cast<double>(counts[a]) * inv_t;
            auto row = out.grad_embed.row_span(a);
            for (std::size_t j = 0; j < d; ++j) row[j] += share * g[j];
        }
    }
    return out;
}

DqnLoss dqn_loss_and_grads(const PseudoBatch& batch, const DqnAgent& agent)
{
    const auto y = double_dqn_target(batch, agent);
    return dqn_loss_against(batch, agent, y);
}

std::size_t dqn_greedy_action(const DqnAgent& agent, std::span<const double> state)
{
    if (state.size() != agent.config.state_dim) {
        throw ConfigError("dqn_act: state has " + std::to_string(state.size()) +
                          " entries, expected " + std::to_string(agent.config.state_dim));
    }
    const Matrix q = dqn_q_all_actions(agent.q, agent.embed, Matrix::row(state));
    return argmax_lowest(q.row_span(0));
}

Action dqn_act(const DqnAgent& agent, std::span<const double> state, double epsilon, Rng& rng)
{
    const double u = rng.uniform();
    if (u < epsilon) return Action::discrete(rng.uniform_index(agent.config.n_actions));
    return Action::discrete(dqn_greedy_action(agent, state));
}

} // namespace pseudo_rl
