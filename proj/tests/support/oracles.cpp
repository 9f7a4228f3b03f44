#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

Matrix naive_forward(const MlpParams& params, const Matrix& input)
{
    std::vector<std::vector<double>> h(input.rows());
    for (std::size_t i = 0; i < input.rows(); ++i) {
        h[i].assign(input.row_span(i).begin(), input.row_span(i).end());
    }
    for (const auto& layer : params.layers) {
        for (auto& row : h) {
            std::vector<double> next(layer.out_dim());
            for (std::size_t j = 0; j < layer.out_dim(); ++j) {
                double s = layer.bias(0, j);
                for (std::size_t k = 0; k < layer.in_dim(); ++k) s += row[k] * layer.weight(k, j);
                if (layer.activation == pseudo_rl::Activation::relu && s < 0.0) s = 0.0;
                next[j] = s;
            }
            row = std::move(next);
        }
    }
    Matrix out(input.rows(), params.output_dim());
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < h[i].size(); ++j) out(i, j) = h[i][j];
    return out;
}

std::vector<WindowStart> brute_force_starts(const ReplayBuffer& buffer, std::size_t repeat,
                                            SampleMode mode)
{
    std::vector<WindowStart> out;
    const auto& eps = buffer.episodes();
    for (std::size_t e = 0; e < eps.size(); ++e) {
        const auto& steps = eps[e].steps;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            bool ok = i + repeat <= steps.size();
            for (std::size_t t = 0; ok && t + 1 < repeat; ++t) {
                if (steps[i + t].terminal || steps[i + t].truncated) ok = false;
            }
            if (ok && mode == SampleMode::canonical && !steps[i].decision_aligned) ok = false;
            if (ok) out.push_back({e, i});
        }
    }
    return out;
}

double brute_reward_sum(const ReplayBuffer& buffer, const WindowStart& s, std::size_t repeat)
{
    double sum = 0.0;
    for (std::size_t t = 0; t < repeat; ++t) sum += buffer.episodes()[s.episode].steps[s.index + t].reward;
    return sum;
}

std::vector<double> brute_mean_action(const ReplayBuffer& buffer, const WindowStart& s,
                                      std::size_t repeat)
{
    const auto& steps = buffer.episodes()[s.episode].steps;
    std::vector<double> mean(steps[s.index].action.values.size(), 0.0);
    for (std::size_t t = 0; t < repeat; ++t)
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += steps[s.index + t].action.values[j];
    for (double& v : mean) v /= static_cast<double>(repeat);
    return mean;
}

std::vector<EnvStepTransition> synthetic_steps(const std::vector<EpisodeShape>& shapes,
                                               std::size_t repeat, bool discrete, Rng& rng,
                                               std::size_t obs_dim, std::size_t action_dim)
{
    std::vector<EnvStepTransition> out;
    for (std::size_t e = 0; e < shapes.size(); ++e) {
        std::vector<double> obs(obs_dim);
        for (double& v : obs) v = rng.uniform(-1.0, 1.0);
        for (std::size_t i = 0; i < shapes[e].length; ++i) {
            EnvStepTransition t;
            t.obs = obs;
            if (discrete) {
                t.action = pseudo_rl::Action::discrete(rng.uniform_index(3));
            } else {
                std::vector<double> a(action_dim);
                for (double& v : a) v = rng.uniform(-2.0, 2.0);
                t.action = pseudo_rl::Action::continuous(std::move(a));
            }
            t.reward = rng.uniform(-1.0, 1.0);
            for (double& v : obs) v = rng.uniform(-1.0, 1.0);
            t.next_obs = obs;
            t.episode = e;
            t.env_step = i;
            t.decision_aligned = i % repeat == 0;
            const bool last = i + 1 == shapes[e].length;
            if (last && !shapes[e].open) {
                t.terminal = shapes[e].terminal;
                t.truncated = !shapes[e].terminal;
            }
            out.push_back(std::move(t));
        }
    }
    return out;
}

ReplayBuffer fill_buffer(const std::vector<EnvStepTransition>& steps)
{
    ReplayBuffer b;
    for (const auto& t : steps) b.push(t);
    return b;
}

void AgentStepReplay::observe(const EnvStepTransition& t)
{
    if (t.decision_aligned) pending_.clear();
    pending_.push_back(t);
    if (pending_.size() == repeat_) {
        AgentStep s;
        s.state = pending_.front().obs;
        s.action = pending_.front().action;
        for (const auto& p : pending_) s.rewards.push_back(p.reward);
        s.next_state = pending_.back().next_obs;
        s.done = pending_.back().terminal;
        memory_.push_back(std::move(s));
        pending_.clear();
    }
    if (t.ends_episode()) pending_.clear();
}

std::size_t AgentStepReplay::available(SampleMode mode) const
{
    if (mode != SampleMode::canonical) throw std::logic_error("agent-step replay holds no pseudo data");
    return memory_.size();
}

pseudo_rl::PseudoBatch AgentStepReplay::sample(std::size_t n, SampleMode mode, Rng& rng)
{
    if (mode != SampleMode::canonical) throw std::logic_error("agent-step replay holds no pseudo data");
    pseudo_rl::PseudoBatch b;
    b.mode = SampleMode::canonical;
    b.repeat = repeat_;
    const auto& probe = memory_.front();
    const bool continuous = !probe.action.values.empty();
    b.states = Matrix(n, probe.state.size());
    b.next_states = Matrix(n, probe.state.size());
    b.rewards = Matrix(n, repeat_);
    if (continuous) b.actions = Matrix(n, probe.action.values.size());
    for (std::size_t r = 0; r < n; ++r) {
        const AgentStep& s = memory_[rng.uniform_index(memory_.size())];
        for (std::size_t j = 0; j < s.state.size(); ++j) {
            b.states(r, j) = s.state[j];
            b.next_states(r, j) = s.next_state[j];
        }
        double sum = 0.0;
        for (std::size_t t = 0; t < repeat_; ++t) {
            b.rewards(r, t) = s.rewards[t];
            sum += s.rewards[t];
        }
        if (continuous) {
            for (std::size_t j = 0; j < s.action.values.size(); ++j) b.actions(r, j) = s.action.values[j];
        } else {
            for (std::size_t t = 0; t < repeat_; ++t) b.action_ids.push_back(s.action.id);
        }
        b.reward_sum.push_back(sum);
        b.bootstrap_mask.push_back(s.done ? 0.0 : 1.0);
        b.discount.push_back(std::pow(gamma_env_, static_cast<double>(repeat_)));
        b.is_canonical.push_back(1);
    }
    return b;
}

} // namespace oracle
