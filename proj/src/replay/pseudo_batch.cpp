#include "pseudo_rl/replay/pseudo_batch.hpp"

#include <cmath>

#include "pseudo_rl/core/errors.hpp"

namespace pseudo_rl {

std::vector<double> pseudo_action_continuous(std::span<const std::vector<double>> actions)
{
    if (actions.empty()) throw ConfigError("pseudo_action_continuous: empty action list");
    const auto& first = actions.front();
    std::vector<double> offset(first.size(), 0.0);
    for (const auto& a : actions) {
        if (a.size() != first.size()) {
            throw ConfigError("pseudo_action_continuous: action dimensions differ");
        }
        for (std::size_t j = 0; j < a.size(); ++j) offset[j] += a[j] - first[j];
    }
    const double inv = 1.0 / static_cast<double>(actions.size());
    std::vector<double> mean(first.size());
    for (std::size_t j = 0; j < first.size(); ++j) mean[j] = first[j] + offset[j] * inv;
    return mean;
}

PseudoBatch assemble_batch(const ReplayBuffer& buffer, std::span<const WindowStart> starts,
                           std::size_t repeat, SampleMode mode, double gamma_env)
{
    if (repeat == 0) throw ConfigError("repeat must be at least 1");
    PseudoBatch b;
    b.mode = mode;
    b.repeat = repeat;
    const std::size_t n = starts.size();
    if (n == 0) return b;

    const auto& probe = buffer.at(starts.front());
    const bool continuous = !probe.action.values.empty();
    const std::size_t obs_dim = probe.obs.size();
    const std::size_t act_dim = probe.action.values.size();
    const double discount = std::pow(gamma_env, static_cast<double>(repeat));

    b.states = Matrix(n, obs_dim);
    b.next_states = Matrix(n, obs_dim);
    b.rewards = Matrix(n, repeat);
    if (continuous) {
        b.actions = Matrix(n, act_dim);
    } else {
        b.action_ids.resize(n * repeat);
    }
    b.reward_sum.resize(n);
    b.bootstrap_mask.resize(n);
    b.discount.assign(n, discount);
    b.is_canonical.resize(n);

    std::vector<std::vector<double>> window_actions(repeat);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& steps = buffer.episodes().at(starts[r].episode).steps;
        const std::size_t i = starts[r].index;
        if (i + repeat > steps.size()) {
            throw IntegrityError("assemble_batch: window runs past the end of its episode");
        }
        const auto& head = steps[i];
        const auto& tail = steps[i + repeat - 1];
        std::copy(head.obs.begin(), head.obs.end(), b.states.row_span(r).begin());
        std::copy(tail.next_obs.begin(), tail.next_obs.end(), b.next_states.row_span(r).begin());
        double sum = 0.0;
        for (std::size_t t = 0; t < repeat; ++t) {
            const auto& s = steps[i + t];
            if (s.terminal && t + 1 < repeat) {
                throw IntegrityError("assemble_batch: terminal inside a window");
            }
            b.rewards(r, t) = s.reward;
            sum += s.reward;
            if (continuous) {
                window_actions[t] = s.action.values;
            } else {
                b.action_ids[r * repeat + t] = s.action.id;
            }
        }
        b.reward_sum[r] = sum;
        b.bootstrap_mask[r] = tail.terminal ? 0.0 : 1.0;
        b.is_canonical[r] = head.decision_aligned ? 1 : 0;
        if (continuous) {
            const auto mean = pseudo_action_continuous(window_actions);
            std::copy(mean.begin(), mean.end(), b.actions.row_span(r).begin());
        }
    }
    return b;
}

PseudoBatch sample_batch(const ReplayBuffer& buffer, std::size_t n, std::size_t repeat,
                         SampleMode mode, double gamma_env, Rng& rng)
{
    if (n == 0) throw ConfigError("sample_batch: batch size must be at least 1");
    const auto& valid = buffer.window_starts(repeat, mode);
    if (valid.empty()) {
        throw InsufficientDataError("sample_batch: no valid " + std::string(to_string(mode)) +
                                    " windows of length " + std::to_string(repeat));
    }
    std::vector<WindowStart> picks(n);
    for (auto& p : picks) p = valid[rng.uniform_index(valid.size())];
    return assemble_batch(buffer, picks, repeat, mode, gamma_env);
}

} // namespace pseudo_rl
