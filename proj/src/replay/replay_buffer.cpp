#include "pseudo_rl/replay/replay_buffer.hpp"

#include "pseudo_rl/core/errors.hpp"
#include "pseudo_rl/core/matrix.hpp"

namespace pseudo_rl {

const char* to_string(SampleMode mode) noexcept
{
    return mode == SampleMode::pseudo ? "pseudo" : "canonical";
}

void ReplayBuffer::push(const EnvStepTransition& t)
{
    if (t.terminal && t.truncated) {
        throw IntegrityError("push: transition is both terminal and truncated");
    }
    if (has_open_episode()) {
        const auto& last = episodes_.back().steps.back();
        if (t.env_step != last.env_step + 1) {
            throw IntegrityError("push: step " + std::to_string(t.env_step) +
                                 " does not follow step " + std::to_string(last.env_step) +
                                 " of the open episode");
        }
        if (!bit_equal(std::span<const double>(t.obs), std::span<const double>(last.next_obs))) {
            throw IntegrityError("push: observation does not match the previous next_obs at step " +
                                 std::to_string(t.env_step));
        }
    } else {
        if (t.env_step != 0) {
            throw IntegrityError("push: new episode starts at step " + std::to_string(t.env_step));
        }
        episodes_.emplace_back();
    }
    auto& ep = episodes_.back();
    ep.steps.push_back(t);
    ep.closed = t.ends_episode();
    ++total_;
}

std::vector<WindowStart> ReplayBuffer::valid_start_indices(std::size_t repeat,
                                                           SampleMode mode) const
{
    if (repeat == 0) throw ConfigError("repeat must be at least 1");
    std::vector<WindowStart> out;
    for (std::size_t e = 0; e < episodes_.size(); ++e) {
        const auto& steps = episodes_[e].steps;
        for (std::size_t i = 0; i + repeat <= steps.size(); ++i) {
            bool interior_terminal = false;
            for (std::size_t k = i; k + 1 < i + repeat; ++k) interior_terminal |= steps[k].terminal;
            if (interior_terminal) continue;
            if (mode == SampleMode::canonical && !steps[i].decision_aligned) continue;
            out.push_back({e, i});
        }
    }
    return out;
}

void ReplayBuffer::refresh(std::size_t repeat, WindowCache& cache) const
{
    while (cache.episode_cursor < episodes_.size()) {
        const auto& ep = episodes_[cache.episode_cursor];
        // A terminal can only be an episode's final step, so every window that
        // fits inside the episode is valid.
        while (cache.next_start + repeat <= ep.steps.size()) {
            const WindowStart w{cache.episode_cursor, cache.next_start};
            cache.pseudo.push_back(w);
            if (ep.steps[cache.next_start].decision_aligned) cache.canonical.push_back(w);
            ++cache.next_start;
        }
        if (!ep.closed) break;
        ++cache.episode_cursor;
        cache.next_start = 0;
    }
}

const std::vector<WindowStart>& ReplayBuffer::window_starts(std::size_t repeat,
                                                            SampleMode mode) const
{
    if (repeat == 0) throw ConfigError("repeat must be at least 1");
    auto& cache = caches_[repeat];
    refresh(repeat, cache);
    return mode == SampleMode::pseudo ? cache.pseudo : cache.canonical;
}

} // namespace pseudo_rl
