#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <vector>

#include "pseudo_rl/envs/transition.hpp"

namespace pseudo_rl {

enum class SampleMode {
    pseudo,    // every window start
    canonical, // only starts at action-decision points
};

const char* to_string(SampleMode mode) noexcept;

/// Position of a transition: episode number in the buffer, step within it.
struct WindowStart {
    std::size_t episode = 0;
    std::size_t index = 0;

    friend auto operator<=>(const WindowStart&, const WindowStart&) = default;
};

struct Episode {
    std::vector<EnvStepTransition> steps;
    bool closed = false;
};

/// Unbounded replay of environment steps grouped into episodes. Nothing is
/// discarded, including the steps between action decisions.
class ReplayBuffer {
public:
    /// Appends a step. Throws IntegrityError when the step does not continue
    /// the open episode (observation chain or step index breaks) or when a
    /// new episode does not start at step 0.
    void push(const EnvStepTransition& t);

    std::size_t total_steps() const noexcept { return total_; }
    std::size_t episode_count() const noexcept { return episodes_.size(); }
    bool has_open_episode() const noexcept { return !episodes_.empty() && !episodes_.back().closed; }
    const std::vector<Episode>& episodes() const noexcept { return episodes_; }
    const EnvStepTransition& at(const WindowStart& w) const
    {
        return episodes_[w.episode].steps[w.index];
    }

    /// Fresh enumeration of every start i whose window i .. i+repeat-1 lies in
    /// one episode with no terminal before its last step. Canonical mode also
    /// requires the start to be decision-aligned. Ordered by (episode, index).
    std::vector<WindowStart> valid_start_indices(std::size_t repeat, SampleMode mode) const;

    /// Same set as valid_start_indices, maintained incrementally between calls.
    const std::vector<WindowStart>& window_starts(std::size_t repeat, SampleMode mode) const;

private:
    struct WindowCache {
        std::vector<WindowStart> pseudo;
        std::vector<WindowStart> canonical;
        std::size_t episode_cursor = 0;
        std::size_t next_start = 0;
    };
    void refresh(std::size_t repeat, WindowCache& cache) const;

    std::vector<Episode> episodes_;
    std::size_t total_ = 0;
    mutable std::map<std::size_t, WindowCache> caches_;
};

} // namespace pseudo_rl
