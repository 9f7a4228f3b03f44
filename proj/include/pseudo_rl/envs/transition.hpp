#pragma once

#include <cstdint>
#include <vector>

#include "pseudo_rl/envs/environment.hpp"

namespace pseudo_rl {

/// One environment step. `obs`/`next_obs` are frame-stacked states.
struct EnvStepTransition {
    std::vector<double> obs;
    Action action;
    double reward = 0.0;
    std::vector<double> next_obs;
    bool terminal = false;  // the task ended
    bool truncated = false; // time limit; bootstrap through it
    std::uint64_t episode = 0;
    std::uint64_t env_step = 0; // index within the episode
    bool decision_aligned = false;

    bool ends_episode() const noexcept { return terminal || truncated; }

    friend bool operator==(const EnvStepTransition&, const EnvStepTransition&) = default;
};

} // namespace pseudo_rl
