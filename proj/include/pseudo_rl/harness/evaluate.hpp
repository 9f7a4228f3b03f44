#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pseudo_rl/envs/environment.hpp"
#include "pseudo_rl/envs/rollout.hpp"

namespace pseudo_rl {

struct EvalResult {
    double mean = 0.0;
    double std = 0.0; // population std over episodes
    std::vector<double> returns;
};

/// Plays `n_episodes` full episodes with `select` held for `repeat` steps per
/// decision. Returns are undiscounted reward sums. `select` should be
/// deterministic (mean action, greedy id).
EvalResult evaluate_policy(Environment& env, const ActionSelector& select, std::size_t repeat,
                           std::size_t frame_stack, std::size_t n_episodes);

/// Same, on a fresh environment seeded with `seed`.
EvalResult evaluate_policy(const std::string& env_name, const ActionSelector& select,
                           std::size_t repeat, std::size_t frame_stack, std::size_t n_episodes,
                           std::uint64_t seed);

} // namespace pseudo_rl
