#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "pseudo_rl/envs/environment.hpp"
#include "pseudo_rl/envs/frame_stack.hpp"
#include "pseudo_rl/envs/transition.hpp"

namespace pseudo_rl {

/// Chooses an action for a (stacked) state. Called only at decision points.
using ActionSelector = std::function<Action(std::span<const double> state)>;
using TransitionSink = std::function<void(const EnvStepTransition&)>;

/// Drives an environment one step at a time under action repetition: a new
/// action is chosen at every in-episode step index that is a multiple of the
/// repeat length and held for the following steps. Every step is reported,
/// including those between decisions. Episodes restart automatically, and
/// each restart begins at a decision point.
class RepeatRollout {
public:
    RepeatRollout(Environment& env, std::size_t repeat, std::size_t frame_stack);

    EnvStepTransition step(const ActionSelector& select);

    std::size_t repeat() const noexcept { return repeat_; }
    std::uint64_t decisions() const noexcept { return decisions_; }
    std::uint64_t episodes_completed() const noexcept { return episodes_completed_; }
    std::uint64_t env_steps() const noexcept { return env_steps_; }

private:
    Environment& env_;
    std::size_t repeat_;
    FrameStack stack_;
    bool need_reset_ = true;
    Action held_;
    std::uint64_t episode_ = 0;
    std::uint64_t step_in_episode_ = 0;
    std::uint64_t decisions_ = 0;
    std::uint64_t episodes_completed_ = 0;
    std::uint64_t env_steps_ = 0;
};

/// Runs `n_env_steps` steps and pushes every transition to `sink`.
/// Returns the number of decisions made.
std::uint64_t rollout_with_repeats(Environment& env, const ActionSelector& select,
                                   std::size_t repeat, std::size_t n_env_steps,
                                   const TransitionSink& sink, std::size_t frame_stack = 1);

} // namespace pseudo_rl
