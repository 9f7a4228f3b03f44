#include "pseudo_rl/envs/rollout.hpp"

#include "pseudo_rl/core/errors.hpp"

namespace pseudo_rl {

RepeatRollout::RepeatRollout(Environment& env, std::size_t repeat, std::size_t frame_stack)
    : env_(env), repeat_(repeat), stack_(frame_stack)
{
    if (repeat_ == 0) throw ConfigError("action repeat must be at least 1");
}

EnvStepTransition RepeatRollout::step(const ActionSelector& select)
{
    if (need_reset_) {
        stack_.reset(env_.reset());
        step_in_episode_ = 0;
        need_reset_ = false;
    }
    EnvStepTransition t;
    t.obs = stack_.stacked();
    t.episode = episode_;
    t.env_step = step_in_episode_;
    t.decision_aligned = step_in_episode_ % repeat_ == 0;
    if (t.decision_aligned) {
        held_ = select(t.obs);
        ++decisions_;
    }
    t.action = held_;

    const StepResult r = env_.step(held_);
    stack_.push(r.obs);
    t.reward = r.reward;
    t.next_obs = stack_.stacked();
    t.terminal = r.terminal;
    t.truncated = r.truncated && !r.terminal;

    ++env_steps_;
    ++step_in_episode_;
    if (t.ends_episode()) {
        need_reset_ = true;
        ++episode_;
        ++episodes_completed_;
    }
    return t;
}

std::uint64_t rollout_with_repeats(Environment& env, const ActionSelector& select,
                                   std::size_t repeat, std::size_t n_env_steps,
                                   const TransitionSink& sink, std::size_t frame_stack)
{
    RepeatRollout rollout(env, repeat, frame_stack);
    for (std::size_t i = 0; i < n_env_steps; ++i) sink(rollout.step(select));
    return rollout.decisions();
}

} // namespace pseudo_rl
