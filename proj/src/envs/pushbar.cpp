#include "pseudo_rl/envs/pushbar.hpp"

#include <cmath>

#include "pseudo_rl/core/errors.hpp"

namespace pseudo_rl {

PushBarTransition pushbar_step(const PushBarState& s, std::size_t action, const PushBarParams& p)
{
    if (action > kPushRight) {
        throw ConfigError("pushbar_step: invalid action id " + std::to_string(action));
    }
    const double accel = static_cast<double>(action) - 1.0;
    PushBarTransition t;
    t.next = s;
    t.next.velocity = (s.velocity + accel * p.dt) * p.friction;
    t.next.position = s.position + t.next.velocity * p.dt;
    if (t.next.position > 1.0 || t.next.position < -1.0) {
        t.next.position = t.next.position > 1.0 ? 1.0 : -1.0;
        t.next.velocity = 0.0;
    }
    const double distance = std::abs(t.next.position - t.next.target);
    t.reward = -distance * p.dt;
    t.next.settled_for = distance < p.settle_radius ? s.settled_for + 1 : 0;
    if (t.next.settled_for >= p.settle_steps) {
        t.terminal = true;
        t.reward += p.settle_bonus;
    }
    return t;
}

std::vector<double> pushbar_observation(const PushBarState& s)
{
    return {s.position, s.velocity, s.target};
}

PushBarEnv::PushBarEnv(Rng rng, PushBarParams params) : params_(params), rng_(std::move(rng))
{
    spec_.obs_dim = 3;
    spec_.actions = DiscreteActions{3};
    spec_.dt = params_.dt;
    spec_.max_episode_steps = params_.max_episode_steps;
}

std::vector<double> PushBarEnv::reset()
{
    state_ = PushBarState{};
    state_.target = rng_.uniform(-params_.target_range, params_.target_range);
    steps_ = 0;
    return pushbar_observation(state_);
}

StepResult PushBarEnv::step(const Action& action)
{
    const auto t = pushbar_step(state_, action.id, params_);
    state_ = t.next;
    ++steps_;
    StepResult r;
    r.obs = pushbar_observation(state_);
    r.reward = t.reward;
    r.terminal = t.terminal;
    r.truncated = !t.terminal && steps_ >= params_.max_episode_steps;
    return r;
}

} // namespace pseudo_rl
