#include "pseudo_rl/envs/pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pseudo_rl/core/errors.hpp"

namespace pseudo_rl {

double wrap_angle(double theta)
{
    constexpr double pi = std::numbers::pi;
    return std::fmod(std::fmod(theta + pi, 2.0 * pi) + 2.0 * pi, 2.0 * pi) - pi;
}

PendulumTransition pendulum_step(const PendulumState& s, double torque, const PendulumParams& p)
{
    if (!std::isfinite(torque)) throw ConfigError("pendulum_step: torque is not finite");
    const double u = std::clamp(torque, -p.max_torque, p.max_torque);
    const double th = wrap_angle(s.theta);
    const double reward = -(th * th + 0.1 * s.theta_dot * s.theta_dot + 0.001 * u * u);

    const double accel = 3.0 * p.gravity / (2.0 * p.length) * std::sin(s.theta) +
                         3.0 / (p.mass * p.length * p.length) * u;
    double new_dot = std::clamp(s.theta_dot + accel * p.dt, -p.max_speed, p.max_speed);
    PendulumTransition t;
    t.next.theta = s.theta + new_dot * p.dt;
    t.next.theta_dot = new_dot;
    t.reward = reward;
    return t;
}

std::vector<double> pendulum_observation(const PendulumState& s)
{
    return {std::cos(s.theta), std::sin(s.theta), s.theta_dot};
}

PendulumEnv::PendulumEnv(Rng rng, PendulumParams params)
    : params_(params), rng_(std::move(rng))
{
    spec_.obs_dim = 3;
    spec_.actions = ContinuousActions{1, params_.max_torque};
    spec_.dt = params_.dt;
    spec_.max_episode_steps = params_.max_episode_steps;
}

std::vector<double> PendulumEnv::reset()
{
    state_.theta = rng_.uniform(-std::numbers::pi, std::numbers::pi);
    state_.theta_dot = rng_.uniform(-1.0, 1.0);
    steps_ = 0;
    return pendulum_observation(state_);
}

StepResult PendulumEnv::step(const Action& action)
{
    if (action.values.size() != 1) throw ConfigError("pendulum: expected a 1-d torque");
    const auto t = pendulum_step(state_, action.values[0], params_);
    state_ = t.next;
    ++steps_;
    StepResult r;
    r.obs = pendulum_observation(state_);
    r.reward = t.reward;
    r.truncated = steps_ >= params_.max_episode_steps;
    return r;
}

} // namespace pseudo_rl
