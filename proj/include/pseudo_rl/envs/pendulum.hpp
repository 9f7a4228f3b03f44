#pragma once

#include "pseudo_rl/envs/environment.hpp"

namespace pseudo_rl {

/// Swing-up pendulum constants. theta = 0 is upright.
struct PendulumParams {
    double gravity = 10.0;
    double mass = 1.0;
    double length = 1.0;
    double dt = 0.05;
    double max_torque = 2.0;
    double max_speed = 8.0;
    std::size_t max_episode_steps = 200;
};

struct PendulumState {
    double theta = 0.0;
    double theta_dot = 0.0;
};

struct PendulumTransition {
    PendulumState next;
    double reward = 0.0;
};

/// Maps an angle to [-pi, pi).
double wrap_angle(double theta);

/// One semi-implicit Euler step. The torque is clipped to the bound first;
/// a non-finite torque throws ConfigError.
PendulumTransition pendulum_step(const PendulumState& s, double torque,
                                 const PendulumParams& p = {});

/// Observation (cos theta, sin theta, theta_dot).
std::vector<double> pendulum_observation(const PendulumState& s);

class PendulumEnv final : public Environment {
public:
    explicit PendulumEnv(Rng rng, PendulumParams params = {});

    const EnvSpec& spec() const override { return spec_; }
    std::vector<double> reset() override;
    StepResult step(const Action& action) override;

    const PendulumState& state() const noexcept { return state_; }
    void set_state(const PendulumState& s) noexcept { state_ = s; }

private:
    PendulumParams params_;
    EnvSpec spec_;
    Rng rng_;
    PendulumState state_;
    std::size_t steps_ = 0;
};

} // namespace pseudo_rl
