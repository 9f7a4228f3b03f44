#pragma once

#include "pseudo_rl/envs/environment.hpp"

namespace pseudo_rl {

// PushBar: a point mass on [-1, 1] pushed left/right toward a target that is
// resampled every episode. Fine time resolution makes coarse action repeats
// overshoot, which is the regime where intermediate frames matter.

struct PushBarParams {
    double dt = 0.05;
    double friction = 0.98;
    double target_range = 0.8;
    double settle_radius = 0.02;
    std::size_t settle_steps = 10;
    double settle_bonus = 1.0;
    std::size_t max_episode_steps = 400;
};

struct PushBarState {
    double position = 0.0;
    double velocity = 0.0;
    double target = 0.0;
    std::size_t settled_for = 0;
};

enum PushBarAction : std::size_t { kPushLeft = 0, kNoop = 1, kPushRight = 2 };

struct PushBarTransition {
    PushBarState next;
    double reward = 0.0;
    bool terminal = false;
};

/// velocity <- (velocity + accel * dt) * friction, position <- position +
/// velocity * dt. Hitting a wall clamps position and zeroes velocity.
PushBarTransition pushbar_step(const PushBarState& s, std::size_t action,
                               const PushBarParams& p = {});

/// Observation (position, velocity, target).
std::vector<double> pushbar_observation(const PushBarState& s);

class PushBarEnv final : public Environment {
public:
    explicit PushBarEnv(Rng rng, PushBarParams params = {});

    const EnvSpec& spec() const override { return spec_; }
    std::vector<double> reset() override;
    StepResult step(const Action& action) override;

    const PushBarState& state() const noexcept { return state_; }
    void set_state(const PushBarState& s) noexcept { state_ = s; }

private:
    PushBarParams params_;
    EnvSpec spec_;
    Rng rng_;
    PushBarState state_;
    std::size_t steps_ = 0;
};

} // namespace pseudo_rl
