#pragma once

#include "pseudo_rl/envs/environment.hpp"

namespace pseudo_rl {

/// Single integrator x' = u on the real line, the state-independent dynamics
/// under which averaged actions are exact. Reward -(x^2 + 0.01 u^2) * dt.
class IntegratorEnv final : public Environment {
public:
    explicit IntegratorEnv(Rng rng);

    const EnvSpec& spec() const override { return spec_; }
    std::vector<double> reset() override;
    StepResult step(const Action& action) override;

private:
    EnvSpec spec_;
    Rng rng_;
    double x_ = 0.0;
    std::size_t steps_ = 0;
};

} // namespace pseudo_rl
