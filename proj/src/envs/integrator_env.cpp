#include "pseudo_rl/envs/integrator_env.hpp"

#include <algorithm>
#include <cmath>

#include "pseudo_rl/core/errors.hpp"

namespace pseudo_rl {

namespace {
constexpr std::size_t kIntegratorEpisodeSteps = 200;
}

IntegratorEnv::IntegratorEnv(Rng rng) : rng_(std::move(rng))
{
    spec_.obs_dim = 1;
    spec_.actions = ContinuousActions{1, 1.0};
    spec_.dt = 0.05;
    spec_.max_episode_steps = kIntegratorEpisodeSteps;
}

std::vector<double> IntegratorEnv::reset()
{
    x_ = rng_.uniform(-1.0, 1.0);
    steps_ = 0;
    return {x_};
}

StepResult IntegratorEnv::step(const Action& action)
{
    if (action.values.size() != 1 || !std::isfinite(action.values[0])) {
        throw ConfigError("integrator: expected one finite action value");
    }
    const double u = std::clamp(action.values[0], -1.0, 1.0);
    StepResult r;
    r.reward = -(x_ * x_ + 0.01 * u * u) * spec_.dt;
    x_ += u * spec_.dt;
    ++steps_;
    r.obs = {x_};
    r.truncated = steps_ >= kIntegratorEpisodeSteps;
    return r;
}

} // namespace pseudo_rl
