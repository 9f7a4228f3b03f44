#include "pseudo_rl/envs/environment.hpp"

#include "pseudo_rl/core/errors.hpp"
#include "pseudo_rl/envs/integrator_env.hpp"
#include "pseudo_rl/envs/pendulum.hpp"
#include "pseudo_rl/envs/pushbar.hpp"

namespace pseudo_rl {

std::size_t EnvSpec::action_dim() const
{
    if (const auto* c = std::get_if<ContinuousActions>(&actions)) return c->dim;
    return 1;
}

double EnvSpec::action_bound() const
{
    if (const auto* c = std::get_if<ContinuousActions>(&actions)) return c->bound;
    return 1.0;
}

std::size_t EnvSpec::action_count() const
{
    if (const auto* d = std::get_if<DiscreteActions>(&actions)) return d->count;
    return 0;
}

std::unique_ptr<Environment> make_environment(const std::string& name, Rng rng)
{
    if (name == "pendulum") return std::make_unique<PendulumEnv>(std::move(rng));
    if (name == "pushbar") return std::make_unique<PushBarEnv>(std::move(rng));
    if (name == "integrator") return std::make_unique<IntegratorEnv>(std::move(rng));
    throw ConfigError("unknown environment '" + name + "' (expected pendulum, pushbar or integrator)");
}

} // namespace pseudo_rl
