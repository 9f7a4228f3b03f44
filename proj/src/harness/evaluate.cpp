#include "pseudo_rl/harness/evaluate.hpp"

#include <cmath>

#include "pseudo_rl/core/errors.hpp"

namespace pseudo_rl {

EvalResult evaluate_policy(Environment& env, const ActionSelector& select, std::size_t repeat,
                           std::size_t frame_stack, std::size_t n_episodes)
{
    if (n_episodes == 0) throw ConfigError("evaluate_policy: need at least one episode");
    RepeatRollout rollout(env, repeat, frame_stack);
    EvalResult r;
    double ret = 0.0;
    while (r.returns.size() < n_episodes) {
        const auto t = rollout.step(select);
        ret += t.reward;
        if (t.ends_episode()) {
            r.returns.push_back(ret);
            ret = 0.0;
        }
    }
    for (double v : r.returns) r.mean += v;
    r.mean /= static_cast<double>(n_episodes);
    double ss = 0.0;
    for (double v : r.returns) ss += (v - r.mean) * (v - r.mean);
    r.std = std::sqrt(ss / static_cast<double>(n_episodes));
    return r;
}

EvalResult evaluate_policy(const std::string& env_name, const ActionSelector& select,
                           std::size_t repeat, std::size_t frame_stack, std::size_t n_episodes,
                           std::uint64_t seed)
{
    auto env = make_environment(env_name, Rng(seed));
    return evaluate_policy(*env, select, repeat, frame_stack, n_episodes);
}

} // namespace pseudo_rl
