#include "pseudo_rl/agents/trainer.hpp"

#include <cmath>

namespace pseudo_rl {

namespace {

Matrix normal_matrix(std::size_t rows, std::size_t cols, Rng& rng)
{
    Matrix m(rows, cols);
    for (double& v : m.values()) v = rng.normal();
    return m;
}

double global_norm(const MlpParams& g)
{
    double s = 0.0;
    for (const Matrix* t : g.tensors())
        for (double v : t->values()) s += v * v;
    return std::sqrt(s);
}

} // namespace

bool update_due(const TrainSchedule& schedule, std::uint64_t env_steps)
{
    return env_steps >= schedule.min_replay && env_steps % schedule.update_every == 0;
}

TrainMetrics train_step(SacAgent& agent, BatchSource& source, const TrainSchedule& schedule,
                        TrainCounters& counters, std::uint64_t env_steps, TrainRngs& rngs)
{
    TrainMetrics m;
    m.alpha = agent.alpha();
    if (!update_due(schedule, env_steps) || source.available(schedule.q_mode) == 0) return m;

    const std::size_t d = agent.config.action_dim;
    const auto batch = source.sample(schedule.batch_size, schedule.q_mode, rngs.sampler);
    const auto q_noise = normal_matrix(batch.size(), d, rngs.noise);
    auto q_loss = sac_q_loss_and_grads(batch, agent, q_noise);
    adam_step(agent.q, q_loss.grad, agent.q_opt);
    if (agent.config.twin_q) adam_step(agent.q2, q_loss.grad2, agent.q2_opt);
    ++counters.q_updates;
    m.q_updated = true;
    m.q_loss = q_loss.loss;
    m.q_grad_norm = global_norm(q_loss.grad);

    if (counters.q_updates % schedule.actor_update_freq == 0 &&
        source.available(SampleMode::canonical) > 0) {
        const auto pbatch = source.sample(schedule.batch_size, SampleMode::canonical, rngs.sampler);
        const auto p_noise = normal_matrix(pbatch.size(), d, rngs.noise);
        const auto policy_loss = sac_policy_loss_and_grads(pbatch, agent, p_noise);
        const auto alpha_loss = sac_alpha_loss_and_grad(agent, policy_loss.log_prob.values());
        adam_step(agent.policy, policy_loss.grad, agent.policy_opt);
        Matrix log_alpha(1, 1, agent.log_alpha);
        const Matrix alpha_grad(1, 1, alpha_loss.grad_log_alpha);
        Matrix* params[] = {&log_alpha};
        const Matrix* grads[] = {&alpha_grad};
        adam_step(params, grads, agent.alpha_opt);
        agent.log_alpha = log_alpha(0, 0);
        ++counters.actor_updates;
        m.actor_updated = true;
        m.policy_loss = policy_loss.loss;
    }

    polyak_update(agent.q_target, agent.q, schedule.tau);
    if (agent.config.twin_q) polyak_update(agent.q2_target, agent.q2, schedule.tau);
    m.alpha = agent.alpha();
    return m;
}

TrainMetrics train_step(DqnAgent& agent, BatchSource& source, const TrainSchedule& schedule,
                        TrainCounters& counters, std::uint64_t env_steps, TrainRngs& rngs)
{
    TrainMetrics m;
    if (!update_due(schedule, env_steps) || source.available(schedule.q_mode) == 0) return m;

    const auto batch = source.sample(schedule.batch_size, schedule.q_mode, rngs.sampler);
    auto loss = dqn_loss_and_grads(batch, agent);
    adam_step(agent.q, loss.grad_q, agent.q_opt);
    Matrix* params[] = {&agent.embed.rows};
    const Matrix* grads[] = {&loss.grad_embed};
    adam_step(params, grads, agent.embed_opt);
    polyak_update(agent.q_target, agent.q, schedule.tau);
    polyak_update(agent.embed_target.rows, agent.embed.rows, schedule.tau);
    ++counters.q_updates;
    m.q_updated = true;
    m.q_loss = loss.loss;
    m.q_grad_norm = global_norm(loss.grad_q);
    return m;
}

} // namespace pseudo_rl
