#pragma once

#include <cstdint>

#include "pseudo_rl/agents/dqn_agent.hpp"
#include "pseudo_rl/agents/sac_agent.hpp"
#include "pseudo_rl/core/rng.hpp"
#include "pseudo_rl/replay/pseudo_batch.hpp"

namespace pseudo_rl {

/// Update cadence, counted in environment steps.
struct TrainSchedule {
    SampleMode q_mode = SampleMode::pseudo; // baseline runs use canonical
    std::size_t batch_size = 32;
    std::size_t update_every = 4;
    std::size_t actor_update_freq = 2; // SAC: actor/alpha update every k-th Q update
    std::size_t min_replay = 500;
    double tau = 0.005;
};

struct TrainCounters {
    std::uint64_t q_updates = 0;
    std::uint64_t actor_updates = 0;

    friend bool operator==(const TrainCounters&, const TrainCounters&) = default;
};

struct TrainMetrics {
    bool q_updated = false;
    bool actor_updated = false;
    double q_loss = 0.0;
    double q_grad_norm = 0.0;
    double policy_loss = 0.0; // SAC only
    double alpha = 0.0;       // SAC only
};

/// Random streams consumed by updates: batch indices and policy noise.
struct TrainRngs {
    Rng sampler;
    Rng noise;
};

/// Called once after every environment step; `env_steps` is the number of
/// steps collected so far. Once env_steps >= min_replay, every update_every-th
/// step does one Q update on a batch in schedule.q_mode followed by a Polyak
/// target update. SAC additionally updates policy and temperature on a fresh
/// canonical batch after every actor_update_freq-th Q update.
TrainMetrics train_step(SacAgent& agent, BatchSource& source, const TrainSchedule& schedule,
                        TrainCounters& counters, std::uint64_t env_steps, TrainRngs& rngs);
TrainMetrics train_step(DqnAgent& agent, BatchSource& source, const TrainSchedule& schedule,
                        TrainCounters& counters, std::uint64_t env_steps, TrainRngs& rngs);

/// Whether a Q update is due at this step count (ignores data availability).
bool update_due(const TrainSchedule& schedule, std::uint64_t env_steps);

} // namespace pseudo_rl
