#pragma once

#include <cstdint>
#include <filesystem>

#include "pseudo_rl/agents/dqn_agent.hpp"
#include "pseudo_rl/agents/sac_agent.hpp"
#include "pseudo_rl/agents/trainer.hpp"
#include "pseudo_rl/core/rng.hpp"
#include "pseudo_rl/envs/environment.hpp"
#include "pseudo_rl/harness/run_config.hpp"

namespace pseudo_rl {

/// Named streams derived from the run seed. Evaluation has its own stream,
/// so the evaluation cadence never shifts training randomness.
struct RunStreams {
    Rng env;
    Rng eval;
    Rng act;
    Rng sampler;
    Rng noise;
    Rng epsilon;
    Rng init;
};

RunStreams make_streams(std::uint64_t seed);

/// Linear decay from eps_start to eps_end over the first eps_decay_fraction
/// of the run, then constant.
double epsilon_at(const RunConfig& config, std::uint64_t env_step);

SacConfig sac_config_for(const RunConfig& config, const EnvSpec& spec);
DqnConfig dqn_config_for(const RunConfig& config, const EnvSpec& spec);
TrainSchedule schedule_for(const RunConfig& config);

struct RunSummary {
    std::uint64_t env_steps = 0;
    std::uint64_t episodes = 0;
    TrainCounters counters;
    double final_eval_mean = 0.0;
    std::filesystem::path metrics_path;
};

/// Trains one agent as configured and writes into config.out:
///   config.txt      resolved configuration
///   metrics.csv     one row per evaluation point
///   timing.csv      wall-clock seconds per evaluation point
///   checkpoint.bin  final agent and counters
///   plot.gp         gnuplot script for the learning curve
/// A non-finite loss writes a "# diverged" row and throws NumericError.
RunSummary run_experiment(const RunConfig& config);

} // namespace pseudo_rl
