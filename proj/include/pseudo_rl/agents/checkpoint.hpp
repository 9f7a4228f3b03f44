#pragma once

#include <filesystem>
#include <istream>
#include <ostream>

#include "pseudo_rl/agents/dqn_agent.hpp"
#include "pseudo_rl/agents/sac_agent.hpp"
#include "pseudo_rl/agents/trainer.hpp"

namespace pseudo_rl {

// Checkpoint format, version 1: "PRLCKPT" u32 version, u8 algo (0 sac,
// 1 dqn), the agent config, every parameter matrix, every Adam state
// (moments and step counter) and the trainer counters. Values are stored as
// raw IEEE-754 bits, so save/load is bit-exact.

inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const SacAgent& agent, const TrainCounters& counters, std::ostream& out);
void save_checkpoint(const DqnAgent& agent, const TrainCounters& counters, std::ostream& out);

/// Throw IntegrityError on a tag/version/algorithm mismatch.
SacAgent load_sac_checkpoint(std::istream& in, TrainCounters& counters);
DqnAgent load_dqn_checkpoint(std::istream& in, TrainCounters& counters);

template <typename Agent>
void save_checkpoint_file(const Agent& agent, const TrainCounters& counters,
                          const std::filesystem::path& path);

} // namespace pseudo_rl
