#pragma once

#include <filesystem>
#include <istream>
#include <ostream>

#include "pseudo_rl/replay/replay_buffer.hpp"

namespace pseudo_rl {

// Replay dump format, version 1 (little-endian):
//   "PRLBUF" u32 version
//   u64 transition_count, u64 obs_dim, u8 discrete, u64 action_dim
//   per transition, in buffer order:
//     u64 episode, u64 env_step, f64[obs_dim] obs,
//     f64[action_dim] action (continuous) | u64 action id (discrete),
//     f64 reward, u8 terminal, u8 truncated,
//     u8 decision_aligned, f64[obs_dim] next_obs
// Loading replays every record through ReplayBuffer::push, so a corrupted
// chain is rejected.

inline constexpr std::uint32_t kBufferFormatVersion = 1;

void save_buffer(const ReplayBuffer& buffer, std::ostream& out);
ReplayBuffer load_buffer(std::istream& in);

void save_buffer(const ReplayBuffer& buffer, const std::filesystem::path& path);
ReplayBuffer load_buffer(const std::filesystem::path& path);

} // namespace pseudo_rl
