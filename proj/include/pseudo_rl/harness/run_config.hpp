#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pseudo_rl {

enum class Algo { sac, dqn };
enum class RunMode { baseline, pseudo };

const char* to_string(Algo a) noexcept;
const char* to_string(RunMode m) noexcept;

/// Full experiment configuration. Field names double as config-file keys.
/// Defaults follow the published hyper-parameter table except `steps`, which
/// is scaled down for desk-sized runs.
struct RunConfig {
    std::string env = "pendulum";
    Algo algo = Algo::sac;
    RunMode mode = RunMode::pseudo;
    std::size_t repeat = 4;
    std::size_t steps = 100'000;
    std::uint64_t seed = 0;
    std::size_t frame_stack = 4;
    double gamma_env = 0.0;      // 0.99^(1/4), set by defaults_for
    double learning_rate = 0.0;  // 0.001 sac / 0.0003 dqn
    std::size_t batch_size = 0;  // 32 sac / 64 dqn
    double tau = 0.005;
    std::size_t actor_update_freq = 2;
    std::size_t min_replay = 500;
    std::size_t update_every = 4;
    std::size_t hidden_width = 256;
    std::size_t embed_dim = 8;
    double init_alpha = 0.1;
    bool twin_q = false;
    double eps_start = 1.0;
    double eps_end = 0.05;
    double eps_decay_fraction = 0.2;
    bool reward_clip = true;
    std::size_t eval_interval = 2'000;
    std::size_t eval_episodes = 10;
    std::filesystem::path out = "runs/latest";

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Defaults for an algorithm (learning rate, batch size, default task).
RunConfig defaults_for(Algo algo);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Parses flat "key = value" text; '#' starts a comment. Throws ConfigError
/// on malformed lines.
KeyValues parse_key_values(const std::string& text, const std::string& origin);

/// Table defaults for the chosen algorithm, then the file (if any), then
/// `overrides` in order. Unknown keys and out-of-range values throw
/// ConfigError naming the key.
RunConfig parse_config(const std::optional<std::filesystem::path>& file, const KeyValues& overrides);

/// Throws ConfigError on an invalid combination or range.
void validate(const RunConfig& config);

/// "key = value" lines for every field except `out`, in a fixed order. The
/// text parses back to the same config.
std::string to_config_text(const RunConfig& config);

/// All recognized keys, in to_config_text order.
const std::vector<std::string>& config_keys();

} // namespace pseudo_rl
