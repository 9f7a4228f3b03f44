#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pseudo_rl/core/matrix.hpp"
#include "pseudo_rl/core/rng.hpp"
#include "pseudo_rl/replay/replay_buffer.hpp"

namespace pseudo_rl {

/// Q-training rows built from windows of `repeat` consecutive env steps.
/// Row i: state s_i, reward sum over the window, next state s_{i+T},
/// bootstrap mask (0 when the window ends in a terminal) and discount γ^T.
/// Continuous tasks carry the averaged action; discrete tasks carry the raw
/// id window, since embeddings are averaged inside the agent.
struct PseudoBatch {
    SampleMode mode = SampleMode::pseudo;
    std::size_t repeat = 1;
    Matrix states;                      // n x obs
    Matrix actions;                     // n x action_dim (continuous only)
    std::vector<std::size_t> action_ids; // n x repeat, row-major (discrete only)
    Matrix rewards;                     // n x repeat, per env step
    std::vector<double> reward_sum;
    Matrix next_states;
    std::vector<double> bootstrap_mask;
    std::vector<double> discount;
    std::vector<std::uint8_t> is_canonical;

    std::size_t size() const noexcept { return reward_sum.size(); }
    bool discrete() const noexcept { return !action_ids.empty(); }
    std::span<const std::size_t> window(std::size_t row) const
    {
        return std::span<const std::size_t>(action_ids).subspan(row * repeat, repeat);
    }
};

/// Componentwise mean of equal-length action vectors. Computed as
/// a_0 + (1/T) * sum(a_t - a_0) so a window of identical actions returns that
/// action bit-for-bit. Throws ConfigError on an empty list or ragged input.
std::vector<double> pseudo_action_continuous(std::span<const std::vector<double>> actions);

/// Assembles one batch row per start, in order.
PseudoBatch assemble_batch(const ReplayBuffer& buffer, std::span<const WindowStart> starts,
                           std::size_t repeat, SampleMode mode, double gamma_env);

/// Uniform sampling with replacement over the valid starts for `mode`.
/// Throws InsufficientDataError when there are none.
PseudoBatch sample_batch(const ReplayBuffer& buffer, std::size_t n, std::size_t repeat,
                         SampleMode mode, double gamma_env, Rng& rng);

/// Anything the trainer can draw Q-training batches from.
class BatchSource {
public:
    virtual ~BatchSource() = default;
    /// Number of distinct rows currently available in `mode`.
    virtual std::size_t available(SampleMode mode) const = 0;
    virtual PseudoBatch sample(std::size_t n, SampleMode mode, Rng& rng) = 0;
};

/// BatchSource over a ReplayBuffer with a fixed repeat length.
class ReplaySampler final : public BatchSource {
public:
    ReplaySampler(const ReplayBuffer& buffer, std::size_t repeat, double gamma_env)
        : buffer_(buffer), repeat_(repeat), gamma_env_(gamma_env)
    {
    }

    std::size_t available(SampleMode mode) const override
    {
        return buffer_.window_starts(repeat_, mode).size();
    }
    PseudoBatch sample(std::size_t n, SampleMode mode, Rng& rng) override
    {
        return sample_batch(buffer_, n, repeat_, mode, gamma_env_, rng);
    }

private:
    const ReplayBuffer& buffer_;
    std::size_t repeat_;
    double gamma_env_;
};

} // namespace pseudo_rl
