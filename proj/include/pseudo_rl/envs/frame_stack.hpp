#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pseudo_rl {

/// Concatenation of the k most recent raw observations, oldest first.
class FrameStack {
public:
    explicit FrameStack(std::size_t k);

    /// Starts an episode: all k slots hold `first`.
    void reset(std::span<const double> first);
    void push(std::span<const double> obs);

    const std::vector<double>& stacked() const noexcept { return data_; }
    std::size_t depth() const noexcept { return k_; }

private:
    std::size_t k_;
    std::size_t raw_dim_ = 0;
    std::vector<double> data_;
};

} // namespace pseudo_rl
