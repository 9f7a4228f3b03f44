#include "pseudo_rl/envs/frame_stack.hpp"

#include <algorithm>

#include "pseudo_rl/core/errors.hpp"

namespace pseudo_rl {

FrameStack::FrameStack(std::size_t k) : k_(k)
{
    if (k_ == 0) throw ConfigError("frame stack length must be at least 1");
}

void FrameStack::reset(std::span<const double> first)
{
    raw_dim_ = first.size();
    data_.clear();
    data_.reserve(k_ * raw_dim_);
    for (std::size_t i = 0; i < k_; ++i) data_.insert(data_.end(), first.begin(), first.end());
}

void FrameStack::push(std::span<const double> obs)
{
    if (obs.size() != raw_dim_) throw ConfigError("FrameStack::push: observation size changed");
    std::rotate(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(raw_dim_), data_.end());
    std::copy(obs.begin(), obs.end(), data_.end() - static_cast<std::ptrdiff_t>(raw_dim_));
}

} // namespace pseudo_rl
