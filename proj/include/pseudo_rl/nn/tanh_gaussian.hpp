#pragma once

#include "pseudo_rl/core/matrix.hpp"

namespace pseudo_rl {

inline constexpr double kLogStdMin = -10.0;
inline constexpr double kLogStdMax = 2.0;
/// Added inside log(1 - tanh^2(u) + guard) so saturated samples stay finite.
inline constexpr double kSquashGuard = 1e-6;

/// Reparameterized sample of a tanh-squashed diagonal Gaussian, one row per
/// batch entry.
struct TanhGaussianSample {
    Matrix pre_squash; // mean + std * noise
    Matrix action;     // tanh(pre_squash), in (-1, 1)
    Matrix log_prob;   // n x 1, squash-corrected log density of `action`
};

/// Row-wise sample. log_std is clamped to [kLogStdMin, kLogStdMax].
TanhGaussianSample tanh_gaussian_sample(const Matrix& mean, const Matrix& log_std,
                                        const Matrix& noise);

struct TanhGaussianGrads {
    Matrix mean;
    Matrix log_std; // w.r.t. the unclamped input; zero where the clamp is active
};

/// Pulls d loss/d action and d loss/d log_prob back to the distribution
/// parameters, holding `noise` fixed.
TanhGaussianGrads tanh_gaussian_backward(const TanhGaussianSample& sample, const Matrix& log_std,
                                         const Matrix& noise, const Matrix& grad_action,
                                         const Matrix& grad_log_prob);

} // namespace pseudo_rl
