#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pseudo_rl/nn/mlp.hpp"

namespace pseudo_rl {

/// Largest |analytic - central difference| / max(|analytic|, |central|, 1e-8)
/// over every coordinate of `point`. `loss` must be deterministic; a
/// non-finite loss value throws NumericError.
double gradient_check(const std::function<double(std::span<const double>)>& loss,
                      std::span<const double> point, std::span<const double> analytic,
                      double fd_step);

/// Loss with its analytic gradient, both evaluated at the given parameters.
struct LossAndGrad {
    double loss = 0.0;
    MlpParams grad;
};

double gradient_check(const std::function<LossAndGrad(const MlpParams&)>& loss_fn,
                      const MlpParams& params, double fd_step);

/// Central-difference gradient of `loss` at `point`.
std::vector<double> numeric_gradient(const std::function<double(std::span<const double>)>& loss,
                                     std::span<const double> point, double fd_step);

} // namespace pseudo_rl
