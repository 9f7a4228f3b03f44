#include "pseudo_rl/nn/tanh_gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pseudo_rl {

namespace {

constexpr double kHalfLogTwoPi = 0.91893853320467274178; // 0.5 * log(2 pi)

double clamp_log_std(double x) { return std::clamp(x, kLogStdMin, kLogStdMax); }

// Largest double below 1; tanh rounds to exactly +-1 once |u| exceeds ~19.
constexpr double kMaxAction = 1.0 - 0x1p-53;

} // namespace

TanhGaussianSample tanh_gaussian_sample(const Matrix& mean, const Matrix& log_std,
                                        const Matrix& noise)
{
    if (!mean.same_shape(log_std) || !mean.same_shape(noise)) {
        throw ConfigError("tanh_gaussian_sample: shapes " + mean.shape_string() + ", " +
                          log_std.shape_string() + ", " + noise.shape_string() + " differ");
    }
    const std::size_t n = mean.rows();
    const std::size_t d = mean.cols();
    TanhGaussianSample s{Matrix(n, d), Matrix(n, d), Matrix(n, 1)};
    for (std::size_t i = 0; i < n; ++i) {
        double lp = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double ls = clamp_log_std(log_std(i, j));
            const double eps = noise(i, j);
            const double u = mean(i, j) + std::exp(ls) * eps;
            const double a = std::clamp(std::tanh(u), -kMaxAction, kMaxAction);
            s.pre_squash(i, j) = u;
            s.action(i, j) = a;
            lp += -0.5 * eps * eps - ls - kHalfLogTwoPi - std::log(1.0 - a * a + kSquashGuard);
        }
        s.log_prob(i, 0) = lp;
    }
    return s;
}

TanhGaussianGrads tanh_gaussian_backward(const TanhGaussianSample& sample, const Matrix& log_std,
                                         const Matrix& noise, const Matrix& grad_action,
                                         const Matrix& grad_log_prob)
{
    const std::size_t n = sample.action.rows();
    const std::size_t d = sample.action.cols();
    TanhGaussianGrads g{Matrix(n, d), Matrix(n, d)};
    for (std::size_t i = 0; i < n; ++i) {
        const double glp = grad_log_prob(i, 0);
        for (std::size_t j = 0; j < d; ++j) {
            const double a = sample.action(i, j);
            const double one_minus = 1.0 - a * a;
            // d action / d u and d (-log(1 - a^2 + guard)) / d u
            const double da_du = one_minus;
            const double dsquash_du = 2.0 * a * one_minus / (one_minus + kSquashGuard);
            const double du = grad_action(i, j) * da_du + glp * dsquash_du;
            g.mean(i, j) = du;
            const double raw = log_std(i, j);
            if (raw >= kLogStdMin && raw <= kLogStdMax) {
                const double sigma = std::exp(raw);
                g.log_std(i, j) = du * sigma * noise(i, j) - glp;
            }
        }
    }
    return g;
}

} // namespace pseudo_rl
