#include "pseudo_rl/nn/gradient_check.hpp"

#include <algorithm>
#include <cmath>

namespace pseudo_rl {

namespace {

double checked(double v)
{
    if (!std::isfinite(v)) throw NumericError("gradient_check: loss is not finite");
    return v;
}

} // namespace

std::vector<double> numeric_gradient(const std::function<double(std::span<const double>)>& loss,
                                     std::span<const double> point, double fd_step)
{
    std::vector<double> x(point.begin(), point.end());
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = x[i];
        x[i] = saved + fd_step;
        const double up = checked(loss(x));
        x[i] = saved - fd_step;
        const double down = checked(loss(x));
        x[i] = saved;
        g[i] = (up - down) / (2.0 * fd_step);
    }
    return g;
}

double gradient_check(const std::function<double(std::span<const double>)>& loss,
                      std::span<const double> point, std::span<const double> analytic,
                      double fd_step)
{
    if (point.size() != analytic.size()) {
        throw ConfigError("gradient_check: gradient length does not match parameter count");
    }
    checked(loss(point));
    const auto numeric = numeric_gradient(loss, point, fd_step);
    double worst = 0.0;
    for (std::size_t i = 0; i < numeric.size(); ++i) {
        const double a = analytic[i];
        const double c = numeric[i];
        const double scale = std::max({std::abs(a), std::abs(c), 1e-8});
        worst = std::max(worst, std::abs(a - c) / scale);
    }
    return worst;
}

double gradient_check(const std::function<LossAndGrad(const MlpParams&)>& loss_fn,
                      const MlpParams& params, double fd_step)
{
    const auto at_point = loss_fn(params);
    const auto analytic = flatten(at_point.grad);
    MlpParams probe = params;
    auto scalar = [&](std::span<const double> flat) {
        unflatten(flat, probe);
        return loss_fn(probe).loss;
    };
    const auto point = flatten(params);
    return gradient_check(scalar, point, analytic, fd_step);
}

} // namespace pseudo_rl
