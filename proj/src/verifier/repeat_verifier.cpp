#include "pseudo_rl/verifier/repeat_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>

#include "pseudo_rl/core/errors.hpp"

namespace pseudo_rl::verifier {

DynamicsSpec integrator_dynamics()
{
    return {"integrator", 2, 1, [](const Vec&, const Vec& u) { return Vec{u[0], -0.5 * u[0]}; }};
}

DynamicsSpec pendulum_ode()
{
    constexpr double g = 10.0;
    constexpr double m = 1.0;
    constexpr double l = 1.0;
    return {"pendulum-ode", 2, 1, [](const Vec& x, const Vec& u) {
                return Vec{x[1], 3.0 * g / (2.0 * l) * std::sin(x[0]) + 3.0 / (m * l * l) * u[0]};
            }};
}

DynamicsSpec bilinear_dynamics()
{
    // A = [[0, 1], [-1, -0.2]], B = (0, 1)^T, C = (0.5, -0.3)^T
    return {"bilinear", 2, 1, [](const Vec& x, const Vec& u) {
                const double cu0 = 0.5 * u[0];
                const double cu1 = -0.3 * u[0];
                return Vec{x[1] + x[0] * cu0, -x[0] - 0.2 * x[1] + u[0] + x[1] * cu1};
            }};
}

DynamicsSpec dynamics_by_name(const std::string& name)
{
    if (name == "integrator") return integrator_dynamics();
    if (name == "pendulum-ode") return pendulum_ode();
    if (name == "bilinear") return bilinear_dynamics();
    throw ConfigError("unknown dynamics '" + name + "' (expected integrator, pendulum-ode or bilinear)");
}

Vec pseudo_action_of(const PiecewiseSchedule& s)
{
    if (!(s.p > 0.0 && s.p < 1.0)) throw ConfigError("schedule fraction p must lie in (0, 1)");
    if (s.u1.size() != s.u2.size()) throw ConfigError("schedule actions differ in dimension");
    Vec u(s.u1.size());
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = s.p * s.u1[j] + (1.0 - s.p) * s.u2[j];
    return u;
}

namespace {

void axpy(Vec& y, double a, const Vec& x)
{
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void rk4_step(const DynamicsSpec& spec, Vec& x, const Vec& u, double dt)
{
    const Vec k1 = spec.f(x, u);
    Vec tmp = x;
    axpy(tmp, 0.5 * dt, k1);
    const Vec k2 = spec.f(tmp, u);
    tmp = x;
    axpy(tmp, 0.5 * dt, k2);
    const Vec k3 = spec.f(tmp, u);
    tmp = x;
    axpy(tmp, dt, k3);
    const Vec k4 = spec.f(tmp, u);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

void check_dims(const DynamicsSpec& spec, const Vec& x0, const Vec& u)
{
    if (x0.size() != spec.state_dim || u.size() != spec.action_dim) {
        throw ConfigError(spec.name + ": state/action dimension mismatch");
    }
}

double distance(const Vec& a, const Vec& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

} // namespace

Vec rollout_endpoint(const DynamicsSpec& spec, const Vec& x0, const PiecewiseSchedule& schedule,
                     std::size_t steps)
{
    pseudo_action_of(schedule);
    check_dims(spec, x0, schedule.u1);
    if (steps == 0 || !(schedule.horizon > 0.0)) throw ConfigError("rollout: need steps > 0, horizon > 0");
    const double switch_at = schedule.p * static_cast<double>(steps);
    const double rounded = std::round(switch_at);
    if (std::abs(switch_at - rounded) > 1e-9 * static_cast<double>(steps)) {
        throw ConfigError("rollout: p * horizon is not on a step boundary (p = " +
                          std::to_string(schedule.p) + ", steps = " + std::to_string(steps) + ")");
    }
    const auto n_first = static_cast<std::size_t>(rounded);
    const double dt = schedule.horizon / static_cast<double>(steps);
    Vec x = x0;
    for (std::size_t k = 0; k < steps; ++k) rk4_step(spec, x, k < n_first ? schedule.u1 : schedule.u2, dt);
    return x;
}

Vec rollout_endpoint(const DynamicsSpec& spec, const Vec& x0, const Vec& u, double horizon,
                     std::size_t steps)
{
    check_dims(spec, x0, u);
    if (steps == 0 || !(horizon > 0.0)) throw ConfigError("rollout: need steps > 0, horizon > 0");
    const double dt = horizon / static_cast<double>(steps);
    Vec x = x0;
    for (std::size_t k = 0; k < steps; ++k) rk4_step(spec, x, u, dt);
    return x;
}

double pseudo_action_gap(const DynamicsSpec& spec, const Vec& x0, const PiecewiseSchedule& schedule,
                         std::size_t steps)
{
    const Vec u_hat = pseudo_action_of(schedule);
    const Vec a = rollout_endpoint(spec, x0, schedule, steps);
    const Vec b = rollout_endpoint(spec, x0, u_hat, schedule.horizon, steps);
    return distance(a, b);
}

double snap_fraction(double p, std::size_t steps)
{
    if (steps < 2) throw ConfigError("snap_fraction: need at least 2 steps");
    double k = std::round(p * static_cast<double>(steps));
    k = std::clamp(k, 1.0, static_cast<double>(steps - 1));
    return k / static_cast<double>(steps);
}

double log_log_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("log_log_slope: need >= 2 points");
    double mx = 0.0;
    double my = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

namespace {

template <typename Body>
void parallel_over(std::int64_t n, Body body)
{
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(verifier_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

std::optional<double> fit(std::span<const double> x, std::span<const double> gaps)
{
    std::vector<double> fx;
    std::vector<double> fy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (gaps[i] >= kExactGap && x[i] > 0.0) {
            fx.push_back(x[i]);
            fy.push_back(gaps[i]);
        }
    }
    if (fx.size() < 2) return std::nullopt;
    return log_log_slope(fx, fy);
}

} // namespace

OrderEstimate scaling_exponent(const DynamicsSpec& spec, const Vec& x0,
                               const PiecewiseSchedule& shape, std::span<const double> horizons,
                               std::size_t steps)
{
    if (horizons.size() < 3) throw ConfigError("scaling_exponent: need at least 3 horizons");
    OrderEstimate est;
    est.abscissa.assign(horizons.begin(), horizons.end());
    est.gaps.resize(horizons.size());
    const auto n = static_cast<std::int64_t>(horizons.size());
    parallel_over(n, [&](std::size_t i) {
        PiecewiseSchedule s = shape;
        s.horizon = horizons[i];
        est.gaps[i] = pseudo_action_gap(spec, x0, s, steps);
    });
    est.order = fit(est.abscissa, est.gaps);
    return est;
}

OrderEstimate gap_vs_action_difference(const DynamicsSpec& spec, const Vec& x0, const Vec& u_hat,
                                       const Vec& delta, double p, double horizon,
                                       std::span<const double> scales, std::size_t steps)
{
    if (u_hat.size() != delta.size()) throw ConfigError("gap_vs_action_difference: dim mismatch");
    OrderEstimate est;
    est.abscissa.assign(scales.begin(), scales.end());
    est.gaps.resize(scales.size());
    const auto n = static_cast<std::int64_t>(scales.size());
    parallel_over(n, [&](std::size_t i) {
        const double s = scales[i];
        PiecewiseSchedule sched{u_hat, u_hat, p, horizon};
        for (std::size_t j = 0; j < u_hat.size(); ++j) {
            sched.u1[j] = u_hat[j] + (1.0 - p) * s * delta[j];
            sched.u2[j] = u_hat[j] - p * s * delta[j];
        }
        est.gaps[i] = pseudo_action_gap(spec, x0, sched, steps);
    });
    est.order = fit(est.abscissa, est.gaps);
    return est;
}

std::optional<double> rk4_halving_ratio(const DynamicsSpec& spec, const Vec& x0,
                                        const PiecewiseSchedule& schedule, std::size_t steps)
{
    const Vec a = rollout_endpoint(spec, x0, schedule, steps);
    const Vec b = rollout_endpoint(spec, x0, schedule, 2 * steps);
    const Vec c = rollout_endpoint(spec, x0, schedule, 4 * steps);
    const double e1 = distance(a, b);
    const double e2 = distance(b, c);
    if (e1 < kExactGap && e2 < kExactGap) return std::nullopt;
    return e1 / e2;
}

std::vector<double> geometric(double first, double ratio, std::size_t count)
{
    std::vector<double> out(count);
    double v = first;
    for (auto& x : out) {
        x = v;
        v *= ratio;
    }
    return out;
}

} // namespace pseudo_rl::verifier
