#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

// Numerical check of the averaged-action argument: a block driven by u1 for
// a fraction p of the horizon and u2 for the rest should end close to the
// state reached by holding the weighted mean p*u1 + (1-p)*u2 throughout.

namespace pseudo_rl::verifier {

using Vec = std::vector<double>;

/// x' = f(x, u) for a smooth vector field.
struct DynamicsSpec {
    std::string name;
    std::size_t state_dim = 0;
    std::size_t action_dim = 0;
    std::function<Vec(const Vec& x, const Vec& u)> f;
};

/// x' = B u with B = (1, -0.5)^T. State-independent and linear in u, so the
/// averaged action reproduces the endpoint exactly.
DynamicsSpec integrator_dynamics();
/// theta'' = 3g/(2l) sin(theta) + 3/(m l^2) u with g = 10, m = l = 1.
DynamicsSpec pendulum_ode();
/// x' = A x + B u + x ⊙ (C u) on R^2 with a scalar action.
DynamicsSpec bilinear_dynamics();
/// "integrator" | "pendulum-ode" | "bilinear"; ConfigError otherwise.
DynamicsSpec dynamics_by_name(const std::string& name);

/// u1 on [0, p*horizon], u2 on (p*horizon, horizon].
struct PiecewiseSchedule {
    Vec u1;
    Vec u2;
    double p = 0.5;
    double horizon = 1.0;
};

/// p*u1 + (1-p)*u2. Throws ConfigError unless 0 < p < 1 and the dims agree.
Vec pseudo_action_of(const PiecewiseSchedule& schedule);

/// Fixed-step RK4 under the schedule with `steps` equal steps. The switch
/// time p*horizon must land on a step boundary (ConfigError otherwise).
Vec rollout_endpoint(const DynamicsSpec& spec, const Vec& x0, const PiecewiseSchedule& schedule,
                     std::size_t steps);
/// Fixed-step RK4 holding `u` for `horizon`.
Vec rollout_endpoint(const DynamicsSpec& spec, const Vec& x0, const Vec& u, double horizon,
                     std::size_t steps);

inline constexpr std::size_t kDefaultSteps = 1024;

/// || endpoint(schedule) - endpoint(constant pseudo-action) ||_2.
double pseudo_action_gap(const DynamicsSpec& spec, const Vec& x0, const PiecewiseSchedule& schedule,
                         std::size_t steps = kDefaultSteps);

/// Nearest fraction k/steps with 0 < k < steps.
double snap_fraction(double p, std::size_t steps);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

inline constexpr double kExactGap = 1e-13;

struct OrderEstimate {
    std::vector<double> abscissa; // horizons or action scales
    std::vector<double> gaps;
    /// Empty when every gap is below kExactGap ("exact").
    std::optional<double> order;
};

/// Gap at each horizon with the schedule's shape (u1, u2, p) fixed, and the
/// fitted slope of log(gap) vs log(horizon). Needs >= 3 horizons.
OrderEstimate scaling_exponent(const DynamicsSpec& spec, const Vec& x0,
                               const PiecewiseSchedule& shape, std::span<const double> horizons,
                               std::size_t steps = kDefaultSteps);

/// Gaps for u1 = u_hat + (1-p) s delta, u2 = u_hat - p s delta (so the
/// pseudo-action stays u_hat) at each scale s, and the slope of log(gap) vs
/// log(s) over the positive scales.
OrderEstimate gap_vs_action_difference(const DynamicsSpec& spec, const Vec& x0, const Vec& u_hat,
                                       const Vec& delta, double p, double horizon,
                                       std::span<const double> scales,
                                       std::size_t steps = kDefaultSteps);

/// |x(n) - x(2n)| / |x(2n) - x(4n)| for RK4 under the schedule; about 16 for
/// a fourth-order integrator. Empty when both differences are at round-off.
std::optional<double> rk4_halving_ratio(const DynamicsSpec& spec, const Vec& x0,
                                        const PiecewiseSchedule& schedule, std::size_t steps);

/// Geometric sequence first, first*ratio, ... of length count.
std::vector<double> geometric(double first, double ratio, std::size_t count);

} // namespace pseudo_rl::verifier
