#include <doctest.h>

#include <array>
#include <cmath>

#include "pseudo_rl/core/errors.hpp"
#include "pseudo_rl/core/rng.hpp"
#include "pseudo_rl/verifier/repeat_verifier.hpp"
#include "pseudo_rl/verifier/sweep.hpp"

using namespace pseudo_rl;
using namespace pseudo_rl::verifier;

namespace {

// Hand-written RK4 for theta'' = 15 sin(theta) + 3u, control switching at
// step k_switch.
std::array<double, 2> pendulum_rk4(std::array<double, 2> x, double u1, double u2, double horizon,
                                   std::size_t steps, std::size_t k_switch)
{
    const double h = horizon / static_cast<double>(steps);
    auto f = [](std::array<double, 2> s, double u) {
        return std::array<double, 2>{s[1], 15.0 * std::sin(s[0]) + 3.0 * u};
    };
    for (std::size_t k = 0; k < steps; ++k) {
        const double u = k < k_switch ? u1 : u2;
        const auto k1 = f(x, u);
        const auto k2 = f({x[0] + 0.5 * h * k1[0], x[1] + 0.5 * h * k1[1]}, u);
        const auto k3 = f({x[0] + 0.5 * h * k2[0], x[1] + 0.5 * h * k2[1]}, u);
        const auto k4 = f({x[0] + h * k3[0], x[1] + h * k3[1]}, u);
        for (int i = 0; i < 2; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return x;
}

DynamicsSpec zero_dynamics()
{
    return {"zero", 2, 1, [](const Vec& x, const Vec&) { return Vec(x.size(), 0.0); }};
}

} // namespace

TEST_CASE("pseudo action of a schedule")
{
    CHECK(pseudo_action_of({{0.7}, {0.7}, 0.3, 1.0}) == Vec{0.7});
    CHECK(pseudo_action_of({{1.0}, {-1.0}, 0.5, 1.0}) == Vec{0.0});
    CHECK(pseudo_action_of({{4.0}, {0.0}, 0.25, 1.0})[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(pseudo_action_of({{1.0}, {1.0}, 0.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(pseudo_action_of({{1.0}, {1.0}, 1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(pseudo_action_of({{1.0}, {1.0, 2.0}, 0.5, 1.0}), ConfigError);
}

TEST_CASE("zero dynamics leave the state alone")
{
    const Vec x0 = {0.4, -1.1};
    CHECK(rollout_endpoint(zero_dynamics(), x0, PiecewiseSchedule{{2.0}, {-1.0}, 0.5, 0.3}, 64) == x0);
}

TEST_CASE("integrator endpoints are exact for any schedule")
{
    const auto spec = integrator_dynamics();
    for (double p : {0.125, 0.25, 0.5, 0.75}) {
        for (double u1 : {-2.0, 0.0, 1.5}) {
            for (double u2 : {-1.0, 2.0}) {
                for (double horizon : {0.01, 0.2, 3.0}) {
                    CHECK(pseudo_action_gap(spec, {0.3, -0.2}, {{u1}, {u2}, p, horizon}) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("identical controls give no gap")
{
    for (const char* name : {"integrator", "pendulum-ode", "bilinear"}) {
        CHECK(pseudo_action_gap(dynamics_by_name(name), {0.3, -0.2}, {{0.8}, {0.8}, 0.25, 0.4}) < 1e-12);
    }
    CHECK_THROWS_AS(dynamics_by_name("lorenz"), ConfigError);
}

TEST_CASE("gap matches an independent double rollout")
{
    const auto spec = pendulum_ode();
    for (double horizon : {0.05, 0.2, 0.4}) {
        const PiecewiseSchedule s{{2.0}, {-2.0}, 0.25, horizon};
        const auto a = pendulum_rk4({0.3, -0.2}, 2.0, -2.0, horizon, 256, 64);
        const auto b = pendulum_rk4({0.3, -0.2}, -1.0, -1.0, horizon, 256, 0);
        const double expected = std::hypot(a[0] - b[0], a[1] - b[1]);
        CHECK(pseudo_action_gap(spec, {0.3, -0.2}, s, 256) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("misaligned switch times are rejected")
{
    const auto spec = pendulum_ode();
    CHECK_THROWS_AS(rollout_endpoint(spec, {0.0, 0.0}, PiecewiseSchedule{{1.0}, {0.0}, 0.3, 1.0}, 8),
                    ConfigError);
    CHECK(snap_fraction(0.3, 8) == 0.25);
    CHECK(snap_fraction(0.001, 8) == 0.125);
    CHECK(snap_fraction(0.999, 8) == 0.875);
}

TEST_CASE("rk4 halving ratio is near sixteen")
{
    for (const char* name : {"pendulum-ode", "bilinear"}) {
        const auto ratio = rk4_halving_ratio(dynamics_by_name(name), {0.3, -0.2},
                                             {{2.0}, {-2.0}, 0.5, 1.0}, 8);
        REQUIRE(ratio.has_value());
        CHECK(*ratio >= 10.0);
        CHECK(*ratio <= 22.0);
    }
    CHECK_FALSE(rk4_halving_ratio(integrator_dynamics(), {0.3, -0.2}, {{2.0}, {-2.0}, 0.5, 1.0}, 8)
                    .has_value());
}

TEST_CASE("swapping the segments leaves the averaged action unchanged")
{
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        const double p = static_cast<double>(1 + rng.uniform_index(7)) / 8.0;
        const double u1 = rng.uniform(-2, 2);
        const double u2 = rng.uniform(-2, 2);
        const auto a = pseudo_action_of({{u1}, {u2}, p, 0.2});
        const auto b = pseudo_action_of({{u2}, {u1}, 1.0 - p, 0.2});
        CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-14));
        const auto spec = bilinear_dynamics();
        const auto ea = rollout_endpoint(spec, {0.3, -0.2}, a, 0.2, 64);
        const auto eb = rollout_endpoint(spec, {0.3, -0.2}, b, 0.2, 64);
        CHECK(std::hypot(ea[0] - eb[0], ea[1] - eb[1]) < 1e-13);
    }
}

TEST_CASE("log-log slope")
{
    const auto x = geometric(1.0, 0.5, 6);
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * v * v * v);
    CHECK(log_log_slope(x, y) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("gap shrinks quadratically with the horizon")
{
    const auto horizons = geometric(0.4, 0.5, 8);
    for (const char* name : {"pendulum-ode", "bilinear"}) {
        const auto est = scaling_exponent(dynamics_by_name(name), {0.3, -0.2}, {{2.0}, {-2.0}, 0.5, 1.0},
                                          horizons);
        REQUIRE(est.order.has_value());
        CHECK(*est.order >= 1.7);
        CHECK(*est.order <= 2.3);
    }
    const auto exact = scaling_exponent(integrator_dynamics(), {0.3, -0.2}, {{2.0}, {-2.0}, 0.5, 1.0},
                                        horizons);
    CHECK_FALSE(exact.order.has_value());
}

TEST_CASE("gap vanishes with the action difference")
{
    const auto scales = geometric(1.0, 0.5, 8);
    const auto est = gap_vs_action_difference(pendulum_ode(), {0.3, -0.2}, {0.0}, {2.0}, 0.5, 0.2, scales);
    for (std::size_t i = 1; i < est.gaps.size(); ++i) CHECK(est.gaps[i] < est.gaps[i - 1]);
    const std::vector<double> zero = {0.0};
    const auto at_zero = gap_vs_action_difference(pendulum_ode(), {0.3, -0.2}, {0.0}, {2.0}, 0.5, 0.2, zero);
    CHECK(at_zero.gaps.at(0) < 1e-12);

    const auto linear = gap_vs_action_difference(integrator_dynamics(), {0.3, -0.2}, {0.5}, {2.0}, 0.25, 0.2,
                                                 scales);
    for (double g : linear.gaps) CHECK(g < 1e-12);
    CHECK_FALSE(linear.order.has_value());
}

TEST_CASE("sweep report layout")
{
    SweepOptions o;
    o.dynamics = {"integrator", "bilinear"};
    o.horizon_count = 4;
    o.scale_count = 4;
    o.p = 0.3;
    o.steps = 64;
    const auto report = verify_appendix_a(o);
    CHECK(report.snapped_p == 0.296875);
    const auto csv = format_sweep_csv(report);
    CHECK(csv.rfind("dynamics,sweep,p,u1,u2,horizon,gap,fitted_order\n", 0) == 0);
    CHECK(csv.find("exact") != std::string::npos);
    bool grid_pass = false;
    for (const auto& c : report.checks)
        if (c.name.find("integrator") != std::string::npos && c.name.find("grid") != std::string::npos)
            grid_pass = c.pass;
    CHECK(grid_pass);
}
