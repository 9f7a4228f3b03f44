#include "pseudo_rl/verifier/sweep.hpp"

#include <cstdio>

#include "pseudo_rl/core/errors.hpp"

namespace pseudo_rl::verifier {

bool SweepReport::all_pass() const
{
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

namespace {

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string join(const Vec& v)
{
    std::string s;
    for (double x : v) s += (s.empty() ? "" : ";") + fmt(x);
    return s;
}

void integrator_grid(const SweepOptions& o, const DynamicsSpec& spec, SweepReport& r)
{
    const double ps[] = {0.125, 0.25, 0.5, 0.625, 0.875};
    const double us[] = {-2.0, -1.0, 0.0, 0.5, 2.0};
    double worst = 0.0;
    for (double p : ps) {
        const double snapped = snap_fraction(p, o.steps);
        for (double a : us) {
            for (double b : us) {
                const PiecewiseSchedule s{{a}, {b}, snapped, o.max_horizon};
                const double gap = pseudo_action_gap(spec, o.x0, s, o.steps);
                worst = std::max(worst, gap);
                r.rows.push_back({spec.name, "grid", snapped, {a}, {b}, o.max_horizon, gap, {}});
            }
        }
    }
    r.checks.push_back({spec.name + " grid gap < " + fmt(o.exact_tolerance), worst < o.exact_tolerance,
                        "max gap " + fmt(worst)});
}

void record(const std::string& label, const SweepOptions& o, const OrderEstimate& est,
            bool expect_exact, SweepReport& r)
{
    if (expect_exact) {
        r.checks.push_back({label + " exact", !est.order.has_value(),
                            est.order ? "fitted order " + fmt(*est.order) : "all gaps below 1e-13"});
        return;
    }
    const bool ok = est.order && *est.order >= o.order_low && *est.order <= o.order_high;
    r.checks.push_back({label + " order in [" + fmt(o.order_low) + ", " + fmt(o.order_high) + "]",
                        ok, est.order ? "fitted order " + fmt(*est.order) : "no slope (exact)"});
}

} // namespace

SweepReport verify_appendix_a(const SweepOptions& o)
{
    if (o.horizon_count < 3 || o.scale_count < 3) throw ConfigError("sweeps need at least 3 points");
    SweepReport r;
    r.snapped_p = snap_fraction(o.p, o.steps);
    const double p = r.snapped_p;
    for (const auto& name : o.dynamics) {
        const DynamicsSpec spec = dynamics_by_name(name);
        const bool linear_exact = name == "integrator";
        if (linear_exact) integrator_grid(o, spec, r);

        const PiecewiseSchedule shape{{o.u1}, {o.u2}, p, o.max_horizon};
        const auto horizons = geometric(o.max_horizon, 0.5, o.horizon_count);
        const auto h_est = scaling_exponent(spec, o.x0, shape, horizons, o.steps);
        for (std::size_t i = 0; i < horizons.size(); ++i) {
            r.rows.push_back({name, "horizon", p, {o.u1}, {o.u2}, horizons[i], h_est.gaps[i], h_est.order});
        }
        record(name + " gap-vs-horizon", o, h_est, linear_exact, r);

        const Vec u_hat = pseudo_action_of(shape);
        const Vec delta = {o.u1 - o.u2};
        const auto scales = geometric(o.max_scale, 0.5, o.scale_count);
        const auto s_est =
            gap_vs_action_difference(spec, o.x0, u_hat, delta, p, o.max_horizon, scales, o.steps);
        for (std::size_t i = 0; i < scales.size(); ++i) {
            const double s = scales[i];
            r.rows.push_back({name, "action-difference", p, {u_hat[0] + (1.0 - p) * s * delta[0]},
                              {u_hat[0] - p * s * delta[0]}, o.max_horizon, s_est.gaps[i], s_est.order});
        }
        record(name + " gap-vs-action-difference", o, s_est, linear_exact, r);
    }
    return r;
}

std::string format_sweep_csv(const SweepReport& report)
{
    std::string out = "dynamics,sweep,p,u1,u2,horizon,gap,fitted_order\n";
    for (const auto& row : report.rows) {
        std::string order;
        if (row.fitted_order) {
            order = fmt(*row.fitted_order);
        } else if (row.sweep != "grid") {
            order = "exact";
        }
        out += row.dynamics + "," + row.sweep + "," + fmt(row.p) + "," + join(row.u1) + "," +
               join(row.u2) + "," + fmt(row.horizon) + "," + fmt(row.gap) + "," + order + "\n";
    }
    return out;
}

} // namespace pseudo_rl::verifier
