#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pseudo_rl/verifier/repeat_verifier.hpp"

namespace pseudo_rl::verifier {

struct SweepOptions {
    std::vector<std::string> dynamics = {"integrator", "pendulum-ode", "bilinear"};
    double p = 0.5;
    double u1 = 2.0;
    double u2 = -2.0;
    Vec x0 = {0.3, -0.2};
    double max_horizon = 0.4;
    std::size_t horizon_count = 8; // halving each time
    double max_scale = 1.0;
    std::size_t scale_count = 8;
    std::size_t steps = kDefaultSteps;
    double order_low = 1.7;
    double order_high = 2.3;
    double exact_tolerance = 1e-12;
};

struct SweepRow {
    std::string dynamics;
    std::string sweep; // grid | horizon | action-difference
    double p = 0.0;
    Vec u1;
    Vec u2;
    double horizon = 0.0;
    double gap = 0.0;
    std::optional<double> fitted_order; // empty in grid rows and exact sweeps
};

struct BandCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SweepReport {
    double snapped_p = 0.0;
    std::vector<SweepRow> rows;
    std::vector<BandCheck> checks;

    bool all_pass() const;
};

/// Integrator: a 5x5x5 grid of (p, u1, u2), every gap below
/// exact_tolerance, plus a horizon sweep that must come out exact.
/// Other dynamics: horizon and action-difference sweeps whose fitted
/// log-log slopes must fall in [order_low, order_high].
SweepReport verify_appendix_a(const SweepOptions& options);

/// Columns: dynamics,sweep,p,u1,u2,horizon,gap,fitted_order. An exact sweep
/// prints "exact" in the last column.
std::string format_sweep_csv(const SweepReport& report);

} // namespace pseudo_rl::verifier
