#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pseudo_rl/harness/compare.hpp"
#include "pseudo_rl/harness/experiment.hpp"
#include "pseudo_rl/harness/run_config.hpp"
#include "pseudo_rl/verifier/sweep.hpp"

namespace {

using namespace pseudo_rl;

struct TrainArgs {
    std::optional<std::string> env;
    std::optional<std::string> algo;
    std::optional<std::string> mode;
    std::optional<std::string> repeat;
    std::optional<std::string> seed;
    std::optional<std::string> steps;
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::vector<std::string> set;
};

int run_train(const TrainArgs& a)
{
    KeyValues overrides;
    for (const auto& kv : a.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    const std::pair<const char*, const std::optional<std::string>*> flags[] = {
        {"env", &a.env},       {"algo", &a.algo},   {"mode", &a.mode}, {"repeat", &a.repeat},
        {"seed", &a.seed},     {"steps", &a.steps}, {"out", &a.out},
    };
    for (const auto& [key, value] : flags)
        if (*value) overrides.emplace_back(key, **value);

    std::optional<std::filesystem::path> file;
    if (a.config) file = *a.config;
    const RunConfig config = parse_config(file, overrides);
    std::cout << "training " << config.env << " " << to_string(config.algo) << " "
              << to_string(config.mode) << " T=" << config.repeat << " seed=" << config.seed
              << " steps=" << config.steps << " -> " << config.out.string() << "\n";
    const auto summary = run_experiment(config);
    std::cout << "done: " << summary.episodes << " episodes, " << summary.counters.q_updates
              << " q updates, " << summary.counters.actor_updates
              << " actor updates, final eval return " << summary.final_eval_mean << "\n";
    return 0;
}

int run_verify(const verifier::SweepOptions& o, const std::optional<std::string>& csv_path)
{
    const auto report = verifier::verify_appendix_a(o);
    if (report.snapped_p != o.p) {
        std::fprintf(stderr, "p snapped from %.10g to %.10g (step boundary at %zu steps)\n", o.p,
                     report.snapped_p, o.steps);
    }
    const auto csv = verifier::format_sweep_csv(report);
    if (csv_path) {
        std::ofstream out(*csv_path);
        out << csv;
        if (!out) throw IntegrityError("failed writing " + *csv_path);
    } else {
        std::cout << csv;
    }
    for (const auto& c : report.checks) {
        std::fprintf(stderr, "%s %s (%s)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    }
    return report.all_pass() ? 0 : 1;
}

int run_compare(const std::string& group, const std::vector<std::string>& csvs,
                const std::optional<std::string>& csv_out)
{
    std::vector<std::string> keys;
    std::stringstream ss(group);
    for (std::string k; std::getline(ss, k, ',');)
        if (!k.empty()) keys.push_back(k);
    std::vector<std::filesystem::path> paths(csvs.begin(), csvs.end());
    const auto groups = compare_runs(paths, keys);
    std::cout << format_summary_text(groups);
    if (csv_out) {
        std::ofstream out(*csv_out);
        out << format_summary_csv(groups);
        if (!out) throw IntegrityError("failed writing " + *csv_out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"pseudo-action replay experiments"};
    app.require_subcommand(1);

    TrainArgs train;
    auto* t = app.add_subcommand("train", "train one agent and write metrics");
    t->add_option("--env", train.env, "pendulum | pushbar | integrator");
    t->add_option("--algo", train.algo, "sac | dqn");
    t->add_option("--mode", train.mode, "baseline | pseudo");
    t->add_option("--repeat", train.repeat, "action repeat T");
    t->add_option("--seed", train.seed, "master seed");
    t->add_option("--steps", train.steps, "environment steps");
    t->add_option("--config", train.config, "key = value config file");
    t->add_option("--out", train.out, "output directory");
    t->add_option("--set", train.set, "extra key=value override (repeatable)");

    verifier::SweepOptions sweep;
    std::optional<std::string> sweep_csv;
    auto* v = app.add_subcommand("verify-appendix-a", "pseudo-action endpoint gap sweeps");
    v->add_option("--dynamics", sweep.dynamics, "integrator, pendulum-ode, bilinear")->delimiter(',');
    v->add_option("--p", sweep.p, "fraction of the horizon on u1");
    v->add_option("--u1", sweep.u1);
    v->add_option("--u2", sweep.u2);
    v->add_option("--x0", sweep.x0, "initial state")->delimiter(',');
    v->add_option("--horizon", sweep.max_horizon, "largest horizon");
    v->add_option("--horizon-count", sweep.horizon_count);
    v->add_option("--scale-count", sweep.scale_count);
    v->add_option("--rk4-steps", sweep.steps, "integration steps per horizon");
    v->add_option("--csv", sweep_csv, "write the table here instead of stdout");

    std::string group = "mode,repeat";
    std::vector<std::string> csvs;
    std::optional<std::string> compare_csv;
    auto* c = app.add_subcommand("compare", "summarize final returns across runs");
    c->add_option("--group", group, "comma-separated config keys");
    c->add_option("--csv", compare_csv, "also write the summary as CSV");
    c->add_option("metrics", csvs, "metrics.csv files")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*t) return run_train(train);
        if (*v) return run_verify(sweep, sweep_csv);
        return run_compare(group, csvs, compare_csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
