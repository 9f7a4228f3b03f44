#include "pseudo_rl/harness/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "pseudo_rl/agents/checkpoint.hpp"
#include "pseudo_rl/core/errors.hpp"
#include "pseudo_rl/envs/rollout.hpp"
#include "pseudo_rl/harness/evaluate.hpp"
#include "pseudo_rl/harness/metrics.hpp"
#include "pseudo_rl/replay/pseudo_batch.hpp"
#include "pseudo_rl/replay/replay_buffer.hpp"

namespace pseudo_rl {

RunStreams make_streams(std::uint64_t seed)
{
    const Rng master(seed);
    return {master.fork("env"),     master.fork("eval"),    master.fork("act"),
            master.fork("sampler"), master.fork("noise"),   master.fork("epsilon"),
            master.fork("init")};
}

double epsilon_at(const RunConfig& c, std::uint64_t env_step)
{
    const double horizon = c.eps_decay_fraction * static_cast<double>(c.steps);
    const double frac = horizon > 0.0 ? static_cast<double>(env_step) / horizon : 1.0;
    if (frac >= 1.0) return c.eps_end;
    return c.eps_start + (c.eps_end - c.eps_start) * frac;
}

SacConfig sac_config_for(const RunConfig& c, const EnvSpec& spec)
{
    if (spec.is_discrete()) throw ConfigError("sac needs a continuous-action environment");
    SacConfig s;
    s.state_dim = spec.obs_dim * c.frame_stack;
    s.action_dim = spec.action_dim();
    s.action_scale = spec.action_bound();
    s.hidden_width = c.hidden_width;
    s.learning_rate = c.learning_rate;
    s.init_alpha = c.init_alpha;
    s.twin_q = c.twin_q;
    return s;
}

DqnConfig dqn_config_for(const RunConfig& c, const EnvSpec& spec)
{
    if (!spec.is_discrete()) throw ConfigError("dqn needs a discrete-action environment");
    DqnConfig d;
    d.state_dim = spec.obs_dim * c.frame_stack;
    d.n_actions = spec.action_count();
    d.embed_dim = c.embed_dim;
    d.hidden_width = c.hidden_width;
    d.learning_rate = c.learning_rate;
    d.reward_clip = c.reward_clip;
    return d;
}

TrainSchedule schedule_for(const RunConfig& c)
{
    TrainSchedule s;
    s.q_mode = c.mode == RunMode::pseudo ? SampleMode::pseudo : SampleMode::canonical;
    s.batch_size = c.batch_size;
    s.update_every = c.update_every;
    s.actor_update_freq = c.actor_update_freq;
    s.min_replay = c.min_replay;
    s.tau = c.tau;
    return s;
}

namespace {

struct SacOps {
    static SacAgent make(const RunConfig& c, const EnvSpec& spec, Rng& init)
    {
        return make_sac_agent(sac_config_for(c, spec), init);
    }
    static Action explore(const SacAgent& a, std::span<const double> s, const RunConfig&,
                          std::uint64_t, RunStreams& rs)
    {
        return sac_act(a, s, true, rs.act);
    }
    static Action greedy(const SacAgent& a, std::span<const double> s)
    {
        Rng unused;
        return sac_act(a, s, false, unused);
    }
    static void fill(MetricsRow& row, const SacAgent& a, const RunConfig&, std::uint64_t,
                     double policy_loss_mean, bool have_policy)
    {
        if (have_policy) row.policy_loss = policy_loss_mean;
        row.alpha = a.alpha();
    }
};

struct DqnOps {
    static DqnAgent make(const RunConfig& c, const EnvSpec& spec, Rng& init)
    {
        return make_dqn_agent(dqn_config_for(c, spec), init);
    }
    static Action explore(const DqnAgent& a, std::span<const double> s, const RunConfig& c,
                          std::uint64_t step, RunStreams& rs)
    {
        return dqn_act(a, s, epsilon_at(c, step), rs.epsilon);
    }
    static Action greedy(const DqnAgent& a, std::span<const double> s)
    {
        return Action::discrete(dqn_greedy_action(a, s));
    }
    static void fill(MetricsRow& row, const DqnAgent&, const RunConfig& c, std::uint64_t step,
                     double, bool)
    {
        row.epsilon = epsilon_at(c, step);
    }
};

std::string plot_script(const RunConfig& c)
{
    return "# gnuplot -p plot.gp\n"
           "set datafile separator ','\n"
           "set key bottom right\n"
           "set xlabel 'environment steps'\n"
           "set ylabel 'evaluation return'\n"
           "set title '" + c.env + " " + to_string(c.algo) + " " + to_string(c.mode) +
           " T=" + std::to_string(c.repeat) + " seed=" + std::to_string(c.seed) + "'\n"
           "plot 'metrics.csv' every ::2 using 1:3:4 with yerrorlines title 'mean +/- std', \\\n"
           "     '' every ::2 using 1:3 with lines notitle\n";
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path);
    out << text;
    if (!out) throw IntegrityError("failed writing " + path.string());
}

template <typename Agent, typename Ops>
RunSummary run(const RunConfig& c)
{
    validate(c);
    std::filesystem::create_directories(c.out);
    write_text(c.out / "config.txt", to_config_text(c));
    write_text(c.out / "plot.gp", plot_script(c));

    RunStreams rs = make_streams(c.seed);
    auto env = make_environment(c.env, rs.env);
    const EnvSpec spec = env->spec();
    Agent agent = Ops::make(c, spec, rs.init);

    ReplayBuffer buffer;
    ReplaySampler sampler(buffer, c.repeat, c.gamma_env);
    const TrainSchedule schedule = schedule_for(c);
    TrainCounters counters;
    TrainRngs train_rngs{rs.sampler, rs.noise};
    RepeatRollout rollout(*env, c.repeat, c.frame_stack);

    MetricsWriter metrics(c.out / "metrics.csv");
    std::ofstream timing(c.out / "timing.csv");
    timing << "env_step,wall_seconds\n";
    const auto t0 = std::chrono::steady_clock::now();

    std::uint64_t step = 0;
    const ActionSelector explore = [&](std::span<const double> s) {
        return Ops::explore(agent, s, c, step, rs);
    };
    const ActionSelector greedy = [&](std::span<const double> s) { return Ops::greedy(agent, s); };

    double q_sum = 0.0;
    std::size_t q_count = 0;
    double p_sum = 0.0;
    std::size_t p_count = 0;
    RunSummary summary;

    for (step = 1; step <= c.steps; ++step) {
        buffer.push(rollout.step(explore));
        TrainMetrics m;
        try {
            m = train_step(agent, sampler, schedule, counters, step, train_rngs);
        } catch (const NumericError& e) {
            metrics.write_diverged(step, e.what());
            throw;
        }
        if (m.q_updated) {
            if (!std::isfinite(m.q_loss) || (m.actor_updated && !std::isfinite(m.policy_loss))) {
                char buf[128];
                std::snprintf(buf, sizeof buf, "q_loss=%.17g policy_loss=%.17g", m.q_loss,
                              m.policy_loss);
                metrics.write_diverged(step, buf);
                throw NumericError("training diverged at env_step " + std::to_string(step) + ": " +
                                   buf);
            }
            q_sum += m.q_loss;
            ++q_count;
        }
        if (m.actor_updated) {
            p_sum += m.policy_loss;
            ++p_count;
        }

        if (step % c.eval_interval == 0 || step == c.steps) {
            auto eval_env = make_environment(c.env, rs.eval);
            const auto ev = evaluate_policy(*eval_env, greedy, c.repeat, c.frame_stack,
                                            c.eval_episodes);
            MetricsRow row;
            row.env_step = step;
            row.episodes = rollout.episodes_completed();
            row.eval_return_mean = ev.mean;
            row.eval_return_std = ev.std;
            if (q_count > 0) row.q_loss = q_sum / static_cast<double>(q_count);
            Ops::fill(row, agent, c, step, p_count ? p_sum / static_cast<double>(p_count) : 0.0,
                      p_count > 0);
            metrics.append(row);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            timing << step << "," << secs << "\n";
            timing.flush();
            q_sum = p_sum = 0.0;
            q_count = p_count = 0;
            summary.final_eval_mean = ev.mean;
        }
    }

    save_checkpoint_file(agent, counters, c.out / "checkpoint.bin");
    summary.env_steps = rollout.env_steps();
    summary.episodes = rollout.episodes_completed();
    summary.counters = counters;
    summary.metrics_path = c.out / "metrics.csv";
    return summary;
}

} // namespace

RunSummary run_experiment(const RunConfig& config)
{
    if (config.algo == Algo::sac) return run<SacAgent, SacOps>(config);
    return run<DqnAgent, DqnOps>(config);
}

} // namespace pseudo_rl
