#include "pseudo_rl/harness/run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "pseudo_rl/core/errors.hpp"

namespace pseudo_rl {

const char* to_string(Algo a) noexcept { return a == Algo::sac ? "sac" : "dqn"; }
const char* to_string(RunMode m) noexcept { return m == RunMode::baseline ? "baseline" : "pseudo"; }

RunConfig defaults_for(Algo algo)
{
    RunConfig c;
    c.algo = algo;
    c.gamma_env = std::pow(0.99, 0.25);
    if (algo == Algo::sac) {
        c.env = "pendulum";
        c.learning_rate = 0.001;
        c.batch_size = 32;
    } else {
        c.env = "pushbar";
        c.learning_rate = 0.0003;
        c.batch_size = 64;
    }
    return c;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why)
{
    throw ConfigError("config key '" + key + "': invalid value '" + value + "' (" + why + ")");
}

std::uint64_t parse_uint(const std::string& key, const std::string& v)
{
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) bad_value(key, v, "expected a non-negative integer");
    return out;
}

double parse_real(const std::string& key, const std::string& v)
{
    std::istringstream in(v);
    double out = 0.0;
    in >> out;
    if (!in || !in.eof() || !std::isfinite(out)) bad_value(key, v, "expected a finite number");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    bad_value(key, v, "expected true or false");
}

Algo parse_algo(const std::string& v)
{
    if (v == "sac") return Algo::sac;
    if (v == "dqn") return Algo::dqn;
    bad_value("algo", v, "expected sac or dqn");
}

RunMode parse_mode(const std::string& v)
{
    if (v == "baseline") return RunMode::baseline;
    if (v == "pseudo") return RunMode::pseudo;
    bad_value("mode", v, "expected baseline or pseudo");
}

struct Field {
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field uint_field(T RunConfig::*member, const char* key)
{
    return {[=](RunConfig& c, const std::string& v) { c.*member = static_cast<T>(parse_uint(key, v)); },
            [=](const RunConfig& c) { return std::to_string(c.*member); }};
}

Field real_field(double RunConfig::*member, const char* key)
{
    return {[=](RunConfig& c, const std::string& v) { c.*member = parse_real(key, v); },
            [=](const RunConfig& c) { return format_double(c.*member); }};
}

Field bool_field(bool RunConfig::*member, const char* key)
{
    return {[=](RunConfig& c, const std::string& v) { c.*member = parse_bool(key, v); },
            [=](const RunConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

const std::vector<std::pair<std::string, Field>>& fields()
{
    static const std::vector<std::pair<std::string, Field>> table = {
        {"env", {[](RunConfig& c, const std::string& v) { c.env = v; },
                 [](const RunConfig& c) { return c.env; }}},
        {"algo", {[](RunConfig& c, const std::string& v) { c.algo = parse_algo(v); },
                  [](const RunConfig& c) { return std::string(to_string(c.algo)); }}},
        {"mode", {[](RunConfig& c, const std::string& v) { c.mode = parse_mode(v); },
                  [](const RunConfig& c) { return std::string(to_string(c.mode)); }}},
        {"repeat", uint_field(&RunConfig::repeat, "repeat")},
        {"steps", uint_field(&RunConfig::steps, "steps")},
        {"seed", uint_field(&RunConfig::seed, "seed")},
        {"frame_stack", uint_field(&RunConfig::frame_stack, "frame_stack")},
        {"gamma_env", real_field(&RunConfig::gamma_env, "gamma_env")},
        {"learning_rate", real_field(&RunConfig::learning_rate, "learning_rate")},
        {"batch_size", uint_field(&RunConfig::batch_size, "batch_size")},
        {"tau", real_field(&RunConfig::tau, "tau")},
        {"actor_update_freq", uint_field(&RunConfig::actor_update_freq, "actor_update_freq")},
        {"min_replay", uint_field(&RunConfig::min_replay, "min_replay")},
        {"update_every", uint_field(&RunConfig::update_every, "update_every")},
        {"hidden_width", uint_field(&RunConfig::hidden_width, "hidden_width")},
        {"embed_dim", uint_field(&RunConfig::embed_dim, "embed_dim")},
        {"init_alpha", real_field(&RunConfig::init_alpha, "init_alpha")},
        {"twin_q", bool_field(&RunConfig::twin_q, "twin_q")},
        {"eps_start", real_field(&RunConfig::eps_start, "eps_start")},
        {"eps_end", real_field(&RunConfig::eps_end, "eps_end")},
        {"eps_decay_fraction", real_field(&RunConfig::eps_decay_fraction, "eps_decay_fraction")},
        {"reward_clip", bool_field(&RunConfig::reward_clip, "reward_clip")},
        {"eval_interval", uint_field(&RunConfig::eval_interval, "eval_interval")},
        {"eval_episodes", uint_field(&RunConfig::eval_episodes, "eval_episodes")},
        {"out", {[](RunConfig& c, const std::string& v) { c.out = v; },
                 [](const RunConfig& c) { return c.out.string(); }}},
    };
    return table;
}

const Field& field(const std::string& key)
{
    for (const auto& [k, f] : fields())
        if (k == key) return f;
    throw ConfigError("unknown config key '" + key + "'");
}

void require(bool ok, const std::string& key, const std::string& why)
{
    if (!ok) throw ConfigError("config key '" + key + "' out of range: " + why);
}

} // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, f] : fields()) k.push_back(name);
        return k;
    }();
    return keys;
}

KeyValues parse_key_values(const std::string& text, const std::string& origin)
{
    KeyValues out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

void validate(const RunConfig& c)
{
    require(c.env == "pendulum" || c.env == "pushbar" || c.env == "integrator", "env",
            "expected pendulum, pushbar or integrator");
    const bool discrete_env = c.env == "pushbar";
    require(discrete_env == (c.algo == Algo::dqn), "algo",
            std::string(to_string(c.algo)) + " cannot drive env '" + c.env + "'");
    require(c.repeat >= 1, "repeat", "must be >= 1");
    require(c.steps >= 1, "steps", "must be >= 1");
    require(c.frame_stack >= 1, "frame_stack", "must be >= 1");
    require(c.gamma_env > 0.0 && c.gamma_env <= 1.0, "gamma_env", "must lie in (0, 1]");
    require(c.learning_rate > 0.0, "learning_rate", "must be > 0");
    require(c.batch_size >= 1, "batch_size", "must be >= 1");
    require(c.tau >= 0.0 && c.tau <= 1.0, "tau", "must lie in [0, 1]");
    require(c.actor_update_freq >= 1, "actor_update_freq", "must be >= 1");
    require(c.update_every >= 1, "update_every", "must be >= 1");
    require(c.hidden_width >= 1, "hidden_width", "must be >= 1");
    require(c.embed_dim >= 1, "embed_dim", "must be >= 1");
    require(c.init_alpha > 0.0, "init_alpha", "must be > 0");
    require(c.eps_start >= 0.0 && c.eps_start <= 1.0, "eps_start", "must lie in [0, 1]");
    require(c.eps_end >= 0.0 && c.eps_end <= 1.0, "eps_end", "must lie in [0, 1]");
    require(c.eps_decay_fraction >= 0.0 && c.eps_decay_fraction <= 1.0, "eps_decay_fraction",
            "must lie in [0, 1]");
    require(c.eval_interval >= 1, "eval_interval", "must be >= 1");
    require(c.eval_episodes >= 1, "eval_episodes", "must be >= 1");
}

RunConfig parse_config(const std::optional<std::filesystem::path>& file, const KeyValues& overrides)
{
    KeyValues all;
    if (file) {
        std::ifstream in(*file);
        if (!in) throw ConfigError("cannot read config file " + file->string());
        std::stringstream ss;
        ss << in.rdbuf();
        all = parse_key_values(ss.str(), file->string());
    }
    all.insert(all.end(), overrides.begin(), overrides.end());

    // Reject unknown keys before anything else, then pick the algorithm so
    // its defaults sit underneath every explicit setting.
    Algo algo = Algo::sac;
    bool env_given = false;
    for (const auto& [k, v] : all) {
        field(k);
        if (k == "algo") algo = parse_algo(v);
        if (k == "env") env_given = true;
    }
    RunConfig c = defaults_for(algo);
    if (!env_given) c.env = algo == Algo::sac ? "pendulum" : "pushbar";
    for (const auto& [k, v] : all) field(k).set(c, v);
    validate(c);
    return c;
}

std::string to_config_text(const RunConfig& c)
{
    std::string out;
    for (const auto& [k, f] : fields()) {
        if (k == "out") continue;
        out += k + " = " + f.get(c) + "\n";
    }
    return out;
}

} // namespace pseudo_rl
