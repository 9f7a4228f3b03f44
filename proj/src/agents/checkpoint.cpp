#include "pseudo_rl/agents/checkpoint.hpp"

#include <fstream>

#include "pseudo_rl/core/binary_io.hpp"

namespace pseudo_rl {

namespace {

constexpr std::uint8_t kSacTag = 0;
constexpr std::uint8_t kDqnTag = 1;

void write_mlp(BinaryWriter& w, const MlpParams& p)
{
    w.u64(p.layers.size());
    for (const auto& l : p.layers) {
        w.u8(l.activation == Activation::relu ? 1 : 0);
        w.matrix(l.weight);
        w.matrix(l.bias);
    }
}

MlpParams read_mlp(BinaryReader& r)
{
    MlpParams p;
    const auto n = r.u64();
    if (n > 64) throw IntegrityError("checkpoint: implausible layer count");
    for (std::uint64_t k = 0; k < n; ++k) {
        DenseLayer l;
        l.activation = r.u8() != 0 ? Activation::relu : Activation::none;
        l.weight = r.matrix();
        l.bias = r.matrix();
        p.layers.push_back(std::move(l));
    }
    if (!p.layers.empty()) p.validate();
    return p;
}

void write_adam(BinaryWriter& w, const AdamState& s)
{
    w.f64(s.config.learning_rate);
    w.f64(s.config.beta1);
    w.f64(s.config.beta2);
    w.f64(s.config.epsilon);
    w.u64(s.step);
    w.u64(s.first_moment.size());
    for (std::size_t i = 0; i < s.first_moment.size(); ++i) {
        w.matrix(s.first_moment[i]);
        w.matrix(s.second_moment[i]);
    }
}

AdamState read_adam(BinaryReader& r)
{
    AdamState s;
    s.config.learning_rate = r.f64();
    s.config.beta1 = r.f64();
    s.config.beta2 = r.f64();
    s.config.epsilon = r.f64();
    s.step = r.u64();
    const auto n = r.u64();
    if (n > 256) throw IntegrityError("checkpoint: implausible optimizer tensor count");
    for (std::uint64_t i = 0; i < n; ++i) {
        s.first_moment.push_back(r.matrix());
        s.second_moment.push_back(r.matrix());
    }
    return s;
}

void write_counters(BinaryWriter& w, const TrainCounters& c)
{
    w.u64(c.q_updates);
    w.u64(c.actor_updates);
}

TrainCounters read_counters(BinaryReader& r)
{
    TrainCounters c;
    c.q_updates = r.u64();
    c.actor_updates = r.u64();
    return c;
}

void check_header(BinaryReader& r, std::uint8_t want)
{
    const auto version = r.magic("PRLCKPT");
    if (version != kCheckpointVersion) {
        throw IntegrityError("checkpoint: unsupported version " + std::to_string(version));
    }
    if (r.u8() != want) throw IntegrityError("checkpoint: stored agent is a different algorithm");
}

} // namespace

void save_checkpoint(const SacAgent& a, const TrainCounters& counters, std::ostream& out)
{
    BinaryWriter w(out);
    w.magic("PRLCKPT", kCheckpointVersion);
    w.u8(kSacTag);
    const auto& c = a.config;
    w.u64(c.state_dim);
    w.u64(c.action_dim);
    w.f64(c.action_scale);
    w.u64(c.hidden_width);
    w.u64(c.hidden_layers);
    w.f64(c.learning_rate);
    w.f64(c.init_alpha);
    w.u8(c.target_entropy ? 1 : 0);
    w.f64(c.target_entropy.value_or(0.0));
    w.u8(c.twin_q ? 1 : 0);
    write_mlp(w, a.q);
    write_mlp(w, a.q_target);
    write_mlp(w, a.q2);
    write_mlp(w, a.q2_target);
    write_mlp(w, a.policy);
    w.f64(a.log_alpha);
    w.f64(a.target_entropy);
    write_adam(w, a.q_opt);
    write_adam(w, a.q2_opt);
    write_adam(w, a.policy_opt);
    write_adam(w, a.alpha_opt);
    write_counters(w, counters);
}

SacAgent load_sac_checkpoint(std::istream& in, TrainCounters& counters)
{
    BinaryReader r(in);
    check_header(r, kSacTag);
    SacAgent a;
    auto& c = a.config;
    c.state_dim = r.u64();
    c.action_dim = r.u64();
    c.action_scale = r.f64();
    c.hidden_width = r.u64();
    c.hidden_layers = r.u64();
    c.learning_rate = r.f64();
    c.init_alpha = r.f64();
    const bool has_entropy = r.u8() != 0;
    const double entropy = r.f64();
    if (has_entropy) c.target_entropy = entropy;
    c.twin_q = r.u8() != 0;
    a.q = read_mlp(r);
    a.q_target = read_mlp(r);
    a.q2 = read_mlp(r);
    a.q2_target = read_mlp(r);
    a.policy = read_mlp(r);
    a.log_alpha = r.f64();
    a.target_entropy = r.f64();
    a.q_opt = read_adam(r);
    a.q2_opt = read_adam(r);
    a.policy_opt = read_adam(r);
    a.alpha_opt = read_adam(r);
    counters = read_counters(r);
    return a;
}

void save_checkpoint(const DqnAgent& a, const TrainCounters& counters, std::ostream& out)
{
    BinaryWriter w(out);
    w.magic("PRLCKPT", kCheckpointVersion);
    w.u8(kDqnTag);
    const auto& c = a.config;
    w.u64(c.state_dim);
    w.u64(c.n_actions);
    w.u64(c.embed_dim);
    w.u64(c.hidden_width);
    w.u64(c.hidden_layers);
    w.f64(c.learning_rate);
    w.u8(c.reward_clip ? 1 : 0);
    w.matrix(a.embed.rows);
    w.matrix(a.embed_target.rows);
    write_mlp(w, a.q);
    write_mlp(w, a.q_target);
    write_adam(w, a.q_opt);
    write_adam(w, a.embed_opt);
    write_counters(w, counters);
}

DqnAgent load_dqn_checkpoint(std::istream& in, TrainCounters& counters)
{
    BinaryReader r(in);
    check_header(r, kDqnTag);
    DqnAgent a;
    auto& c = a.config;
    c.state_dim = r.u64();
    c.n_actions = r.u64();
    c.embed_dim = r.u64();
    c.hidden_width = r.u64();
    c.hidden_layers = r.u64();
    c.learning_rate = r.f64();
    c.reward_clip = r.u8() != 0;
    a.embed.rows = r.matrix();
    a.embed_target.rows = r.matrix();
    a.q = read_mlp(r);
    a.q_target = read_mlp(r);
    a.q_opt = read_adam(r);
    a.embed_opt = read_adam(r);
    counters = read_counters(r);
    return a;
}

template <typename Agent>
void save_checkpoint_file(const Agent& agent, const TrainCounters& counters,
                          const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IntegrityError("cannot open checkpoint file " + path.string());
    save_checkpoint(agent, counters, out);
}

template void save_checkpoint_file(const SacAgent&, const TrainCounters&, const std::filesystem::path&);
template void save_checkpoint_file(const DqnAgent&, const TrainCounters&, const std::filesystem::path&);

} // namespace pseudo_rl
