#include "pseudo_rl/replay/buffer_io.hpp"

#include <fstream>

#include "pseudo_rl/core/binary_io.hpp"

namespace pseudo_rl {

void save_buffer(const ReplayBuffer& buffer, std::ostream& out)
{
    BinaryWriter w(out);
    w.magic("PRLBUF", kBufferFormatVersion);
    w.u64(buffer.total_steps());
    std::size_t obs_dim = 0;
    bool discrete = false;
    std::size_t action_dim = 0;
    if (buffer.total_steps() > 0) {
        const auto& first = buffer.episodes().front().steps.front();
        obs_dim = first.obs.size();
        discrete = first.action.values.empty();
        action_dim = discrete ? 1 : first.action.values.size();
    }
    w.u64(obs_dim);
    w.u8(discrete ? 1 : 0);
    w.u64(action_dim);
    for (const auto& ep : buffer.episodes()) {
        for (const auto& t : ep.steps) {
            if (t.obs.size() != obs_dim || t.next_obs.size() != obs_dim) {
                throw IntegrityError("save_buffer: observation size varies within the buffer");
            }
            w.u64(t.episode);
            w.u64(t.env_step);
            for (double v : t.obs) w.f64(v);
            if (discrete) {
                w.u64(t.action.id);
            } else {
                if (t.action.values.size() != action_dim) {
                    throw IntegrityError("save_buffer: action size varies within the buffer");
                }
                for (double v : t.action.values) w.f64(v);
            }
            w.f64(t.reward);
            w.u8(t.terminal ? 1 : 0);
            w.u8(t.truncated ? 1 : 0);
            w.u8(t.decision_aligned ? 1 : 0);
            for (double v : t.next_obs) w.f64(v);
        }
    }
}

ReplayBuffer load_buffer(std::istream& in)
{
    BinaryReader r(in);
    const auto version = r.magic("PRLBUF");
    if (version != kBufferFormatVersion) {
        throw IntegrityError("load_buffer: unsupported format version " + std::to_string(version));
    }
    const auto count = r.u64();
    const auto obs_dim = r.u64();
    const bool discrete = r.u8() != 0;
    const auto action_dim = r.u64();
    ReplayBuffer buffer;
    for (std::uint64_t n = 0; n < count; ++n) {
        EnvStepTransition t;
        t.episode = r.u64();
        t.env_step = r.u64();
        t.obs.resize(obs_dim);
        for (double& v : t.obs) v = r.f64();
        if (discrete) {
            t.action.id = r.u64();
        } else {
            t.action.values.resize(action_dim);
            for (double& v : t.action.values) v = r.f64();
        }
        t.reward = r.f64();
        t.terminal = r.u8() != 0;
        t.truncated = r.u8() != 0;
        t.decision_aligned = r.u8() != 0;
        t.next_obs.resize(obs_dim);
        for (double& v : t.next_obs) v = r.f64();
        buffer.push(t);
    }
    return buffer;
}

void save_buffer(const ReplayBuffer& buffer, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IntegrityError("save_buffer: cannot open " + path.string());
    save_buffer(buffer, out);
}

ReplayBuffer load_buffer(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IntegrityError("load_buffer: cannot open " + path.string());
    return load_buffer(in);
}

} // namespace pseudo_rl
