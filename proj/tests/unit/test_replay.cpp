#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "pseudo_rl/core/errors.hpp"
#include "pseudo_rl/replay/buffer_io.hpp"
#include "pseudo_rl/replay/pseudo_batch.hpp"
#include "pseudo_rl/replay/replay_buffer.hpp"
#include "oracles.hpp"

using namespace pseudo_rl;
using oracle::EpisodeShape;

namespace {

std::vector<WindowStart> starts_of(std::size_t episode, std::vector<std::size_t> idx)
{
    std::vector<WindowStart> out;
    for (auto i : idx) out.push_back({episode, i});
    return out;
}

// Index within episode 0 whose stored obs equals the given state row.
std::size_t locate(const ReplayBuffer& buffer, std::span<const double> state)
{
    const auto& steps = buffer.episodes().front().steps;
    for (std::size_t i = 0; i < steps.size(); ++i)
        if (std::equal(state.begin(), state.end(), steps[i].obs.begin())) return i;
    FAIL("state row not found in buffer");
    return 0;
}

// Upper 0.999 quantile of chi-square with k degrees of freedom (Wilson-Hilferty).
double chi_square_999(double k)
{
    const double z = 3.090232306167813;
    const double c = 2.0 / (9.0 * k);
    return k * std::pow(1.0 - c + z * std::sqrt(c), 3.0);
}

} // namespace

TEST_CASE("push lifecycle")
{
    Rng rng(1);
    auto steps = oracle::synthetic_steps({{5, false, true}}, 4, false, rng);
    ReplayBuffer b = oracle::fill_buffer(steps);
    CHECK(b.total_steps() == 5);
    CHECK(b.episode_count() == 1);
    CHECK(b.has_open_episode());

    Rng rng2(2);
    auto two = oracle::synthetic_steps({{3, true}, {2, false, true}}, 4, false, rng2);
    ReplayBuffer c;
    for (std::size_t i = 0; i < 3; ++i) c.push(two[i]);
    CHECK_FALSE(c.has_open_episode());
    c.push(two[3]);
    CHECK(c.episode_count() == 2);
    CHECK(c.has_open_episode());
}

TEST_CASE("push rejects a broken observation chain")
{
    Rng rng(3);
    auto steps = oracle::synthetic_steps({{4, true}}, 4, false, rng);
    steps[2].obs[1] += 1e-9;
    ReplayBuffer b;
    b.push(steps[0]);
    b.push(steps[1]);
    CHECK_THROWS_AS(b.push(steps[2]), IntegrityError);
}

TEST_CASE("window starts on a 9-step episode")
{
    Rng rng(4);
    const auto b = oracle::fill_buffer(oracle::synthetic_steps({{9, true}}, 4, false, rng));
    CHECK(b.valid_start_indices(4, SampleMode::pseudo) == starts_of(0, {0, 1, 2, 3, 4, 5}));
    CHECK(b.valid_start_indices(4, SampleMode::canonical) == starts_of(0, {0, 4}));
    CHECK(b.valid_start_indices(4, SampleMode::pseudo) ==
          oracle::brute_force_starts(b, 4, SampleMode::pseudo));
}

TEST_CASE("degenerate repeat lengths")
{
    Rng rng(5);
    const auto b = oracle::fill_buffer(oracle::synthetic_steps({{7, true}, {5, false}}, 1, false, rng));
    CHECK(b.valid_start_indices(1, SampleMode::pseudo).size() == 12);
    CHECK(b.valid_start_indices(1, SampleMode::canonical).size() == 12);

    Rng rng2(6);
    const auto short_ep = oracle::fill_buffer(oracle::synthetic_steps({{3, true}}, 4, false, rng2));
    CHECK(short_ep.valid_start_indices(4, SampleMode::pseudo).empty());
    CHECK(short_ep.valid_start_indices(4, SampleMode::canonical).empty());
    Rng draw(0);
    CHECK_THROWS_AS(sample_batch(short_ep, 4, 4, SampleMode::pseudo, 0.99, draw), InsufficientDataError);
}

TEST_CASE("pseudo action of a window")
{
    const std::vector<std::vector<double>> scalars = {{1.0}, {1.0}, {1.0}, {-1.0}};
    CHECK(pseudo_action_continuous(scalars) == std::vector<double>{0.5});

    const std::vector<std::vector<double>> vecs = {{0.2, -0.4}, {0.6, 0.0}};
    const auto m = pseudo_action_continuous(vecs);
    CHECK(m[0] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(m[1] == doctest::Approx(-0.2).epsilon(1e-15));

    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a = {rng.uniform(-2.0, 2.0), rng.uniform(-1e-3, 1e-3)};
        const std::vector<std::vector<double>> same(1 + trial % 9, a);
        CHECK(pseudo_action_continuous(same) == a);
    }

    CHECK_THROWS_AS(pseudo_action_continuous({}), ConfigError);
    const std::vector<std::vector<double>> ragged = {{1.0}, {1.0, 2.0}};
    CHECK_THROWS_AS(pseudo_action_continuous(ragged), ConfigError);
}

TEST_CASE("constant reward sums over the window")
{
    Rng rng(8);
    auto steps = oracle::synthetic_steps({{8, true}}, 4, false, rng);
    for (auto& s : steps) s.reward = 0.25;
    const auto b = oracle::fill_buffer(steps);
    Rng draw(1);
    const auto batch = sample_batch(b, 500, 4, SampleMode::pseudo, 0.99, draw);
    for (double r : batch.reward_sum) CHECK(r == 1.0);
}

TEST_CASE("canonical sampling only uses decision points")
{
    Rng rng(9);
    const auto b = oracle::fill_buffer(oracle::synthetic_steps({{9, true}}, 4, false, rng));
    Rng draw(2);
    const auto batch = sample_batch(b, 5000, 4, SampleMode::canonical, 0.99, draw);
    std::map<std::size_t, int> seen;
    for (std::size_t r = 0; r < batch.size(); ++r) {
        ++seen[locate(b, batch.states.row_span(r))];
        CHECK(batch.is_canonical[r] == 1);
    }
    CHECK(seen.size() == 2);
    CHECK(seen.count(0) == 1);
    CHECK(seen.count(4) == 1);
}

TEST_CASE("window enumeration agrees with the brute-force oracle")
{
    Rng rng(10);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<EpisodeShape> shapes;
        const auto episodes = 1 + rng.uniform_index(6);
        for (std::size_t e = 0; e < episodes; ++e) {
            shapes.push_back({1 + rng.uniform_index(20), rng.uniform() < 0.5, false});
        }
        shapes.back().open = rng.uniform() < 0.5;
        const std::size_t repeat = 1 + rng.uniform_index(6);
        const auto b = oracle::fill_buffer(oracle::synthetic_steps(shapes, repeat, trial % 2 == 0, rng));
        for (auto mode : {SampleMode::pseudo, SampleMode::canonical}) {
            const auto starts = b.valid_start_indices(repeat, mode);
            CHECK(starts == oracle::brute_force_starts(b, repeat, mode));
            for (const auto& s : starts) {
                const auto& steps = b.episodes()[s.episode].steps;
                REQUIRE(s.index + repeat <= steps.size());
                for (std::size_t t = 0; t + 1 < repeat; ++t) CHECK_FALSE(steps[s.index + t].terminal);
            }
        }
    }
}

TEST_CASE("assembled rows match brute-force recomputation")
{
    Rng rng(11);
    const std::size_t repeat = 4;
    const auto b = oracle::fill_buffer(
        oracle::synthetic_steps({{13, true}, {9, false}, {6, true}, {11, false, true}}, repeat, false, rng));
    const auto starts = b.valid_start_indices(repeat, SampleMode::pseudo);
    const auto batch = assemble_batch(b, starts, repeat, SampleMode::pseudo, std::pow(0.99, 0.25));
    REQUIRE(batch.size() == starts.size());
    for (std::size_t r = 0; r < starts.size(); ++r) {
        const auto& s = starts[r];
        const auto& last = b.episodes()[s.episode].steps[s.index + repeat - 1];
        CHECK(batch.reward_sum[r] == doctest::Approx(oracle::brute_reward_sum(b, s, repeat)).epsilon(1e-14));
        const auto mean = oracle::brute_mean_action(b, s, repeat);
        for (std::size_t j = 0; j < mean.size(); ++j)
            CHECK(batch.actions(r, j) == doctest::Approx(mean[j]).epsilon(1e-13));
        CHECK(batch.bootstrap_mask[r] == (last.terminal ? 0.0 : 1.0));
        CHECK(std::equal(last.next_obs.begin(), last.next_obs.end(), batch.next_states.row_span(r).begin()));
        CHECK(batch.is_canonical[r] == (s.index % repeat == 0 ? 1 : 0));
        CHECK(std::abs(batch.discount[r] - 0.99) < 1e-12);
    }
}

TEST_CASE("discrete rows carry the raw id window")
{
    Rng rng(12);
    const auto b = oracle::fill_buffer(oracle::synthetic_steps({{10, true}}, 4, true, rng));
    const auto starts = b.valid_start_indices(4, SampleMode::pseudo);
    const auto batch = assemble_batch(b, starts, 4, SampleMode::pseudo, 0.99);
    REQUIRE(batch.discrete());
    for (std::size_t r = 0; r < starts.size(); ++r) {
        const auto w = batch.window(r);
        for (std::size_t t = 0; t < 4; ++t)
            CHECK(w[t] == b.episodes()[0].steps[starts[r].index + t].action.id);
    }
}

TEST_CASE("start indices are drawn uniformly")
{
    Rng rng(13);
    const auto b = oracle::fill_buffer(oracle::synthetic_steps({{9, true}}, 4, false, rng));
    Rng draw(3);
    const std::size_t n = 100'000;
    const auto batch = sample_batch(b, n, 4, SampleMode::pseudo, 0.99, draw);
    std::vector<double> counts(6, 0.0);
    for (std::size_t r = 0; r < n; ++r) counts.at(locate(b, batch.states.row_span(r))) += 1.0;
    const double expected = static_cast<double>(n) / 6.0;
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 < chi_square_999(5.0));
}

TEST_CASE("canonical share of pseudo batches is one in T")
{
    Rng rng(14);
    std::vector<EpisodeShape> shapes(40, EpisodeShape{1000, false, false});
    const auto b = oracle::fill_buffer(oracle::synthetic_steps(shapes, 4, false, rng, 2, 1));
    Rng draw(4);
    const auto batch = sample_batch(b, 100'000, 4, SampleMode::pseudo, 0.99, draw);
    double canonical = 0.0;
    for (auto c : batch.is_canonical) canonical += c;
    CHECK(std::abs(canonical / 100'000.0 - 0.25) < 0.01);
}

TEST_CASE("discount over four steps")
{
    Rng rng(15);
    const auto b = oracle::fill_buffer(oracle::synthetic_steps({{8, false}}, 4, false, rng));
    Rng draw(5);
    const auto batch = sample_batch(b, 3, 4, SampleMode::pseudo, std::pow(0.99, 0.25), draw);
    for (double d : batch.discount) CHECK(std::abs(d - 0.99) < 1e-12);
}

TEST_CASE("incremental window cache equals fresh enumeration")
{
    Rng rng(16);
    std::vector<EpisodeShape> shapes;
    for (int e = 0; e < 12; ++e) shapes.push_back({1 + rng.uniform_index(15), e % 3 == 0, false});
    shapes.back().open = true;
    const auto steps = oracle::synthetic_steps(shapes, 3, false, rng);
    ReplayBuffer b;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        b.push(steps[i]);
        if (i % 7 != 0) continue;
        for (std::size_t repeat : {1u, 3u, 5u})
            for (auto mode : {SampleMode::pseudo, SampleMode::canonical})
                CHECK(b.window_starts(repeat, mode) == b.valid_start_indices(repeat, mode));
    }
}

TEST_CASE("canonical batches reduce to an agent-step replay")
{
    Rng rng(17);
    const std::size_t repeat = 4;
    const auto steps = oracle::synthetic_steps({{14, true}, {20, false}, {9, true}}, repeat, false, rng);
    // The conventional memory stores held actions, so hold them here too.
    auto held = steps;
    for (std::size_t i = 0; i < held.size(); ++i)
        if (!held[i].decision_aligned) held[i].action = held[i - 1].action;
    const auto b = oracle::fill_buffer(held);
    oracle::AgentStepReplay agent(repeat, 0.99);
    for (const auto& t : held) agent.observe(t);
    ReplaySampler sampler(b, repeat, 0.99);
    CHECK(agent.available(SampleMode::canonical) == sampler.available(SampleMode::canonical));

    Rng ra(6);
    Rng rb(6);
    const auto x = agent.sample(256, SampleMode::canonical, ra);
    const auto y = sampler.sample(256, SampleMode::canonical, rb);
    CHECK(x.states.values()[0] == y.states.values()[0]);
    CHECK(std::ranges::equal(x.states.values(), y.states.values()));
    CHECK(std::ranges::equal(x.actions.values(), y.actions.values()));
    CHECK(x.reward_sum == y.reward_sum);
    CHECK(std::ranges::equal(x.next_states.values(), y.next_states.values()));
    CHECK(x.bootstrap_mask == y.bootstrap_mask);
    CHECK(x.discount == y.discount);
    CHECK(x.is_canonical == y.is_canonical);
}

TEST_CASE("buffer dump round-trips bit-exactly")
{
    for (bool discrete : {false, true}) {
        Rng rng(18);
        const auto steps = oracle::synthetic_steps({{6, true}, {9, false}, {4, false, true}}, 2, discrete, rng);
        const auto b = oracle::fill_buffer(steps);
        std::stringstream ss;
        save_buffer(b, ss);
        const auto c = load_buffer(ss);
        REQUIRE(c.total_steps() == b.total_steps());
        std::size_t k = 0;
        for (const auto& ep : c.episodes())
            for (const auto& t : ep.steps) CHECK(t == steps[k++]);
        CHECK(c.has_open_episode());
    }
}

TEST_CASE("buffer load rejects a corrupted stream")
{
    Rng rng(19);
    const auto b = oracle::fill_buffer(oracle::synthetic_steps({{6, true}}, 2, false, rng));
    std::stringstream ss;
    save_buffer(b, ss);
    auto bytes = ss.str();
    std::stringstream truncated(bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_AS(load_buffer(truncated), IntegrityError);
    bytes[0] = 'X';
    std::stringstream bad_magic(bytes);
    CHECK_THROWS_AS(load_buffer(bad_magic), IntegrityError);
}
