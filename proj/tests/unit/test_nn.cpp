#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pseudo_rl/core/errors.hpp"
#include "pseudo_rl/nn/adam.hpp"
#include "pseudo_rl/nn/gradient_check.hpp"
#include "pseudo_rl/nn/kernels.hpp"
#include "pseudo_rl/nn/mlp.hpp"
#include "pseudo_rl/nn/serial_kernels.hpp"
#include "pseudo_rl/nn/tanh_gaussian.hpp"

using namespace pseudo_rl;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double scale = 1.0)
{
    Matrix m(r, c);
    for (double& v : m.values()) v = rng.uniform(-scale, scale);
    return m;
}

MlpParams single_layer(Matrix w, Activation act)
{
    MlpParams p;
    p.layers.push_back({std::move(w), Matrix(1, 2), act});
    return p;
}

// Sum of squares of the output weighted by fixed coefficients, with its
// analytic gradient through mlp_backward.
LossAndGrad weighted_output_loss(const MlpParams& p, const Matrix& x, const Matrix& coef)
{
    const auto acts = mlp_forward(p, x);
    const Matrix& y = acts.back();
    Matrix up(y.rows(), y.cols());
    double loss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        loss += coef[i] * y[i] * y[i];
        up[i] = 2.0 * coef[i] * y[i];
    }
    return {loss, mlp_backward(p, acts, up).params};
}

} // namespace

TEST_CASE("identity layer passes input through")
{
    const auto p = single_layer(Matrix::identity(2), Activation::none);
    const Matrix y = mlp_output(p, Matrix::row({1.0, 2.0}));
    CHECK(y == Matrix::row({1.0, 2.0}));
}

TEST_CASE("relu layer zeroes negative entries")
{
    const auto p = single_layer(Matrix::identity(2), Activation::relu);
    CHECK(mlp_output(p, Matrix::row({-1.0, 2.0})) == Matrix::row({0.0, 2.0}));
}

TEST_CASE("forward pass matches the naive oracle on a wide random net")
{
    Rng rng(11);
    const auto p = make_mlp(10, 256, 2, 3, rng);
    CHECK(p.layers.size() == 3);
    const Matrix x = random_matrix(7, 10, rng);
    const Matrix got = mlp_output(p, x);
    const Matrix want = oracle::naive_forward(p, x);
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(std::abs(got[i] - want[i]) <= 1e-12 * std::max(1.0, std::abs(want[i])));
    }
}

TEST_CASE("shape mismatch names the layer")
{
    Rng rng(1);
    auto p = make_mlp(3, 4, 1, 2, rng);
    CHECK_THROWS_WITH_AS(mlp_forward(p, Matrix(1, 5)), doctest::Contains("layer 0"), ConfigError);
    p.layers[1].weight = Matrix(5, 2);
    p.layers[1].bias = Matrix(1, 2);
    CHECK_THROWS_WITH_AS(mlp_forward(p, Matrix(1, 3)), doctest::Contains("layer 1"), ConfigError);
}

TEST_CASE("backward on a linear unit gives x and 1")
{
    MlpParams p;
    p.layers.push_back({Matrix(3, 1, std::vector<double>{0.5, -1.0, 2.0}), Matrix(1, 1, 0.25),
                        Activation::none});
    const Matrix x = Matrix::row({1.5, -2.0, 3.0});
    const auto g = mlp_backward(p, mlp_forward(p, x), Matrix(1, 1, 1.0));
    CHECK(g.params.layers[0].weight == Matrix(3, 1, std::vector<double>{1.5, -2.0, 3.0}));
    CHECK(g.params.layers[0].bias(0, 0) == 1.0);
    CHECK(g.input == Matrix::row({0.5, -1.0, 2.0}));
}

TEST_CASE("zero upstream gradient gives zero gradients")
{
    Rng rng(2);
    const auto p = make_mlp(4, 8, 2, 2, rng);
    const Matrix x = random_matrix(3, 4, rng);
    const auto g = mlp_backward(p, mlp_forward(p, x), Matrix(3, 2));
    for (const Matrix* t : g.params.tensors()) CHECK(max_abs(*t) == 0.0);
    CHECK(max_abs(g.input) == 0.0);
}

TEST_CASE("inconsistent activations are rejected")
{
    Rng rng(3);
    const auto p = make_mlp(4, 8, 2, 2, rng);
    auto acts = mlp_forward(p, Matrix(2, 4));
    acts.pop_back();
    CHECK_THROWS_AS(mlp_backward(p, acts, Matrix(2, 2)), IntegrityError);
}

TEST_CASE("mlp gradients agree with central differences on random nets")
{
    for (std::uint64_t draw = 0; draw < 10; ++draw) {
        Rng rng(100 + draw);
        const auto p = make_mlp(5, 16, 2, 3, rng);
        const Matrix x = random_matrix(4, 5, rng);
        const Matrix coef = random_matrix(4, 3, rng);
        const double err = gradient_check(
            [&](const MlpParams& q) { return weighted_output_loss(q, x, coef); }, p, 1e-5);
        CHECK(err < 1e-4);
    }
}

TEST_CASE("directional derivative matches a symmetric difference")
{
    Rng rng(7);
    const auto p = make_mlp(6, 12, 2, 2, rng);
    const Matrix x = random_matrix(5, 6, rng);
    const Matrix coef = random_matrix(5, 2, rng);
    const auto lg = weighted_output_loss(p, x, coef);
    const auto theta = flatten(p);
    const auto grad = flatten(lg.grad);
    std::vector<double> v(theta.size());
    double norm = 0.0;
    for (double& e : v) {
        e = rng.normal();
        norm += e * e;
    }
    double analytic = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] /= std::sqrt(norm);
        analytic += grad[i] * v[i];
    }
    const double h = 1e-5;
    auto shifted = [&](double s) {
        auto t = theta;
        for (std::size_t i = 0; i < t.size(); ++i) t[i] += s * v[i];
        MlpParams q = p;
        unflatten(t, q);
        return weighted_output_loss(q, x, coef).loss;
    };
    const double numeric = (shifted(h) - shifted(-h)) / (2.0 * h);
    CHECK(std::abs(analytic - numeric) / std::max(std::abs(analytic), 1e-8) < 1e-4);
}

TEST_CASE("gradient_check on half squared norm of Wx")
{
    const std::vector<double> x = {0.7, -1.3};
    const std::vector<double> w = {0.5, -0.2, 1.1, 0.4};
    auto loss = [&](std::span<const double> W) {
        const double y0 = W[0] * x[0] + W[1] * x[1];
        const double y1 = W[2] * x[0] + W[3] * x[1];
        return 0.5 * (y0 * y0 + y1 * y1);
    };
    // d/dW of 0.5 |Wx|^2 is (Wx) x^T.
    const double y0 = w[0] * x[0] + w[1] * x[1];
    const double y1 = w[2] * x[0] + w[3] * x[1];
    const std::vector<double> analytic = {y0 * x[0], y0 * x[1], y1 * x[0], y1 * x[1]};
    CHECK(gradient_check(loss, w, analytic, 1e-5) < 1e-6);
}

TEST_CASE("gradient_check of a constant loss is zero")
{
    const std::vector<double> point = {1.0, 2.0, 3.0};
    const std::vector<double> zero(3, 0.0);
    CHECK(gradient_check([](std::span<const double>) { return 4.0; }, point, zero, 1e-5) == 0.0);
}

TEST_CASE("gradient_check rejects a non-finite loss")
{
    const std::vector<double> point = {1.0};
    CHECK_THROWS_AS(gradient_check([](std::span<const double>) { return std::nan(""); }, point,
                                   point, 1e-5),
                    NumericError);
}

TEST_CASE("first adam step moves by lr against the gradient sign")
{
    for (double g : {0.3, -2.5}) {
        Matrix param(1, 1, 1.0);
        const Matrix grad(1, 1, g);
        Matrix* ps[] = {&param};
        const Matrix* gs[] = {&grad};
        auto state = make_adam_state(std::span<const Matrix* const>(gs), AdamConfig{0.001});
        adam_step(ps, gs, state);
        // m_hat = g and v_hat = g^2 after one step.
        const double expected = 1.0 - 0.001 * g / (std::abs(g) + 1e-8);
        CHECK(param(0, 0) == doctest::Approx(expected).epsilon(1e-15));
        CHECK(std::abs(param(0, 0) - (1.0 - 0.001 * (g > 0 ? 1.0 : -1.0))) < 1e-10);
        CHECK(state.step == 1);
    }
}

TEST_CASE("zero gradient leaves parameters but advances the step")
{
    Rng rng(5);
    auto p = make_mlp(3, 4, 1, 1, rng);
    const auto before = p;
    auto state = make_adam_state(p, AdamConfig{});
    adam_step(p, p.zeros_like(), state);
    CHECK(p == before);
    CHECK(state.step == 1);
}

TEST_CASE("adam is deterministic")
{
    Rng rng(6);
    auto a = make_mlp(3, 4, 1, 2, rng);
    auto b = a;
    auto g = a;
    for (const Matrix* t : g.tensors())
        for (double& v : const_cast<Matrix*>(t)->values()) v = rng.normal();
    auto sa = make_adam_state(a, AdamConfig{});
    auto sb = sa;
    adam_step(a, g, sa);
    adam_step(b, g, sb);
    CHECK(a == b);
    CHECK(sa == sb);
}

TEST_CASE("non-finite gradient names the layer")
{
    Rng rng(8);
    auto p = make_mlp(3, 4, 1, 2, rng);
    auto g = p.zeros_like();
    g.layers[1].bias(0, 1) = std::numeric_limits<double>::infinity();
    auto state = make_adam_state(p, AdamConfig{});
    const auto before = p;
    CHECK_THROWS_WITH_AS(adam_step(p, g, state), doctest::Contains("layer 1 bias"), NumericError);
    CHECK(p == before);
    CHECK(state.step == 0);
}

TEST_CASE("polyak update endpoints and the published rate")
{
    Matrix target(1, 1, 0.0);
    const Matrix online(1, 1, 1.0);
    polyak_update(target, online, 0.005);
    CHECK(target(0, 0) == doctest::Approx(0.005).epsilon(1e-15));

    Rng rng(9);
    auto t = make_mlp(3, 4, 1, 2, rng);
    const auto o = make_mlp(3, 4, 1, 2, rng);
    const auto t0 = t;
    polyak_update(t, o, 0.0);
    CHECK(t == t0);
    polyak_update(t, o, 1.0);
    CHECK(t == o);
}

TEST_CASE("polyak update contracts toward the online parameters")
{
    Rng rng(10);
    auto t = make_mlp(3, 5, 2, 2, rng);
    const auto o = make_mlp(3, 5, 2, 2, rng);
    const auto before = flatten(t);
    const double tau = 0.3;
    polyak_update(t, o, tau);
    const auto after = flatten(t);
    const auto online = flatten(o);
    for (std::size_t i = 0; i < after.size(); ++i) {
        CHECK(std::abs(after[i] - online[i]) ==
              doctest::Approx((1.0 - tau) * std::abs(before[i] - online[i])).epsilon(1e-12));
    }
}

TEST_CASE("polyak update validates shape and rate")
{
    Matrix t(2, 2);
    CHECK_THROWS_AS(polyak_update(t, Matrix(2, 3), 0.1), ConfigError);
    CHECK_THROWS_AS(polyak_update(t, Matrix(2, 2), 1.5), ConfigError);
    CHECK_THROWS_AS(polyak_update(t, Matrix(2, 2), -0.1), ConfigError);
}

TEST_CASE("tanh gaussian at the origin")
{
    const std::size_t d = 3;
    const auto s = tanh_gaussian_sample(Matrix(1, d), Matrix(1, d), Matrix(1, d));
    CHECK(max_abs(s.action) == 0.0);
    const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    CHECK(s.log_prob(0, 0) ==
          doctest::Approx(-static_cast<double>(d) * half_log_2pi - d * std::log1p(1e-6)).epsilon(1e-14));
    CHECK(std::abs(s.log_prob(0, 0) + d * half_log_2pi) < 1e-5);
}

TEST_CASE("squashed density integrates to one")
{
    const double mu = 0.3;
    const double log_std = -0.5;
    const double sigma = std::exp(log_std);
    const std::size_t n = 200'000;
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = -1.0 + (static_cast<double>(k) + 0.5) * 2.0 / static_cast<double>(n);
        const double eps = (std::atanh(a) - mu) / sigma;
        const auto s = tanh_gaussian_sample(Matrix(1, 1, mu), Matrix(1, 1, log_std), Matrix(1, 1, eps));
        total += std::exp(s.log_prob(0, 0)) * 2.0 / static_cast<double>(n);
    }
    CHECK(std::abs(total - 1.0) < 1e-3);
}

TEST_CASE("saturated samples keep finite log-probabilities and stay inside the box")
{
    Rng rng(12);
    Matrix mean(64, 2);
    Matrix noise(64, 2);
    for (std::size_t i = 0; i < mean.size(); ++i) {
        mean[i] = rng.uniform(-40.0, 40.0);
        noise[i] = rng.normal();
    }
    const auto s = tanh_gaussian_sample(mean, Matrix(64, 2, 1.0), noise);
    CHECK(s.log_prob.all_finite());
    for (double a : s.action.values()) CHECK((a > -1.0 && a < 1.0));

    const auto big = tanh_gaussian_sample(Matrix(1, 1, 10.0), Matrix(1, 1), Matrix(1, 1));
    CHECK(std::isfinite(big.log_prob(0, 0)));
}

TEST_CASE("tanh gaussian backward matches central differences")
{
    Rng rng(13);
    const std::size_t n = 4;
    const std::size_t d = 2;
    const Matrix noise = random_matrix(n, d, rng, 1.5);
    const Matrix ga = random_matrix(n, d, rng);
    const Matrix glp = random_matrix(n, 1, rng);
    Matrix mean = random_matrix(n, d, rng);
    Matrix log_std = random_matrix(n, d, rng);
    auto loss = [&](std::span<const double> flat) {
        const Matrix m(n, d, std::vector<double>(flat.begin(), flat.begin() + n * d));
        const Matrix ls(n, d, std::vector<double>(flat.begin() + n * d, flat.end()));
        const auto s = tanh_gaussian_sample(m, ls, noise);
        double l = 0.0;
        for (std::size_t i = 0; i < s.action.size(); ++i) l += ga[i] * s.action[i];
        for (std::size_t i = 0; i < n; ++i) l += glp[i] * s.log_prob[i];
        return l;
    };
    const auto s = tanh_gaussian_sample(mean, log_std, noise);
    const auto g = tanh_gaussian_backward(s, log_std, noise, ga, glp);
    std::vector<double> point(mean.values().begin(), mean.values().end());
    point.insert(point.end(), log_std.values().begin(), log_std.values().end());
    std::vector<double> analytic(g.mean.values().begin(), g.mean.values().end());
    analytic.insert(analytic.end(), g.log_std.values().begin(), g.log_std.values().end());
    CHECK(gradient_check(loss, point, analytic, 1e-5) < 1e-4);
}

TEST_CASE("log_std gradient vanishes where the clamp is active")
{
    const Matrix log_std(1, 2, std::vector<double>{-12.0, 3.0});
    const Matrix noise(1, 2, 0.7);
    const auto s = tanh_gaussian_sample(Matrix(1, 2), log_std, noise);
    const auto g = tanh_gaussian_backward(s, log_std, noise, Matrix(1, 2, 1.0), Matrix(1, 1, 1.0));
    CHECK(g.log_std(0, 0) == 0.0);
    CHECK(g.log_std(0, 1) == 0.0);
}

TEST_CASE("parallel kernels reproduce the serial reference bit for bit")
{
    Rng rng(14);
    for (std::size_t rows : {1u, 3u, 4u, 7u, 64u, 257u}) {
        for (auto [in, out] : {std::pair<std::size_t, std::size_t>{5, 3}, {256, 256}, {13, 256}, {256, 1}}) {
            const Matrix x = random_matrix(rows, in, rng);
            const Matrix w = random_matrix(in, out, rng);
            const Matrix b = random_matrix(1, out, rng);
            const Matrix dy = random_matrix(rows, out, rng);
            Matrix y1, y2, dx1, dx2;
            kernels::dense_forward(x, w, b, y1);
            kernels::serial::dense_forward(x, w, b, y2);
            CHECK(bit_equal(y1, y2));
            kernels::dense_backward_input(dy, w, dx1);
            kernels::serial::dense_backward_input(dy, w, dx2);
            CHECK(bit_equal(dx1, dx2));
            Matrix gw1(in, out, 0.5), gb1(1, out, 0.25);
            Matrix gw2 = gw1, gb2 = gb1;
            kernels::dense_backward_params(x, dy, gw1, gb1);
            kernels::serial::dense_backward_params(x, dy, gw2, gb2);
            CHECK(bit_equal(gw1, gw2));
            CHECK(bit_equal(gb1, gb2));
        }
    }
}
