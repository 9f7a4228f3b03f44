#include "pseudo_rl/nn/serial_kernels.hpp"

namespace pseudo_rl::kernels::serial {

void dense_forward(const Matrix& x, const Matrix& weight, const Matrix& bias, Matrix& y)
{
    const std::size_t n = x.rows();
    const std::size_t in = weight.rows();
    const std::size_t out = weight.cols();
    y = Matrix(n, out);
    for (std::size_t i = 0; i < n; ++i) {
        double* yi = y.data() + i * out;
        const double* xi = x.data() + i * in;
        for (std::size_t j = 0; j < out; ++j) yi[j] = bias[j];
        for (std::size_t k = 0; k < in; ++k) {
            const double a = xi[k];
            const double* wk = weight.data() + k * out;
            for (std::size_t j = 0; j < out; ++j) yi[j] += a * wk[j];
        }
    }
}

void dense_backward_input(const Matrix& dy, const Matrix& weight, Matrix& dx)
{
    const std::size_t n = dy.rows();
    const std::size_t in = weight.rows();
    const std::size_t out = weight.cols();
    dx = Matrix(n, in);
    for (std::size_t i = 0; i < n; ++i) {
        const double* gi = dy.data() + i * out;
        for (std::size_t k = 0; k < in; ++k) {
            const double* wk = weight.data() + k * out;
            double s = 0.0;
            for (std::size_t j = 0; j < out; ++j) s += gi[j] * wk[j];
            dx(i, k) = s;
        }
    }
}

void dense_backward_params(const Matrix& x, const Matrix& dy, Matrix& grad_weight,
                           Matrix& grad_bias)
{
    const std::size_t n = x.rows();
    const std::size_t in = x.cols();
    const std::size_t out = dy.cols();
    for (std::size_t k = 0; k < in; ++k) {
        double* gk = grad_weight.data() + k * out;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = x(i, k);
            const double* gi = dy.data() + i * out;
            for (std::size_t j = 0; j < out; ++j) gk[j] += a * gi[j];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double* gi = dy.data() + i * out;
        for (std::size_t j = 0; j < out; ++j) grad_bias[j] += gi[j];
    }
}

} // namespace pseudo_rl::kernels::serial
