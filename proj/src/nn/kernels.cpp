#include "pseudo_rl/nn/kernels.hpp"

#include <cstdint>
#include <vector>

namespace pseudo_rl::kernels {

namespace {

// Below this many multiply-adds the fork/join overhead outweighs the work.
constexpr std::size_t kParallelThreshold = std::size_t{1} << 17;
constexpr std::int64_t kBlock = 4;

// y[r] += sum_k a[r][k] * b[k] for the rows of one block, where a[r][k] is
// a_base[r * a_row + k * a_col]. Each y entry accumulates over k in order.
inline void accumulate_block(std::int64_t rows, const double* a_base, std::size_t a_row,
                             std::size_t a_col, std::size_t depth, const double* b, std::size_t width,
                             double* y, std::size_t y_row)
{
    if (rows == kBlock) {
        double* y0 = y;
        double* y1 = y + y_row;
        double* y2 = y + 2 * y_row;
        double* y3 = y + 3 * y_row;
        for (std::size_t k = 0; k < depth; ++k) {
            const double a0 = a_base[k * a_col];
            const double a1 = a_base[a_row + k * a_col];
            const double a2 = a_base[2 * a_row + k * a_col];
            const double a3 = a_base[3 * a_row + k * a_col];
            const double* bk = b + k * width;
            for (std::size_t j = 0; j < width; ++j) {
                const double w = bk[j];
                y0[j] += a0 * w;
                y1[j] += a1 * w;
                y2[j] += a2 * w;
                y3[j] += a3 * w;
            }
        }
        return;
    }
    for (std::int64_t r = 0; r < rows; ++r) {
        double* yr = y + static_cast<std::size_t>(r) * y_row;
        const double* ar = a_base + static_cast<std::size_t>(r) * a_row;
        for (std::size_t k = 0; k < depth; ++k) {
            const double a = ar[k * a_col];
            const double* bk = b + k * width;
            for (std::size_t j = 0; j < width; ++j) yr[j] += a * bk[j];
        }
    }
}

inline std::int64_t block_rows(std::int64_t start, std::int64_t total)
{
    return total - start < kBlock ? total - start : kBlock;
}

} // namespace

void dense_forward(const Matrix& x, const Matrix& weight, const Matrix& bias, Matrix& y)
{
    const std::int64_t n = static_cast<std::int64_t>(x.rows());
    const std::size_t in = weight.rows();
    const std::size_t out = weight.cols();
    y = Matrix(x.rows(), out);
    const double* xd = x.data();
    const double* wd = weight.data();
    const double* bd = bias.data();
    double* yd = y.data();
    const std::int64_t blocks = (n + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static) if (x.rows() * in * out > kParallelThreshold)
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::int64_t i0 = b * kBlock;
        const std::int64_t rows = block_rows(i0, n);
        double* yi = yd + static_cast<std::size_t>(i0) * out;
        for (std::int64_t r = 0; r < rows; ++r)
            for (std::size_t j = 0; j < out; ++j) yi[static_cast<std::size_t>(r) * out + j] = bd[j];
        accumulate_block(rows, xd + static_cast<std::size_t>(i0) * in, in, 1, in, wd, out, yi, out);
    }
}

void dense_backward_input(const Matrix& dy, const Matrix& weight, Matrix& dx)
{
    const std::int64_t n = static_cast<std::int64_t>(dy.rows());
    const std::size_t in = weight.rows();
    const std::size_t out = weight.cols();
    dx = Matrix(dy.rows(), in);
    std::vector<double> wt(in * out);
    const double* wd = weight.data();
    for (std::size_t k = 0; k < in; ++k)
        for (std::size_t j = 0; j < out; ++j) wt[j * in + k] = wd[k * out + j];
    const double* gd = dy.data();
    double* xd = dx.data();
    const std::int64_t blocks = (n + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static) if (dy.rows() * in * out > kParallelThreshold)
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::int64_t i0 = b * kBlock;
        accumulate_block(block_rows(i0, n), gd + static_cast<std::size_t>(i0) * out, out, 1, out,
                         wt.data(), in, xd + static_cast<std::size_t>(i0) * in, in);
    }
}

void dense_backward_params(const Matrix& x, const Matrix& dy, Matrix& grad_weight,
                           Matrix& grad_bias)
{
    const std::size_t n = x.rows();
    const std::int64_t in = static_cast<std::int64_t>(x.cols());
    const std::size_t out = dy.cols();
    const double* xd = x.data();
    const double* gd = dy.data();
    double* gw = grad_weight.data();
    const std::int64_t blocks = (in + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static) if (n * x.cols() * out > kParallelThreshold)
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::int64_t k0 = b * kBlock;
        accumulate_block(block_rows(k0, in), xd + k0, 1, x.cols(), n, gd, out,
                         gw + static_cast<std::size_t>(k0) * out, out);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double* gi = gd + i * out;
        for (std::size_t j = 0; j < out; ++j) grad_bias[j] += gi[j];
    }
}

void relu_inplace(Matrix& y)
{
    for (double& v : y.values())
        if (v < 0.0) v = 0.0;
}

void relu_backward_inplace(const Matrix& activation, Matrix& dy)
{
    const auto a = activation.values();
    auto g = dy.values();
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!(a[i] > 0.0)) g[i] = 0.0;
}

} // namespace pseudo_rl::kernels
