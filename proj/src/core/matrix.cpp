#include "pseudo_rl/core/matrix.hpp"

#include <algorithm>
#include <cstring>

namespace pseudo_rl {

Matrix slice_cols(const Matrix& m, std::size_t first, std::size_t count)
{
    if (first + count > m.cols()) {
        throw ConfigError("slice_cols: columns [" + std::to_string(first) + ", " +
                          std::to_string(first + count) + ") out of range for " +
                          m.shape_string());
    }
    Matrix out(m.rows(), count);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto src = m.row_span(r).subspan(first, count);
        std::copy(src.begin(), src.end(), out.row_span(r).begin());
    }
    return out;
}

Matrix hconcat(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows()) {
        throw ConfigError("hconcat: row mismatch " + a.shape_string() + " vs " + b.shape_string());
    }
    Matrix out(a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto dst = out.row_span(r);
        std::copy(a.row_span(r).begin(), a.row_span(r).end(), dst.begin());
        std::copy(b.row_span(r).begin(), b.row_span(r).end(), dst.begin() + a.cols());
    }
    return out;
}

double max_abs(const Matrix& m) noexcept
{
    double best = 0.0;
    for (double x : m.values()) best = std::max(best, std::abs(x));
    return best;
}

bool bit_equal(std::span<const double> a, std::span<const double> b) noexcept
{
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

bool bit_equal(const Matrix& a, const Matrix& b) noexcept
{
    return a.same_shape(b) && bit_equal(a.values(), b.values());
}

} // namespace pseudo_rl
