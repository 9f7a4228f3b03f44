#pragma once

#include "pseudo_rl/core/matrix.hpp"

// Single-threaded reference versions of the dense kernels. Used by tests to
// pin the parallel kernels bit-for-bit and by the kernel benchmark.

namespace pseudo_rl::kernels::serial {

void dense_forward(const Matrix& x, const Matrix& weight, const Matrix& bias, Matrix& y);
void dense_backward_input(const Matrix& dy, const Matrix& weight, Matrix& dx);
void dense_backward_params(const Matrix& x, const Matrix& dy, Matrix& grad_weight,
                           Matrix& grad_bias);

} // namespace pseudo_rl::kernels::serial
