#pragma once

#include "pseudo_rl/core/matrix.hpp"

// Dense-layer kernels. Weights are stored input-major (in x out) so a forward
// pass is y = x * W + b with contiguous inner loops.
//
// The default kernels split rows across OpenMP threads. Each output element is
// produced by exactly one thread with a fixed summation order, so results are
// bit-identical to the serial reference in serial_kernels.hpp regardless of
// thread count.

namespace pseudo_rl::kernels {

/// y = x * weight + bias. `y` is resized.
void dense_forward(const Matrix& x, const Matrix& weight, const Matrix& bias, Matrix& y);

/// dx = dy * weight^T. `dx` is resized.
void dense_backward_input(const Matrix& dy, const Matrix& weight, Matrix& dx);

/// grad_weight += x^T * dy, grad_bias += column sums of dy.
void dense_backward_params(const Matrix& x, const Matrix& dy, Matrix& grad_weight,
                           Matrix& grad_bias);

/// In-place ReLU.
void relu_inplace(Matrix& y);

/// dy *= (activation > 0), the ReLU derivative evaluated on the layer output.
void relu_backward_inplace(const Matrix& activation, Matrix& dy);

} // namespace pseudo_rl::kernels
