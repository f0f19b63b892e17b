// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "absa/tensor.hpp"

// Row-wise affine kernels shared by every dense, convolution, maxout and GRU
// layer. Two builds of each kernel exist: `serial` is the plain reference
// loop nest, `parallel` distributes independent output rows over OpenMP
// threads. Both accumulate every output element in the same order, so their
// results are bit-identical and training stays reproducible regardless of
// thread count.
//
// Shapes: x is N x I, w is O x I, b is 1 x O, dy is N x O.

namespace absa::kernels {

namespace serial {
/// y = x w^T + b
void affine_forward(const Tensor2& x, const Tensor2& w, const Tensor2& b, Tensor2& y);
/// dx += dy w
void affine_backward_input(const Tensor2& dy, const Tensor2& w, Tensor2& dx);
/// dw += dy^T x, db += column sums of dy
void affine_backward_params(const Tensor2& dy, const Tensor2& x, Tensor2& dw, Tensor2& db);
}  // namespace serial

namespace parallel {
void affine_forward(const Tensor2& x, const Tensor2& w, const Tensor2& b, Tensor2& y);
void affine_backward_input(const Tensor2& dy, const Tensor2& w, Tensor2& dx);
void affine_backward_params(const Tensor2& dy, const Tensor2& x, Tensor2& dw, Tensor2& db);
}  // namespace parallel

/// Multiply-accumulate count below which `parallel` kernels stay on one
/// thread.
inline constexpr std::size_t kParallelWorkThreshold = 1 << 16;

// Layers call these; they route to `parallel`.
Tensor2 affine(const Tensor2& x, const Tensor2& w, const Tensor2& b);
void affine_backward_input(const Tensor2& dy, const Tensor2& w, Tensor2& dx);
void affine_backward_params(const Tensor2& dy, const Tensor2& x, Tensor2& dw, Tensor2& db);

}  // namespace absa::kernels
