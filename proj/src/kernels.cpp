// SPDX-License-Identifier: Apache-2.0
#include "absa/kernels.hpp"

#include <cstddef>
#include <string>

#include "absa/errors.hpp"

namespace absa::kernels {

namespace {

void check_forward(const Tensor2& x, const Tensor2& w, const Tensor2& b, Tensor2& y) {
  if (x.cols() != w.cols()) {
    throw ShapeError("affine: input width " + std::to_string(x.cols()) +
                     " != weight cols " + std::to_string(w.cols()));
  }
  if (b.size() != w.rows()) throw ShapeError("affine: bias length != weight rows");
  if (y.rows() != x.rows() || y.cols() != w.rows()) y = Tensor2(x.rows(), w.rows());
}

void check_backward_input(const Tensor2& dy, const Tensor2& w, Tensor2& dx) {
  if (dy.cols() != w.rows()) throw ShapeError("affine backward: dy width != weight rows");
  if (dx.rows() != dy.rows() || dx.cols() != w.cols()) {
    throw ShapeError("affine backward: dx has wrong shape");
  }
}

void check_backward_params(const Tensor2& dy, const Tensor2& x, const Tensor2& dw,
                           const Tensor2& db) {
  if (dy.rows() != x.rows()) throw ShapeError("affine backward: dy/x row mismatch");
  if (dw.rows() != dy.cols() || dw.cols() != x.cols() || db.size() != dy.cols()) {
    throw ShapeError("affine backward: parameter gradient has wrong shape");
  }
}

// The loop bodies are shared so the serial and parallel builds cannot drift.

inline void forward_row(const Tensor2& x, const Tensor2& w, const Tensor2& b, Tensor2& y,
                        std::size_t n) {
  const std::size_t in = x.cols();
  const double* xr = x.row(n).data();
  double* yr = y.row(n).data();
  for (std::size_t o = 0; o < w.rows(); ++o) {
    const double* wr = w.row(o).data();
    double acc = b.data()[o];
    for (std::size_t i = 0; i < in; ++i) acc += wr[i] * xr[i];
    yr[o] = acc;
  }
}

inline void backward_input_row(const Tensor2& dy, const Tensor2& w, Tensor2& dx,
                               std::size_t n) {
  const std::size_t in = w.cols();
  const double* dyr = dy.row(n).data();
  double* dxr = dx.row(n).data();
  for (std::size_t o = 0; o < w.rows(); ++o) {
    const double g = dyr[o];
    if (g == 0.0) continue;
    const double* wr = w.row(o).data();
    for (std::size_t i = 0; i < in; ++i) dxr[i] += g * wr[i];
  }
}

inline void backward_params_row(const Tensor2& dy, const Tensor2& x, Tensor2& dw, Tensor2& db,
                                std::size_t o) {
  const std::size_t in = x.cols();
  double* dwr = dw.row(o).data();
  double bias_acc = 0.0;
  for (std::size_t n = 0; n < dy.rows(); ++n) {
    const double g = dy(n, o);
    if (g == 0.0) continue;
    bias_acc += g;
    const double* xr = x.row(n).data();
    for (std::size_t i = 0; i < in; ++i) dwr[i] += g * xr[i];
  }
  db.data()[o] += bias_acc;
}

}  // namespace

namespace serial {

void affine_forward(const Tensor2& x, const Tensor2& w, const Tensor2& b, Tensor2& y) {
  check_forward(x, w, b, y);
  for (std::size_t n = 0; n < x.rows(); ++n) forward_row(x, w, b, y, n);
}

void affine_backward_input(const Tensor2& dy, const Tensor2& w, Tensor2& dx) {
  check_backward_input(dy, w, dx);
  for (std::size_t n = 0; n < dy.rows(); ++n) backward_input_row(dy, w, dx, n);
}

void affine_backward_params(const Tensor2& dy, const Tensor2& x, Tensor2& dw, Tensor2& db) {
  check_backward_params(dy, x, dw, db);
  for (std::size_t o = 0; o < dy.cols(); ++o) backward_params_row(dy, x, dw, db, o);
}

}  // namespace serial

namespace parallel {

void affine_forward(const Tensor2& x, const Tensor2& w, const Tensor2& b, Tensor2& y) {
  check_forward(x, w, b, y);
  const auto rows = static_cast<std::ptrdiff_t>(x.rows());
  const bool big = x.rows() * w.size() >= kParallelWorkThreshold;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t n = 0; n < rows; ++n) forward_row(x, w, b, y, static_cast<std::size_t>(n));
}

void affine_backward_input(const Tensor2& dy, const Tensor2& w, Tensor2& dx) {
  check_backward_input(dy, w, dx);
  const auto rows = static_cast<std::ptrdiff_t>(dy.rows());
  const bool big = dy.rows() * w.size() >= kParallelWorkThreshold;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t n = 0; n < rows; ++n) {
    backward_input_row(dy, w, dx, static_cast<std::size_t>(n));
  }
}

void affine_backward_params(const Tensor2& dy, const Tensor2& x, Tensor2& dw, Tensor2& db) {
  check_backward_params(dy, x, dw, db);
  const auto outs = static_cast<std::ptrdiff_t>(dy.cols());
  const bool big = dy.rows() * dw.size() >= kParallelWorkThreshold;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t o = 0; o < outs; ++o) {
    backward_params_row(dy, x, dw, db, static_cast<std::size_t>(o));
  }
}

}  // namespace parallel

Tensor2 affine(const Tensor2& x, const Tensor2& w, const Tensor2& b) {
  Tensor2 y(x.rows(), w.rows());
  parallel::affine_forward(x, w, b, y);
  return y;
}

void affine_backward_input(const Tensor2& dy, const Tensor2& w, Tensor2& dx) {
  parallel::affine_backward_input(dy, w, dx);
}

void affine_backward_params(const Tensor2& dy, const Tensor2& x, Tensor2& dw, Tensor2& db) {
  parallel::affine_backward_params(dy, x, dw, db);
}

}  // namespace absa::kernels
