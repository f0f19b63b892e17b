// SPDX-License-Identifier: Apache-2.0
// Serial reference vs OpenMP row-parallel affine kernels. Args: rows, in, out.
#include <benchmark/benchmark.h>

#include "absa/kernels.hpp"
#include "absa/rng.hpp"

namespace {

using absa::Tensor2;

Tensor2 random_tensor(std::size_t rows, std::size_t cols, absa::Rng& rng) {
  Tensor2 t(rows, cols);
  for (double& v : t.data()) v = rng.uniform(-1.0, 1.0);
  return t;
}

struct Operands {
  Tensor2 x, w, b, y, dy, dx, dw, db;
  explicit Operands(const benchmark::State& s) {
    absa::Rng rng(7);
    const auto n = static_cast<std::size_t>(s.range(0));
    const auto in = static_cast<std::size_t>(s.range(1));
    const auto out = static_cast<std::size_t>(s.range(2));
    x = random_tensor(n, in, rng);
    w = random_tensor(out, in, rng);
    b = random_tensor(1, out, rng);
    y = Tensor2(n, out);
    dy = random_tensor(n, out, rng);
    dx = Tensor2(n, in);
    dw = Tensor2(out, in);
    db = Tensor2(1, out);
  }
};

template <void (*Fn)(const Tensor2&, const Tensor2&, const Tensor2&, Tensor2&)>
void BM_Forward(benchmark::State& state) {
  Operands o(state);
  for (auto _ : state) {
    Fn(o.x, o.w, o.b, o.y);
    benchmark::DoNotOptimize(o.y.data().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1) * state.range(2));
}

template <void (*Fn)(const Tensor2&, const Tensor2&, Tensor2&)>
void BM_BackwardInput(benchmark::State& state) {
  Operands o(state);
  for (auto _ : state) {
    Fn(o.dy, o.w, o.dx);
    benchmark::DoNotOptimize(o.dx.data().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1) * state.range(2));
}

template <void (*Fn)(const Tensor2&, const Tensor2&, Tensor2&, Tensor2&)>
void BM_BackwardParams(benchmark::State& state) {
  Operands o(state);
  for (auto _ : state) {
    Fn(o.dy, o.x, o.dw, o.db);
    benchmark::DoNotOptimize(o.dw.data().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1) * state.range(2));
}

// Shapes seen in training: tagger conv (sentence x 3*146 -> 50), GRU gates
// (1 x 100 -> 100), large batched case.
void shapes(benchmark::internal::Benchmark* b) {
  b->Args({40, 438, 50})->Args({1, 100, 100})->Args({40, 150, 100})->Args({512, 512, 512});
}

namespace k = absa::kernels;
BENCHMARK(BM_Forward<k::serial::affine_forward>)->Apply(shapes);
BENCHMARK(BM_Forward<k::parallel::affine_forward>)->Apply(shapes);
BENCHMARK(BM_BackwardInput<k::serial::affine_backward_input>)->Apply(shapes);
BENCHMARK(BM_BackwardInput<k::parallel::affine_backward_input>)->Apply(shapes);
BENCHMARK(BM_BackwardParams<k::serial::affine_backward_params>)->Apply(shapes);
BENCHMARK(BM_BackwardParams<k::parallel::affine_backward_params>)->Apply(shapes);

}  // namespace

BENCHMARK_MAIN();
