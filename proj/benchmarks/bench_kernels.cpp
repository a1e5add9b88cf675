/*
 * Copyright 2026 The qsprep authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial-vs-OpenMP timing for the hot loops, plus one end-to-end completion.
// The two variants of each kernel produce bitwise-identical output (asserted
// in the unit tests); this target only measures the speed gap.

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "qsprep/completion.hpp"
#include "qsprep/kernels.hpp"
#include "qsprep/poly.hpp"

using namespace qsprep;
namespace k = qsprep::kernels;

namespace {

std::vector<cxd> random_signal(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cxd> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = cxd(u(rng), u(rng));
  return v;
}

ComplexPoly random_poly(int degree, std::uint64_t seed) {
  auto c = random_signal(degree + 1, seed);
  c.front() += cxd(2.0, 0.0);  // keep the constant term well away from zero
  ComplexPoly p(std::move(c));
  const double sup = sup_norm_circle(p, 16 * (degree + 1));
  for (auto& v : p.coeff) v *= 0.9 / sup;
  return p;
}

template <void (*Fft)(std::span<cxd>, const k::FftPlan&, bool)>
void bm_fft(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const k::FftPlan plan(n);
  const auto base = random_signal(n, 42);
  std::vector<cxd> work(base);
  for (auto _ : state) {
    work = base;
    Fft(work, plan, false);
    benchmark::DoNotOptimize(work.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

template <void (*Horner)(const ComplexPoly&, std::span<const cxd>, std::span<cxd>)>
void bm_horner(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexPoly p = random_poly(64, 7);
  std::vector<cxd> nodes(static_cast<std::size_t>(n));
  k::serial::unit_circle(n, nodes);
  std::vector<cxd> out(nodes.size());
  for (auto _ : state) {
    Horner(p, nodes, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

template <k::MaxScan (*MaxAbs)(std::span<const cxd>)>
void bm_max_abs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto data = random_signal(n, 99);
  for (auto _ : state) {
    k::MaxScan m = MaxAbs(data);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void bm_complete(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  const auto t = completion::validate_target(random_poly(degree, 1234));
  for (auto _ : state) {
    auto res = completion::complete(t);
    benchmark::DoNotOptimize(res.q.coeff.data());
  }
}

}  // namespace

BENCHMARK(bm_fft<k::serial::fft>)->Name("fft/serial")->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(bm_fft<k::par::fft>)->Name("fft/par")->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(bm_horner<k::serial::horner>)
    ->Name("horner/serial")
    ->Arg(1 << 12)
    ->Arg(1 << 16)
    ->Arg(1 << 20);
BENCHMARK(bm_horner<k::par::horner>)->Name("horner/par")->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(bm_max_abs<k::serial::max_abs>)->Name("max_abs/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(bm_max_abs<k::par::max_abs>)->Name("max_abs/par")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(bm_complete)->Name("complete")->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
