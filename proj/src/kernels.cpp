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

#include "qsprep/kernels.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

// Both namespaces below route through shared *_impl helpers whose per-element
// arithmetic is identical; the only difference is whether the element loop
// runs under an OpenMP pragma.  That keeps serial and parallel results
// bitwise equal (each output element is a fixed dataflow, independent of
// scheduling), which the tests assert.

namespace qsprep::kernels {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int pow2_ceil(int n) {
  if (n <= 1) return 1;
  return static_cast<int>(std::bit_ceil(static_cast<unsigned>(n)));
}

FftPlan::FftPlan(int size) : n(size) {
  if (!is_pow2(n)) throw std::invalid_argument("fft size must be a power of two");
  twiddle.resize(n / 2);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int k = 0; k < n / 2; ++k) twiddle[k] = std::polar(1.0, -(two_pi * k) / n);
}

namespace {

inline void butterfly(cxd& a, cxd& b, cxd w) {
  const cxd v = b * w;
  b = a - v;
  a += v;
}

void bit_reverse(std::span<cxd> data) {
  const int n = static_cast<int>(data.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
}

void fft_impl(std::span<cxd> data, const FftPlan& plan, bool inverse, bool parallel) {
  const int n = plan.n;
  if (static_cast<int>(data.size()) != n) throw std::invalid_argument("fft data/plan size mismatch");
  if (n == 1) return;
  bit_reverse(data);
  for (int len = 2; len <= n; len <<= 1) {
    const int half = len >> 1;
    const int step = n / len;
    const int pairs = n / 2;
    if (parallel) {
#pragma omp parallel for schedule(static) if (n >= 8192)
      for (int idx = 0; idx < pairs; ++idx) {
        const int blk = idx / half;
        const int k = idx % half;
        const int i0 = blk * len + k;
        const cxd w = plan.twiddle[k * step];
        butterfly(data[i0], data[i0 + half], inverse ? std::conj(w) : w);
      }
    } else {
      for (int idx = 0; idx < pairs; ++idx) {
        const int blk = idx / half;
        const int k = idx % half;
        const int i0 = blk * len + k;
        const cxd w = plan.twiddle[k * step];
        butterfly(data[i0], data[i0 + half], inverse ? std::conj(w) : w);
      }
    }
  }
}

void unit_circle_impl(int n, std::span<cxd> points, bool parallel) {
  if (static_cast<int>(points.size()) != n) throw std::invalid_argument("point span size mismatch");
  const double two_pi = 2.0 * std::numbers::pi;
  if (parallel) {
#pragma omp parallel for schedule(static) if (n >= 4096)
    for (int k = 0; k < n; ++k) points[k] = std::polar(1.0, (two_pi * k) / n);
  } else {
    for (int k = 0; k < n; ++k) points[k] = std::polar(1.0, (two_pi * k) / n);
  }
}

inline cxd horner_point(const ComplexPoly& p, cxd z) {
  cxd acc = p.coeff.back();
  for (int k = static_cast<int>(p.coeff.size()) - 2; k >= 0; --k) acc = acc * z + p.coeff[k];
  return acc;
}

void horner_impl(const ComplexPoly& p, std::span<const cxd> points, std::span<cxd> out,
                 bool parallel) {
  if (points.size() != out.size()) throw std::invalid_argument("horner span size mismatch");
  const int n = static_cast<int>(points.size());
  if (parallel) {
#pragma omp parallel for schedule(static) if (n >= 1024)
    for (int k = 0; k < n; ++k) out[k] = horner_point(p, points[k]);
  } else {
    for (int k = 0; k < n; ++k) out[k] = horner_point(p, points[k]);
  }
}

inline MaxScan combine(MaxScan a, MaxScan b) {
  if (b.value > a.value || (b.value == a.value && b.index < a.index)) return b;
  return a;
}

template <class T>
MaxScan max_abs_impl(std::span<const T> values, bool parallel) {
  if (values.empty()) throw std::invalid_argument("max_abs over empty span");
  const int n = static_cast<int>(values.size());
  MaxScan best{std::abs(values[0]), 0};
  if (parallel) {
    // Thread-local scans merged with an exact, order-independent combiner.
#pragma omp parallel if (n >= 4096)
    {
      MaxScan local{std::abs(values[0]), 0};
#pragma omp for schedule(static) nowait
      for (int k = 1; k < n; ++k) local = combine(local, MaxScan{std::abs(values[k]), k});
#pragma omp critical(qsprep_max_abs)
      best = combine(best, local);
    }
  } else {
    for (int k = 1; k < n; ++k) best = combine(best, MaxScan{std::abs(values[k]), k});
  }
  return best;
}

}  // namespace

namespace serial {

void fft(std::span<cxd> data, const FftPlan& plan, bool inverse) {
  fft_impl(data, plan, inverse, false);
}
void unit_circle(int n, std::span<cxd> points) { unit_circle_impl(n, points, false); }
void horner(const ComplexPoly& p, std::span<const cxd> points, std::span<cxd> out) {
  horner_impl(p, points, out, false);
}
MaxScan max_abs(std::span<const double> values) { return max_abs_impl(values, false); }
MaxScan max_abs(std::span<const cxd> values) { return max_abs_impl(values, false); }

}  // namespace serial

namespace par {

void fft(std::span<cxd> data, const FftPlan& plan, bool inverse) {
  fft_impl(data, plan, inverse, true);
}
void unit_circle(int n, std::span<cxd> points) { unit_circle_impl(n, points, true); }
void horner(const ComplexPoly& p, std::span<const cxd> points, std::span<cxd> out) {
  horner_impl(p, points, out, true);
}
MaxScan max_abs(std::span<const double> values) { return max_abs_impl(values, true); }
MaxScan max_abs(std::span<const cxd> values) { return max_abs_impl(values, true); }

}  // namespace par

}  // namespace qsprep::kernels
