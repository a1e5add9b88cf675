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

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qsprep/poly.hpp"

// Hot loops, each provided twice: a serial reference implementation
// (qsprep::kernels::serial) and an OpenMP variant (qsprep::kernels::par).
// Both versions compute every output element through the same scalar
// dataflow, so their results are bitwise identical for any thread count;
// the unit tests assert this and the benchmark target compares their speed.
// Reductions use only exact associative/commutative combiners (max with a
// deterministic index tie-break), never floating-point sums.

namespace qsprep::kernels {

// Twiddle factors for an in-place radix-2 transform of power-of-two size n.
struct FftPlan {
  int n = 0;
  std::vector<cxd> twiddle;  // twiddle[k] = exp(-2*pi*i*k/n), k < n/2

  explicit FftPlan(int n);
};

// Index of the maximum together with the value; ties resolve to the smaller
// index, making the reduction order-independent.
struct MaxScan {
  double value = 0.0;
  int index = 0;
};

bool is_pow2(int n);
int pow2_ceil(int n);

namespace serial {

// Unscaled transform: forward applies sum_j x_j e^{-2 pi i jk/n}; inverse
// applies the conjugate kernel and does NOT divide by n.
void fft(std::span<cxd> data, const FftPlan& plan, bool inverse);

// points[k] = exp(2*pi*i*k/n) for k < n.
void unit_circle(int n, std::span<cxd> points);

// out[k] = p(points[k]) by Horner.
void horner(const ComplexPoly& p, std::span<const cxd> points, std::span<cxd> out);

// Deterministic max/argmax of |values| (tie -> smaller index).
MaxScan max_abs(std::span<const double> values);
MaxScan max_abs(std::span<const cxd> values);

}  // namespace serial

namespace par {

void fft(std::span<cxd> data, const FftPlan& plan, bool inverse);
void unit_circle(int n, std::span<cxd> points);
void horner(const ComplexPoly& p, std::span<const cxd> points, std::span<cxd> out);
MaxScan max_abs(std::span<const double> values);
MaxScan max_abs(std::span<const cxd> values);

}  // namespace par

}  // namespace qsprep::kernels
