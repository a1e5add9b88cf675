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

#include <utility>
#include <vector>

#include "qsprep/poly.hpp"

// Closed-form equioscillating polynomial approximation of 1/x on the
// symmetric domain [-1, -a] u [a, 1].  The approximant of degree 2n-1 is
// built from a weighted pair of Chebyshev polynomials evaluated through a
// quadratic change of variable; its error bound decays geometrically in n.

namespace qsprep::inversion {

struct InversionSpec {
  double a = 0.5;  // inner edge of the domain, 0 < a < 1
  int n = 1;       // half-degree; the approximant has degree 2n-1
};

struct InversionPolynomial {
  InversionSpec spec;
  RealChebPoly cheb;        // degree 2n-1; even-order coefficients are zero
  double eps_bound = 0.0;   // closed-form error bound
  double eps_measured = 0.0;  // dense-grid maximum of |P(x) - 1/x| on the domain
  int alternation_count = 0;  // sign-alternating extrema at the measured level
};

// L_n(y) = 2^{1-n} (T_n(y) + rho T_{n-1}(y)), rho = (1-a)/(1+a).  The weighted
// pair underlying the approximant; valid for any real y including |y| > 1.
double eval_L(double y, const InversionSpec& spec);

// The approximant P(x) itself, evaluated pointwise from the closed form.
// Uses the difference arrangement (L_n at the base point minus L_n at the
// shifted point, over x times the base value) with a coupled recurrence for
// the difference, so the evaluation loses only O(n) ulps even for |x| << a
// where the textbook "1/x minus ratio" arrangement cancels catastrophically.
// P(0) = 0 by construction (odd function).
double eval_inversion(double x, const InversionSpec& spec);

// Closed-form bound sqrt(1+a^2)/a * (1-a)^n / (1+a)^{n-1}, evaluated in log
// space so large n neither overflows nor underflows prematurely.
double error_bound(double a, int n);

// Smallest n >= 1 with error_bound(a, n) <= eps (log-space comparison, with
// an index walk around the closed-form estimate to settle boundary ties).
int select_degree(double a, double eps);

// Sample the closed form at the 2n Chebyshev-Gauss nodes of degree 2n-1,
// interpolate, verify odd parity (even-order coefficients below 1e-10, else
// ParityError), snap the even-order roundoff to exact zeros, and measure the
// achieved error on a dense grid (1e5 points per interval by default).
InversionPolynomial build(const InversionSpec& spec);

// max over a uniform grid on [a, 1] (odd symmetry covers the mirror
// interval) of |P(x) - 1/x| evaluated from the stored coefficients, with a
// golden-section refinement pass around each local maximum.
// grid_per_interval >= 100*n.
double measure_error(const InversionPolynomial& ip, int grid_per_interval);

// Number of sign-alternating error extrema over the full domain whose
// magnitude is within 1e-6 relative of the measured error.  An
// equioscillating approximant of degree 2n-1 yields at least 2n+1.
int alternation_count(const InversionPolynomial& ip, int grid_per_interval);

// (x, P(x) - 1/x) samples over [-1, -a] and [a, 1], per_interval points on
// each interval; plotting/CSV support.
std::vector<std::pair<double, double>> error_curve(const InversionPolynomial& ip,
                                                   int per_interval);

}  // namespace qsprep::inversion
