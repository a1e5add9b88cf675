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

namespace qsprep {

using cxd = std::complex<double>;

// Dense polynomial over C in the monomial basis.  coeff[k] multiplies z^k;
// the vector is never empty (the zero polynomial is the single coefficient 0).
struct ComplexPoly {
  std::vector<cxd> coeff;

  ComplexPoly() : coeff(1, cxd(0.0, 0.0)) {}
  explicit ComplexPoly(std::vector<cxd> c);
  ComplexPoly(std::initializer_list<cxd> c) : ComplexPoly(std::vector<cxd>(c)) {}

  int degree() const { return static_cast<int>(coeff.size()) - 1; }

  // Copy with trailing coefficients of modulus < tol removed (at least one
  // coefficient always remains).
  ComplexPoly trimmed(double tol = 1e-12) const;
};

// Dense polynomial over R in the Chebyshev basis of the first kind.
// coeff[k] multiplies T_k(x); the vector is never empty.
struct RealChebPoly {
  std::vector<double> coeff;

  RealChebPoly() : coeff(1, 0.0) {}
  explicit RealChebPoly(std::vector<double> c);
  RealChebPoly(std::initializer_list<double> c) : RealChebPoly(std::vector<double>(c)) {}

  int degree() const { return static_cast<int>(coeff.size()) - 1; }
};

// Complex values sampled on the uniform grid z_k = exp(2*pi*i*k/n_points).
// n_points must be a power of two so the transform kernels apply directly.
struct UnitGridSamples {
  int n_points = 0;
  std::vector<cxd> value;

  UnitGridSamples() = default;
  UnitGridSamples(int n, std::vector<cxd> v);
};

// Horner evaluation of p at z.
cxd evaluate_monomial(const ComplexPoly& p, cxd z);

// Clenshaw evaluation of a Chebyshev series at x.  Uses the three-term
// backward recurrence, which stays valid for |x| > 1 (where the cosine form
// does not); extended precision is carried internally so the result is
// accurate to a few ulps even for long series.
double evaluate_chebyshev(const RealChebPoly& p, double x);

// z^d * conj(p)(1/conj(z)): the coefficient list reversed and conjugated.
// On |z| = 1 the result has the same modulus as p.  Involution.
ComplexPoly conjugate_reciprocal(const ComplexPoly& p);

// Lift of a real Chebyshev series to the circle: with m = degree(p),
//   L(z) = c_0 z^m + sum_{k>=1} (c_k/2) (z^{m+k} + z^{m-k}),
// a degree-2m polynomial satisfying |L(e^{i t})| = |p(cos t)|.
ComplexPoly circle_lift(const RealChebPoly& p);

// The degree+1 Chebyshev-Gauss nodes cos((j+1/2)*pi/(degree+1)) in the usual
// descending order, generated with exact +/- symmetry: node[m-j] == -node[j].
std::vector<double> chebyshev_gauss_nodes(int degree);

// Interpolation through samples taken at chebyshev_gauss_nodes(degree):
// returns the exact Chebyshev coefficients of the unique interpolant via the
// discrete cosine relations (exact up to roundoff; extended-precision
// accumulation).  samples.size() must equal degree+1.
RealChebPoly chebyshev_interpolate(std::span<const double> samples, int degree);

// max over the unit circle of |p|, estimated on an n_grid-point uniform grid
// (n_grid >= 4*(degree+1)) followed by one golden-section refinement pass
// around the best grid bucket.  Always a lower bound on the true sup-norm.
double sup_norm_circle(const ComplexPoly& p, int n_grid);

// Expansion of a Chebyshev series into monomial coefficients (imaginary
// parts zero).  The change of basis is exact in structure but numerically
// ill-conditioned: monomial coefficients grow like 2^degree, so round-trip
// accuracy degrades noticeably past degree ~40.
ComplexPoly chebyshev_to_monomial(const RealChebPoly& p);

// Convolution product.
ComplexPoly multiply(const ComplexPoly& a, const ComplexPoly& b);

// Synthetic division of p by (z - root): returns the quotient and stores the
// remainder p(root) through `remainder` when non-null.
ComplexPoly deflate(const ComplexPoly& p, cxd root, cxd* remainder);

// Largest coefficient modulus (coefficient-wise infinity norm).
double coeff_inf_norm(const ComplexPoly& p);

}  // namespace qsprep
