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

// Reference implementations that cross-check the fast paths by a different
// route: complementary polynomials assembled from explicit eigenvalue root
// finding instead of spectral projection.  Cubic in the degree and restricted
// to small inputs; intended for tests and the verify command, not production.

#pragma once

#include <vector>

#include "qsprep/completion.hpp"
#include "qsprep/errors.hpp"
#include "qsprep/poly.hpp"

namespace qsprep::reference {

// Unordered collection of polynomial roots, repeated per multiplicity.
struct RootMultiset {
  std::vector<cxd> roots;
};

// Result of the best uniform-phase alignment of two polynomials.
struct PhaseAlign {
  cxd phase;        // unimodular factor u minimizing sum |q1_k - u q2_k|^2
  double max_diff;  // max_k |q1_k - u q2_k| after alignment
};

// All roots of p (degree as given, 1..32) via the companion-matrix
// eigenproblem, each followed by one guarded Newton correction.  Throws
// LeadingCoefficientZeroError when |lead| < 1e-12 and DegreeTooHighError
// above degree 32.  A degree-0 input yields the empty multiset.
RootMultiset roots_via_companion(const ComplexPoly& p);

// Complementary polynomial of a validated target by explicit factorization:
// roots of z^d - P(z) conj(P)(1/z) are split into unit-circle clusters (even
// multiplicity, halved) and reciprocal pairs (r, 1/conj(r)), one member kept
// per pair; the monic product is rescaled so |P|^2 + |Q|^2 = 1 and rotated
// to the same phase convention as the spectral construction (Q(0) real
// positive when no circle roots are present).  Degree is capped at 8.
ComplexPoly complementary_by_roots(const completion::TargetPolynomial& p);

// Optimal unimodular alignment u = <q1, q2> / |<q1, q2>| and the residual
// sup difference of coefficients.  Degrees must match; throws
// ZeroPolynomialError when either side is identically zero or the inner
// product vanishes.
PhaseAlign align_phase(const ComplexPoly& q1, const ComplexPoly& q2);

}  // namespace qsprep::reference

