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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsprep/errors.hpp"
#include "qsprep/poly.hpp"

// Exact construction of a complementary polynomial: given P with |P| <= 1 on
// the unit circle, find Q of the same degree with |P|^2 + |Q|^2 = 1 there.
// The construction factors out unit-circle zeros of 1 - |P|^2 (which carry
// even multiplicity), takes the analytic (one-sided) part of the log of the
// remaining strictly positive ratio on a power-of-two grid, exponentiates,
// and reads the coefficients back off the grid -- doubling the grid until
// the coefficient tail and the verification defect both pass tolerance.

namespace qsprep::completion {

// A validated completion input.  Construct through validate_target.
struct TargetPolynomial {
  ComplexPoly poly;                  // canonicalized (trailing near-zeros trimmed)
  double sup_norm = 0.0;             // measured circle sup-norm (refined grid lower bound)
  bool strictly_contractive = false; // sup_norm < 1 - 1e-4
};

// One unit-circle root of 1 - |P|^2: location t (projected exactly onto the
// circle) and half multiplicity l (the full multiplicity 2l is always even).
struct CircleRoot {
  cxd t;
  int half_multiplicity = 0;
};

struct CircleRootSet {
  std::vector<CircleRoot> roots;  // pairwise distinct, sorted by angle

  // Count of distinct detected roots.
  int d0() const { return static_cast<int>(roots.size()); }

  // Degree of the collected factor Q0 = prod (z - t_j)^{l_j}.
  int degree_q0() const {
    int m = 0;
    for (const CircleRoot& r : roots) m += r.half_multiplicity;
    return m;
  }
};

struct CompletionConfig {
  double tau_defect = 1e-12;   // acceptance threshold for the verification defect
  double tau_tail = 1e-13;     // acceptance threshold for the coefficient tail (l2)
  double tau_circle = 1e-8;    // circle-membership tolerance for detected roots
  int n_min = 256;             // first grid size (power of two)
  int n_max = 1 << 20;         // give up beyond this grid size (power of two)
  bool detect_circle_roots = true;
};

struct CompletionResult {
  ComplexPoly q;               // the complementary polynomial, degree == degree(P)
  int n_used = 0;              // grid size of the accepted (or last attempted) pass
  double defect = 0.0;         // max |1 - |P|^2 - |Q|^2| on the 2N verification grid
  double tail_mass = 0.0;      // l2 mass of grid coefficients beyond degree(P)
  CircleRootSet rootset;
  double sup_norm_p = 0.0;
  std::vector<std::string> warnings;
};

// Grid doubling reached n_max without meeting both tolerances; carries the
// diagnostics of the last attempt.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, CompletionResult last)
      : Error(what), last_(std::move(last)) {}
  const CompletionResult& last() const { return last_; }

 private:
  CompletionResult last_;
};

// Canonicalize, demand a nonzero constant term (ZeroConstantTermError) and a
// measured circle sup-norm <= 1 + 1e-10 (SupNormExceedsOneError).  The
// sup-norm is measured on a 16*(degree+1) grid with golden-section
// refinement; strict contraction means sup_norm < 1 - 1e-4.
TargetPolynomial validate_target(const ComplexPoly& p, const CompletionConfig& cfg = {});

// Locate unit-circle zeros of 1 - |P|^2.  Returns the empty set immediately
// for strictly contractive targets, and also when a refined grid minimum of
// 1 - |P|^2 exceeds 1e-7 (no root can exist).  Otherwise forms the
// associated polynomial z^d (1 - P(z) conj(P)(1/z)), takes companion-matrix
// eigenvalues, keeps roots with ||r| - 1| < tau_circle, clusters them by
// angle, errors on odd cluster size (OddCircleMultiplicityError), halves the
// multiplicities and projects the locations exactly onto the circle.
CircleRootSet detect_circle_roots(const TargetPolynomial& p, const CompletionConfig& cfg);

// Values of (1 - |P|^2) / |Q0|^2 on the n-point unit grid (imaginary parts
// exactly zero).  With an empty root set this is 1 - |P(z_k)|^2 directly;
// otherwise the associated polynomial is deflated by every (z - t_j)^{2 l_j}
// in coefficient space (division residual above 1e-9 * |A| raises
// NonPositiveRatioError) and corrected by the exact unimodular factor that
// makes the result real on the circle.  Any value <= 0, or an imaginary
// residue above 1e-10, raises NonPositiveRatioError.
UnitGridSamples ratio_on_grid(const TargetPolynomial& p, const CircleRootSet& rootset, int n);

// One-sided spectral projection in FFT index layout (index k holds frequency
// k for k < n/2 and frequency k - n above): positive frequencies pass,
// frequency zero is halved, negative frequencies and the n/2 mode are zeroed.
std::vector<cxd> riesz_project(std::vector<cxd> spectrum);

// The full construction.  rootset_override (testing hook) replaces
// detection when supplied.  Throws NoConvergenceError past cfg.n_max.
CompletionResult complete(const TargetPolynomial& p, const CompletionConfig& cfg = {},
                          const std::optional<CircleRootSet>& rootset_override = std::nullopt);

// max over the n_grid-point unit grid of |1 - |P|^2 - |Q|^2|.
double defect(const TargetPolynomial& p, const ComplexPoly& q, int n_grid);

// Pointwise samples (theta_k, |1 - |P|^2 - |Q|^2|) on a uniform n_grid-point
// angle grid; CSV/plot support for the defect identity.
std::vector<std::pair<double, double>> defect_curve(const TargetPolynomial& p,
                                                    const ComplexPoly& q, int n_grid);

// Quadrature evaluators for the three analytic representations of Q, using
// m_nodes trapezoid points on the circle.  The integrand is the log-ratio at
// the integration variable paired with the Cauchy kernel (z' + z)/(z' - z).
// Interior: |z| <= 1 - 1e-3.  Accuracy degrades as |z| approaches the circle.
cxd eval_Q_interior(const TargetPolynomial& p, const CircleRootSet& rootset, cxd z, int m_nodes);
// Boundary: principal value via singularity subtraction plus half the local
// log-ratio; nodes straddle theta symmetrically.  theta must keep distance
// > 1e-6 from every detected root.
cxd eval_Q_boundary(const TargetPolynomial& p, const CircleRootSet& rootset, double theta,
                    int m_nodes);
// Exterior: |z| >= 1 + 1e-3; uses the reflected closed form
// (1 - P(z) conj(P)(1/z)) / conj(Q0)(1/z) times the exponential factor.
// Raises DivisionByZeroQ0Error if the reflected root product vanishes.
cxd eval_Q_exterior(const TargetPolynomial& p, const CircleRootSet& rootset, cxd z, int m_nodes);

// Net change of arg q / 2 pi along the circle of the given radius, sampled
// at n_grid points (n_grid >= 8*(degree+1)).  Raises NearZeroOnContourError
// when min |q| <= 1e-9 on the contour.
int winding_number(const ComplexPoly& q, double radius, int n_grid);

}  // namespace qsprep::completion
