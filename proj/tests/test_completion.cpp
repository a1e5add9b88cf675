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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsprep/completion.hpp"
#include "qsprep/errors.hpp"
#include "qsprep/kernels.hpp"
#include "qsprep/poly.hpp"

using namespace qsprep;
using namespace qsprep::completion;

namespace {

ComplexPoly two_spike(double c, int top) {
  std::vector<cxd> v(static_cast<std::size_t>(top) + 1, cxd(0.0, 0.0));
  v.front() = c;
  v.back() = c;
  return ComplexPoly(std::move(v));
}

bool same_bits(const ComplexPoly& a, const ComplexPoly& b) {
  if (a.coeff.size() != b.coeff.size()) return false;
  return std::memcmp(a.coeff.data(), b.coeff.data(), a.coeff.size() * sizeof(cxd)) == 0;
}

}  // namespace

TEST_CASE("target validation") {
  const TargetPolynomial t = validate_target(ComplexPoly{0.5});
  CHECK(t.poly.degree() == 0);
  CHECK(t.sup_norm == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.strictly_contractive);

  // Trailing near-zero coefficients are canonicalized away.
  const TargetPolynomial trimmed = validate_target(ComplexPoly{0.5, 1e-15});
  CHECK(trimmed.poly.degree() == 0);

  // Modulus exactly 1 at z = 1 is allowed (boundary case) but not strict.
  const TargetPolynomial edge = validate_target(ComplexPoly{0.5, 0.5});
  CHECK(edge.sup_norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(edge.strictly_contractive);

  CHECK_THROWS_AS(validate_target(ComplexPoly{0.0, 1.0}), ZeroConstantTermError);
  CHECK_THROWS_AS(validate_target(ComplexPoly{0.8, 0.8}), SupNormExceedsOneError);

  CompletionConfig bad;
  bad.tau_defect = 0.0;
  CHECK_THROWS_AS(validate_target(ComplexPoly{0.5}, bad), std::invalid_argument);
  bad = CompletionConfig{};
  bad.n_min = 100;  // not a power of two
  CHECK_THROWS_AS(validate_target(ComplexPoly{0.5}, bad), std::invalid_argument);
  bad = CompletionConfig{};
  bad.n_min = 4;  // power of two but below the floor
  CHECK_THROWS_AS(validate_target(ComplexPoly{0.5}, bad), std::invalid_argument);
}

TEST_CASE("circle-root detection") {
  const CompletionConfig cfg;

  // Strict contraction short-circuits to the empty set.
  CHECK(detect_circle_roots(validate_target(ComplexPoly{0.5}), cfg).d0() == 0);
  CHECK(detect_circle_roots(validate_target(ComplexPoly{0.6}), cfg).d0() == 0);

  // |P(1)| = 1 exactly: the double zero of 1 - |P|^2 at z = 1 is found with
  // half multiplicity one and projected onto the circle.
  const TargetPolynomial t = validate_target(ComplexPoly{0.5, 0.5});
  const CircleRootSet rs = detect_circle_roots(t, cfg);
  REQUIRE(rs.d0() == 1);
  CHECK(rs.roots[0].half_multiplicity == 1);
  CHECK(std::abs(rs.roots[0].t - cxd(1.0, 0.0)) < 1e-8);
  CHECK(std::abs(rs.roots[0].t) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rs.degree_q0() == 1);

  // Near-unimodular but root-free: the refined grid minimum certifies the
  // empty set without an eigensolve.
  const TargetPolynomial near = validate_target(ComplexPoly{0.49999, 0.5});
  CHECK_FALSE(near.strictly_contractive);
  CHECK(detect_circle_roots(near, cfg).d0() == 0);
}

TEST_CASE("odd near-circle cluster is rejected") {
  // 1 - |P|^2 for P = c (1 + z) with 4 c^2 = 1/(1 + 2.5e-9) has two simple
  // real roots straddling |z| = 1 at distances ~1e-4 -+ 5e-9.  With
  // tau_circle = 1e-4 exactly one of them passes the membership test, the
  // cluster has size one, and detection must refuse to halve it.
  const double c = 1.0 / std::sqrt(4.0 + 1e-8);
  const TargetPolynomial t = validate_target(ComplexPoly{c, c});
  CHECK_FALSE(t.strictly_contractive);
  CompletionConfig cfg;
  cfg.tau_circle = 1e-4;
  CHECK_THROWS_AS(detect_circle_roots(t, cfg), OddCircleMultiplicityError);
}

TEST_CASE("ratio grid without circle roots") {
  const TargetPolynomial t = validate_target(ComplexPoly{0.5});
  const UnitGridSamples g = ratio_on_grid(t, CircleRootSet{}, 16);
  REQUIRE(g.n_points == 16);
  for (const cxd& w : g.value) {
    CHECK(w.real() == 0.75);  // 1 - |0.5|^2, exact in double
    CHECK(w.imag() == 0.0);
  }

  CHECK_THROWS_AS(ratio_on_grid(t, CircleRootSet{}, 12), std::invalid_argument);
  const TargetPolynomial t1 = validate_target(ComplexPoly{0.25, 0.25});
  CHECK_THROWS_AS(ratio_on_grid(t1, CircleRootSet{}, 8), std::invalid_argument);  // < 8*(d+1)
}

TEST_CASE("ratio grid with deflated circle root") {
  const TargetPolynomial t = validate_target(ComplexPoly{0.5, 0.5});
  CircleRootSet rs;
  rs.roots.push_back({cxd(1.0, 0.0), 1});

  // (1 - |P|^2) / |z - 1|^2 = 1/4 identically for P = (1 + z)/2.
  const UnitGridSamples g = ratio_on_grid(t, rs, 16);
  for (const cxd& w : g.value) {
    CHECK(w.real() == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(w.imag() == 0.0);
  }

  // Without the root the grid hits the exact zero of 1 - |P|^2 at z = 1.
  CHECK_THROWS_AS(ratio_on_grid(t, CircleRootSet{}, 16), NonPositiveRatioError);

  // A root that does not divide the associated polynomial leaves a large
  // synthetic-division residual.
  CircleRootSet wrong;
  wrong.roots.push_back({cxd(0.0, 1.0), 1});
  try {
    ratio_on_grid(t, wrong, 16);
    FAIL("expected NonPositiveRatioError");
  } catch (const NonPositiveRatioError& e) {
    CHECK(std::string(e.what()).find("synthetic division") != std::string::npos);
  }
}

TEST_CASE("one-sided spectral projection") {
  std::vector<cxd> s{cxd(4.0, 0.0), cxd(1.0, 2.0), cxd(-3.0, 0.5), cxd(0.0, 7.0)};
  const std::vector<cxd> pr = riesz_project(s);
  CHECK(pr[0] == cxd(2.0, 0.0));   // frequency 0 halved
  CHECK(pr[1] == cxd(1.0, 2.0));   // positive frequency kept
  CHECK(pr[2] == cxd(0.0, 0.0));   // Nyquist killed
  CHECK(pr[3] == cxd(0.0, 0.0));   // negative frequency killed

  CHECK_THROWS_AS(riesz_project(std::vector<cxd>(1, cxd(1.0, 0.0))), std::invalid_argument);
  CHECK_THROWS_AS(riesz_project(std::vector<cxd>(12, cxd(0.0, 0.0))), std::invalid_argument);
}

TEST_CASE("projection identity on band-limited real data") {
  // For a real signal with no Nyquist component, twice the real part of the
  // one-sided projection reproduces the signal.
  const int n = 64;
  std::mt19937 rng(97);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> a(n / 2), psi(n / 2);
  for (int f = 0; f < n / 2; ++f) {
    a[f] = amp(rng);
    psi[f] = phase(rng);
  }
  std::vector<cxd> x(n);
  for (int k = 0; k < n; ++k) {
    double v = a[0];
    for (int f = 1; f < n / 2; ++f)
      v += a[f] * std::cos(2.0 * std::numbers::pi * f * k / n + psi[f]);
    x[k] = cxd(v, 0.0);
  }

  const kernels::FftPlan plan(n);
  std::vector<cxd> buf = x;
  kernels::serial::fft(buf, plan, false);
  for (cxd& c : buf) c *= 1.0 / n;
  buf = riesz_project(std::move(buf));
  kernels::serial::fft(buf, plan, true);
  for (int k = 0; k < n; ++k)
    CHECK(2.0 * buf[k].real() == doctest::Approx(x[k].real()).epsilon(1e-12));

  // A pure Nyquist signal projects to zero.
  std::vector<cxd> nyq(n);
  for (int k = 0; k < n; ++k) nyq[k] = cxd(k % 2 == 0 ? 1.0 : -1.0, 0.0);
  kernels::serial::fft(nyq, plan, false);
  for (cxd& c : nyq) c *= 1.0 / n;
  nyq = riesz_project(std::move(nyq));
  kernels::serial::fft(nyq, plan, true);
  for (const cxd& v : nyq) CHECK(std::abs(v) <= 1e-13);
}

TEST_CASE("completion of a constant target") {
  const TargetPolynomial t = validate_target(ComplexPoly{0.5});
  const CompletionResult res = complete(t);
  REQUIRE(res.q.degree() == 0);
  CHECK(std::abs(res.q.coeff[0] - cxd(std::sqrt(0.75), 0.0)) < 1e-14);
  CHECK(res.n_used == 256);
  CHECK(res.defect <= 1e-14);
  CHECK(res.rootset.d0() == 0);
  CHECK(res.warnings.empty());
}

TEST_CASE("completion of a strictly contractive degree-1 target") {
  // P = (1 + z)/4.  1 - P(z) conj(P)(1/z) z has reciprocal roots 7 -+ 4 sqrt(3);
  // the construction takes the zero-free-in-the-disk factor, so Q's root is
  // the outer one and Q(0) > 0.
  const TargetPolynomial t = validate_target(ComplexPoly{0.25, 0.25});
  const CompletionResult res = complete(t);
  REQUIRE(res.q.degree() == 1);
  const double q0 = (2.0 + std::sqrt(3.0)) / 4.0;
  const double q1 = -(2.0 - std::sqrt(3.0)) / 4.0;
  CHECK(res.q.coeff[0].real() == doctest::Approx(q0).epsilon(1e-12));
  CHECK(res.q.coeff[1].real() == doctest::Approx(q1).epsilon(1e-12));
  CHECK(std::abs(res.q.coeff[0].imag()) <= 1e-13);
  CHECK(std::abs(res.q.coeff[1].imag()) <= 1e-13);
  CHECK(res.defect <= 1e-14);
  CHECK(res.tail_mass <= 1e-13);
  // Q must not vanish inside the unit disk (its only root is outside).
  CHECK(winding_number(res.q, 1.0, 64) == 0);
}

TEST_CASE("completion with a detected circle root") {
  const TargetPolynomial t = validate_target(ComplexPoly{0.5, 0.5});
  const CompletionResult res = complete(t);
  REQUIRE(res.q.degree() == 1);
  REQUIRE(res.rootset.d0() == 1);
  CHECK(std::abs(res.rootset.roots[0].t - cxd(1.0, 0.0)) < 1e-8);
  // Q = (z - 1)/2 up to the root-location roundoff.
  CHECK(std::abs(res.q.coeff[0] - cxd(-0.5, 0.0)) < 1e-9);
  CHECK(std::abs(res.q.coeff[1] - cxd(0.5, 0.0)) < 1e-12);
  CHECK(res.defect <= 1e-12);
  CHECK(res.sup_norm_p == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.warnings.empty());
}

TEST_CASE("near-unimodular root-free target completes with a warning") {
  const TargetPolynomial t = validate_target(ComplexPoly{0.49999, 0.5});
  const CompletionResult res = complete(t);
  REQUIRE(res.warnings.size() == 1);
  CHECK(res.warnings[0].find("nearly unimodular") != std::string::npos);
  CHECK(res.rootset.d0() == 0);
  CHECK(res.defect <= 1e-12);
  CHECK(res.tail_mass <= 1e-13);
}

TEST_CASE("completion is bitwise deterministic") {
  const TargetPolynomial t1 = validate_target(ComplexPoly{0.25, 0.25});
  CHECK(same_bits(complete(t1).q, complete(t1).q));

  const TargetPolynomial t2 = validate_target(ComplexPoly{0.5, 0.5});
  CHECK(same_bits(complete(t2).q, complete(t2).q));

  const TargetPolynomial t3 = validate_target(two_spike(0.45, 32));
  CHECK(same_bits(complete(t3).q, complete(t3).q));
}

TEST_CASE("grid doubling converges on a sparse degree-32 target") {
  const TargetPolynomial t = validate_target(two_spike(0.45, 32));
  CHECK(t.strictly_contractive);
  const CompletionResult res = complete(t);
  CHECK(res.q.degree() == 32);
  CHECK(res.n_used <= 4096);
  CHECK(res.defect <= 1e-12);
  CHECK(res.tail_mass <= 1e-13);
  CHECK(completion::defect(t, res.q, 8192) <= 1e-12);
}

TEST_CASE("a capped grid reports no convergence with diagnostics") {
  const TargetPolynomial t = validate_target(two_spike(0.45, 32));
  CompletionConfig cfg;
  cfg.n_min = 512;
  cfg.n_max = 512;  // far below what the coefficient tail needs
  try {
    complete(t, cfg);
    FAIL("expected NoConvergenceError");
  } catch (const NoConvergenceError& e) {
    CHECK(e.last().n_used == 512);
    CHECK(e.last().defect > 1e-12);  // above tau_defect, hence the rejection
    CHECK(e.last().defect < 1e-6);
    CHECK(e.last().q.degree() == 32);
  }

  // n_max below the degree-implied starting grid is a configuration error.
  CompletionConfig tiny;
  tiny.n_min = 128;
  tiny.n_max = 256;
  CHECK_THROWS_AS(complete(t, tiny), std::invalid_argument);
}

TEST_CASE("disabling detection on a circle-root target fails loudly") {
  const TargetPolynomial t = validate_target(ComplexPoly{0.5, 0.5});
  CompletionConfig cfg;
  cfg.detect_circle_roots = false;
  CHECK_THROWS_AS(complete(t, cfg), NonPositiveRatioError);
  // Same through the override hook.
  CHECK_THROWS_AS(complete(t, CompletionConfig{}, CircleRootSet{}), NonPositiveRatioError);
}

TEST_CASE("defect measurement") {
  const TargetPolynomial t = validate_target(ComplexPoly{0.5});
  CHECK(completion::defect(t, ComplexPoly{std::sqrt(0.75)}, 64) <= 1e-15);
  CHECK(completion::defect(t, ComplexPoly{0.5}, 64) == doctest::Approx(0.5).epsilon(1e-14));

  const TargetPolynomial t1 = validate_target(ComplexPoly{0.25, 0.25});
  CHECK_THROWS_AS(completion::defect(t1, ComplexPoly{0.5, 0.5}, 4), std::invalid_argument);

  const auto curve = defect_curve(t, ComplexPoly{0.5}, 32);
  REQUIRE(curve.size() == 32);
  CHECK(curve[0].first == 0.0);
  CHECK(curve[8].first == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-15));
  for (const auto& [theta, v] : curve) CHECK(v == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(defect_curve(t, ComplexPoly{0.5}, 8), std::invalid_argument);
}

TEST_CASE("winding numbers on circles") {
  // (z - 1)/2: the root sits on the unit circle.
  const ComplexPoly q{-0.5, 0.5};
  CHECK(winding_number(q, 0.5, 64) == 0);
  CHECK(winding_number(q, 2.0, 64) == 1);
  CHECK(winding_number(q, 1.0 - 1e-6, 64) == 0);
  CHECK(winding_number(q, 1.0 + 1e-6, 64) == 1);

  const ComplexPoly z2{0.0, 0.0, 1.0};
  CHECK(winding_number(z2, 0.1, 32) == 2);
  CHECK(winding_number(z2, 3.0, 32) == 2);

  // Contour through the root: the grid hits z = 1 exactly.
  CHECK_THROWS_AS(winding_number(ComplexPoly{-1.0, 1.0}, 1.0, 64), NearZeroOnContourError);
  CHECK_THROWS_AS(winding_number(q, 0.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(winding_number(z2, 0.5, 16), std::invalid_argument);  // < 8*(d+1)
}

TEST_CASE("quadrature evaluators agree with the completed polynomial") {
  const TargetPolynomial t = validate_target(ComplexPoly{0.25, 0.25});
  const CompletionResult res = complete(t);
  const CircleRootSet empty;

  const cxd zi(0.3, 0.2);
  CHECK(std::abs(eval_Q_interior(t, empty, zi, 512) - evaluate_monomial(res.q, zi)) < 1e-10);
  CHECK(std::abs(eval_Q_interior(t, empty, cxd(0.0, 0.0), 256) -
                 evaluate_monomial(res.q, cxd(0.0, 0.0))) < 1e-10);

  const double theta = 0.7;
  const cxd zb = std::polar(1.0, theta);
  CHECK(std::abs(eval_Q_boundary(t, empty, theta, 1024) - evaluate_monomial(res.q, zb)) < 1e-9);
  // The frozen boundary value at theta = 0: Q(1) = sqrt(3)/2.
  CHECK(eval_Q_boundary(t, empty, 0.0, 1024).real() ==
        doctest::Approx(0.8660254037844387).epsilon(1e-9));

  const cxd ze(2.0, 0.0);
  CHECK(std::abs(eval_Q_exterior(t, empty, ze, 1024) - evaluate_monomial(res.q, ze)) < 1e-9);
  CHECK(eval_Q_exterior(t, empty, ze, 1024).real() ==
        doctest::Approx(0.7990381056766580).epsilon(1e-9));
}

TEST_CASE("quadrature evaluators with a circle root") {
  const TargetPolynomial t = validate_target(ComplexPoly{0.5, 0.5});
  const CompletionResult res = complete(t);
  const CircleRootSet& rs = res.rootset;
  REQUIRE(rs.d0() == 1);

  CHECK(std::abs(eval_Q_interior(t, rs, cxd(0.0, 0.0), 256) -
                 evaluate_monomial(res.q, cxd(0.0, 0.0))) < 1e-10);
  // Q(-1) = -1: the boundary point opposite the circle root.
  CHECK(std::abs(eval_Q_boundary(t, rs, std::numbers::pi, 1024) - cxd(-1.0, 0.0)) < 1e-8);
  CHECK(std::abs(eval_Q_exterior(t, rs, cxd(2.0, 0.0), 1024) -
                 evaluate_monomial(res.q, cxd(2.0, 0.0))) < 1e-8);
}

TEST_CASE("quadrature preconditions") {
  const TargetPolynomial t = validate_target(ComplexPoly{0.5, 0.5});
  CircleRootSet rs;
  rs.roots.push_back({cxd(1.0, 0.0), 1});

  CHECK_THROWS_AS(eval_Q_interior(t, rs, cxd(0.9995, 0.0), 64), std::invalid_argument);
  CHECK_THROWS_AS(eval_Q_exterior(t, rs, cxd(1.0005, 0.0), 64), std::invalid_argument);
  CHECK_THROWS_AS(eval_Q_interior(t, rs, cxd(0.0, 0.0), 8), std::invalid_argument);
  CHECK_THROWS_AS(eval_Q_boundary(t, rs, 1e-8, 64), std::invalid_argument);  // on the root

  // A high-multiplicity root forces the reflected product below the floor.
  CircleRootSet heavy;
  heavy.roots.push_back({cxd(1.0, 0.0), 5});
  CHECK_THROWS_AS(eval_Q_exterior(t, heavy, cxd(1.001, 0.0), 64), DivisionByZeroQ0Error);
}
