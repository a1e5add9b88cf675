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
#include <random>
#include <stdexcept>

#include "qsprep/errors.hpp"
#include "qsprep/inversion.hpp"
#include "qsprep/poly.hpp"

using namespace qsprep;
using namespace qsprep::inversion;

TEST_CASE("weighted chebyshev pair closed forms") {
  const InversionSpec s1{0.5, 1};
  // L_1(y) = y + rho with rho = (1-a)/(1+a) = 1/3.
  CHECK(eval_L(-5.0 / 3.0, s1) == doctest::Approx(-4.0 / 3.0).epsilon(1e-15));
  CHECK(eval_L(0.5, s1) == doctest::Approx(0.5 + 1.0 / 3.0).epsilon(1e-15));

  // L_2(1) = (1 + rho)/2 for any a.
  for (double a : {0.2, 0.5, 0.9}) {
    const double rho = (1.0 - a) / (1.0 + a);
    CHECK(eval_L(1.0, InversionSpec{a, 2}) == doctest::Approx((1.0 + rho) / 2.0).epsilon(1e-15));
  }

  CHECK_THROWS_AS(eval_L(0.0, InversionSpec{1.5, 1}), std::invalid_argument);
  CHECK_THROWS_AS(eval_L(0.0, InversionSpec{0.5, 0}), std::invalid_argument);
}

TEST_CASE("pointwise approximant evaluation") {
  const InversionSpec s{0.5, 1};
  // Degree-1 closed form is x/a = 2x.
  CHECK(eval_inversion(0.75, s) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(eval_inversion(-0.75, s) == doctest::Approx(-1.5).epsilon(1e-15));
  CHECK(eval_inversion(0.0, s) == 0.0);

  // Odd symmetry at any degree.
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const InversionSpec s5{0.3, 5};
  for (int rep = 0; rep < 40; ++rep) {
    const double x = unit(rng);
    const double plus = eval_inversion(x, s5);
    const double minus = eval_inversion(-x, s5);
    CHECK(plus == doctest::Approx(-minus).epsilon(1e-12));
  }

  // Direct ratio arrangement agrees where cancellation is mild (|x| > 0.3).
  const InversionSpec s3{0.4, 3};
  const double a = s3.a;
  const double y0 = -(1.0 + a * a) / (1.0 - a * a);
  const double l0 = eval_L(y0, s3);
  for (double x : {0.35, 0.6, 0.85, -0.5, -0.95}) {
    const double yhat = (2.0 * x * x - (1.0 + a * a)) / (1.0 - a * a);
    const double direct = (l0 - eval_L(yhat, s3)) / (x * l0);
    CHECK(eval_inversion(x, s3) == doctest::Approx(direct).epsilon(1e-11));
  }
}

TEST_CASE("closed-form error bound") {
  CHECK(error_bound(0.5, 1) == doctest::Approx(1.118033988749895).epsilon(1e-14));
  CHECK(error_bound(0.5, 2) == doctest::Approx(0.37267799624996495).epsilon(1e-14));
  // Log-space evaluation keeps deep-subnormal-range results finite and
  // positive instead of losing them to intermediate underflow.
  const double tiny = error_bound(0.9, 230);
  CHECK(tiny > 0.0);
  CHECK(tiny < 1e-290);
  CHECK(std::isfinite(error_bound(1e-8, 1)));
  CHECK_THROWS_AS(error_bound(0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(error_bound(0.5, 0), std::invalid_argument);
}

TEST_CASE("degree selection is the minimal n meeting the bound") {
  CHECK(select_degree(0.5, 1.2) == 1);
  CHECK(select_degree(0.5, 1.0) == 2);
  CHECK(select_degree(0.5, 0.3727) == 2);  // bound(2) = 0.372678 just below
  CHECK(select_degree(0.5, 0.372) == 3);

  std::mt19937 rng(37);
  std::uniform_real_distribution<double> ua(0.05, 0.95);
  std::uniform_real_distribution<double> ue(-6.0, 0.0);
  for (int rep = 0; rep < 50; ++rep) {
    const double a = ua(rng);
    const double eps = std::pow(10.0, ue(rng));
    const int n = select_degree(a, eps);
    CHECK(error_bound(a, n) <= eps);
    if (n > 1) CHECK(error_bound(a, n - 1) > eps);
  }
}

TEST_CASE("build produces the known low-degree coefficients") {
  const InversionPolynomial ip = build(InversionSpec{0.5, 1});
  REQUIRE(ip.cheb.degree() == 1);
  CHECK(ip.cheb.coeff[0] == 0.0);  // snapped to exact zero by parity
  CHECK(ip.cheb.coeff[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ip.eps_bound == doctest::Approx(1.118033988749895).epsilon(1e-14));
  CHECK(ip.eps_measured == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(ip.alternation_count >= 3);

  const InversionPolynomial ip9 = build(InversionSpec{0.9, 1});
  CHECK(ip9.cheb.coeff[1] == doctest::Approx(1.0 / 0.9).epsilon(1e-13));
}

TEST_CASE("build output evaluates consistently with the closed form") {
  const InversionSpec s{0.25, 6};
  const InversionPolynomial ip = build(s);
  REQUIRE(ip.cheb.degree() == 2 * s.n - 1);
  // Even-order coefficients are exactly zero after the parity snap.
  for (int k = 0; k <= ip.cheb.degree(); k += 2) CHECK(ip.cheb.coeff[k] == 0.0);

  std::mt19937 rng(41);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int rep = 0; rep < 60; ++rep) {
    const double x = unit(rng);
    const double series = evaluate_chebyshev(ip.cheb, x);
    const double closed = eval_inversion(x, s);
    CHECK(series == doctest::Approx(closed).epsilon(1e-9));
  }
}

TEST_CASE("measured error respects the bound and decreases with degree") {
  double prev = 1e300;
  for (int n = 1; n <= 5; ++n) {
    const InversionPolynomial ip = build(InversionSpec{0.5, n});
    CHECK(ip.eps_measured <= ip.eps_bound * (1.0 + 1e-9));
    CHECK(ip.eps_measured < prev);
    prev = ip.eps_measured;
  }
}

TEST_CASE("alternation counting at the equioscillation level") {
  const InversionPolynomial ip = build(InversionSpec{0.5, 1});
  CHECK(alternation_count(ip, 1000) == 4);  // extrema at -1, -a, a, 1

  // A detuned copy loses the equioscillation pattern.
  InversionPolynomial bad = ip;
  bad.cheb.coeff[1] += 10.0 * ip.eps_measured;
  bad.eps_measured = measure_error(bad, 1000);
  CHECK(alternation_count(bad, 1000) < 2 * 1 + 1);
}

TEST_CASE("measurement grid floor is enforced") {
  const InversionPolynomial ip = build(InversionSpec{0.5, 3});
  CHECK_THROWS_AS(measure_error(ip, 100), std::invalid_argument);  // needs >= 100 n
  CHECK_NOTHROW(measure_error(ip, 300));
}

TEST_CASE("error curve spans both intervals") {
  const InversionPolynomial ip = build(InversionSpec{0.5, 2});
  const auto rows = error_curve(ip, 64);
  REQUIRE(rows.size() == 128);
  CHECK(rows.front().first == doctest::Approx(-1.0));
  CHECK(rows.back().first == doctest::Approx(1.0));
  for (const auto& [x, err] : rows) {
    CHECK(std::abs(x) >= 0.5 - 1e-12);
    CHECK(std::abs(err) <= ip.eps_measured * (1.0 + 1e-9));
    CHECK(err == doctest::Approx(evaluate_chebyshev(ip.cheb, x) - 1.0 / x).epsilon(1e-12));
  }
}
