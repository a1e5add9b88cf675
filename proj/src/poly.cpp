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

#include "qsprep/poly.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qsprep/kernels.hpp"

namespace qsprep {

namespace {

constexpr long double kPiL = std::numbers::pi_v<long double>;

// Golden-section maximization of f over [lo, hi]; returns the best abscissa.
// Bracket widths shrink by ~0.618 per step, so 90 steps reduce any initial
// bracket far below double resolution.
template <class F>
double golden_max(F&& f, double lo, double hi) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 90 && b - a > 1e-16 * (1.0 + std::abs(a)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

}  // namespace

ComplexPoly::ComplexPoly(std::vector<cxd> c) : coeff(std::move(c)) {
  if (coeff.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
}

ComplexPoly ComplexPoly::trimmed(double tol) const {
  ComplexPoly out = *this;
  while (out.coeff.size() > 1 && std::abs(out.coeff.back()) < tol) out.coeff.pop_back();
  return out;
}

RealChebPoly::RealChebPoly(std::vector<double> c) : coeff(std::move(c)) {
  if (coeff.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
}

UnitGridSamples::UnitGridSamples(int n, std::vector<cxd> v) : n_points(n), value(std::move(v)) {
  if (!kernels::is_pow2(n_points)) throw std::invalid_argument("grid size must be a power of two");
  if (static_cast<int>(value.size()) != n_points)
    throw std::invalid_argument("grid size does not match value count");
}

cxd evaluate_monomial(const ComplexPoly& p, cxd z) {
  cxd acc = p.coeff.back();
  for (int k = p.degree() - 1; k >= 0; --k) acc = acc * z + p.coeff[k];
  return acc;
}

double evaluate_chebyshev(const RealChebPoly& p, double x) {
  const int m = p.degree();
  if (m == 0) return p.coeff[0];
  // Clenshaw backward recurrence; extended precision keeps the evaluation
  // noise a couple orders below the tightest downstream tolerances.
  const long double lx = x;
  long double b1 = 0.0L, b2 = 0.0L;
  for (int k = m; k >= 1; --k) {
    long double b = static_cast<long double>(p.coeff[k]) + 2.0L * lx * b1 - b2;
    b2 = b1;
    b1 = b;
  }
  return static_cast<double>(static_cast<long double>(p.coeff[0]) + lx * b1 - b2);
}

ComplexPoly conjugate_reciprocal(const ComplexPoly& p) {
  std::vector<cxd> out(p.coeff.size());
  const int d = p.degree();
  for (int k = 0; k <= d; ++k) out[k] = std::conj(p.coeff[d - k]);
  return ComplexPoly(std::move(out));
}

ComplexPoly circle_lift(const RealChebPoly& p) {
  const int m = p.degree();
  std::vector<cxd> out(2 * m + 1, cxd(0.0, 0.0));
  out[m] += p.coeff[0];
  for (int k = 1; k <= m; ++k) {
    const double half = 0.5 * p.coeff[k];
    out[m + k] += half;
    out[m - k] += half;
  }
  return ComplexPoly(std::move(out));
}

std::vector<double> chebyshev_gauss_nodes(int degree) {
  if (degree < 0) throw std::invalid_argument("degree must be non-negative");
  const int count = degree + 1;
  std::vector<double> x(count);
  // Generate the positive half and mirror it so x[count-1-j] == -x[j]
  // bitwise; odd-count grids get an exact zero in the middle.
  for (int j = 0; j < count / 2; ++j) {
    const long double theta = (2.0L * j + 1.0L) * kPiL / (2.0L * count);
    x[j] = static_cast<double>(std::cos(theta));
    x[count - 1 - j] = -x[j];
  }
  if (count % 2 == 1) x[count / 2] = 0.0;
  return x;
}

RealChebPoly chebyshev_interpolate(std::span<const double> samples, int degree) {
  const int count = degree + 1;
  if (static_cast<int>(samples.size()) != count)
    throw std::invalid_argument("sample count does not match degree+1");
  std::vector<double> c(count);
  const long double dtheta = kPiL / count;
  // c_k = (2 - [k==0]) / count * sum_j f_j cos(k theta_j), theta_j = (j+1/2) dtheta.
  // cos(k theta_j) advances over j by a three-term recurrence carried in
  // extended precision, so the coefficients come out exact up to roundoff
  // even for high degrees.
#pragma omp parallel for schedule(static) if (count >= 64)
  for (int k = 0; k < count; ++k) {
    const long double step = 2.0L * std::cos(k * dtheta);
    long double t_prev = std::cos(0.5L * k * dtheta);         // cos(k theta_0)
    long double t_cur = std::cos(1.5L * k * dtheta);          // cos(k theta_1)
    long double acc = samples[0] * t_prev;
    if (count > 1) acc += samples[1] * t_cur;
    for (int j = 2; j < count; ++j) {
      const long double t_next = step * t_cur - t_prev;
      t_prev = t_cur;
      t_cur = t_next;
      acc += samples[j] * t_cur;
    }
    const long double scale = (k == 0 ? 1.0L : 2.0L) / count;
    c[k] = static_cast<double>(acc * scale);
  }
  return RealChebPoly(std::move(c));
}

double sup_norm_circle(const ComplexPoly& p, int n_grid) {
  if (n_grid < 4 * (p.degree() + 1) || n_grid < 4)
    throw std::invalid_argument("sup-norm grid must have at least 4*(degree+1) points");
  std::vector<cxd> pts(n_grid), vals(n_grid);
  const double two_pi = 2.0 * std::numbers::pi;
#pragma omp parallel for schedule(static) if (n_grid >= 4096)
  for (int k = 0; k < n_grid; ++k) pts[k] = std::polar(1.0, (two_pi * k) / n_grid);
  kernels::par::horner(p, pts, vals);
  const kernels::MaxScan best = kernels::par::max_abs(std::span<const cxd>(vals));
  const double theta = (two_pi * best.index) / n_grid;
  const double delta = two_pi / n_grid;
  const auto mod = [&](double t) { return std::abs(evaluate_monomial(p, std::polar(1.0, t))); };
  const double refined = mod(golden_max(mod, theta - delta, theta + delta));
  return std::max(best.value, refined);
}

ComplexPoly chebyshev_to_monomial(const RealChebPoly& p) {
  const int m = p.degree();
  // Accumulate c_k * T_k in monomial space via T_{k+1} = 2x T_k - T_{k-1};
  // extended precision defers (but cannot remove) the 2^degree growth of
  // the basis-change conditioning.
  std::vector<long double> acc(m + 1, 0.0L);
  std::vector<long double> t_prev{1.0L};
  std::vector<long double> t_cur{0.0L, 1.0L};
  acc[0] = p.coeff[0];
  if (m >= 1) acc[1] += p.coeff[1];
  for (int k = 2; k <= m; ++k) {
    std::vector<long double> t_next(k + 1, 0.0L);
    for (int j = 0; j < k; ++j) t_next[j + 1] += 2.0L * t_cur[j];
    for (int j = 0; j <= k - 2; ++j) t_next[j] -= t_prev[j];
    for (int j = 0; j <= k; ++j) acc[j] += p.coeff[k] * t_next[j];
    t_prev = std::move(t_cur);
    t_cur = std::move(t_next);
  }
  std::vector<cxd> out(m + 1);
  for (int j = 0; j <= m; ++j) out[j] = cxd(static_cast<double>(acc[j]), 0.0);
  return ComplexPoly(std::move(out));
}

ComplexPoly multiply(const ComplexPoly& a, const ComplexPoly& b) {
  std::vector<cxd> out(a.coeff.size() + b.coeff.size() - 1, cxd(0.0, 0.0));
  for (size_t i = 0; i < a.coeff.size(); ++i)
    for (size_t j = 0; j < b.coeff.size(); ++j) out[i + j] += a.coeff[i] * b.coeff[j];
  return ComplexPoly(std::move(out));
}

ComplexPoly deflate(const ComplexPoly& p, cxd root, cxd* remainder) {
  const int d = p.degree();
  if (d == 0) throw std::invalid_argument("cannot deflate a constant polynomial");
  std::vector<cxd> q(d);
  cxd b = p.coeff[d];
  for (int k = d - 1; k >= 0; --k) {
    q[k] = b;
    b = p.coeff[k] + root * b;
  }
  if (remainder) *remainder = b;
  return ComplexPoly(std::move(q));
}

double coeff_inf_norm(const ComplexPoly& p) {
  double m = 0.0;
  for (const cxd& c : p.coeff) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace qsprep
