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

#include "qsprep/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qsprep/errors.hpp"

namespace qsprep::inversion {

namespace {

void check_spec(const InversionSpec& spec) {
  if (!(spec.a > 0.0) || !(spec.a < 1.0))
    throw std::invalid_argument("inversion parameter a must lie strictly inside (0, 1)");
  if (spec.n < 1) throw std::invalid_argument("inversion half-degree n must be >= 1");
}

// Clenshaw in extended precision on an extended-precision abscissa; the
// dense error scans need the extra bits because the tightest acceptance
// margin (bound minus achieved error at a = 0.5, n = 30) sits only a few
// ulps above the double-precision noise floor.
long double clenshaw_ld(const RealChebPoly& p, long double x) {
  const int m = p.degree();
  if (m == 0) return p.coeff[0];
  long double b1 = 0.0L, b2 = 0.0L;
  for (int k = m; k >= 1; --k) {
    const long double b = static_cast<long double>(p.coeff[k]) + 2.0L * x * b1 - b2;
    b2 = b1;
    b1 = b;
  }
  return static_cast<long double>(p.coeff[0]) + x * b1 - b2;
}

long double error_at_ld(const RealChebPoly& cheb, long double x) {
  return clenshaw_ld(cheb, x) - 1.0L / x;
}

// Golden-section maximization of |error| over [lo, hi]; returns the signed
// error at the best abscissa through *val.
double golden_refine(const RealChebPoly& cheb, double lo, double hi, double* val) {
  constexpr double inv_phi = 0.6180339887498949;
  const auto mag = [&](double x) {
    return std::abs(static_cast<double>(error_at_ld(cheb, x)));
  };
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = mag(x1), f2 = mag(x2);
  for (int it = 0; it < 90 && b - a > 1e-17; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = mag(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = mag(x1);
    }
  }
  const double xbest = f1 > f2 ? x1 : x2;
  *val = static_cast<double>(error_at_ld(cheb, xbest));
  return xbest;
}

struct Extremum {
  double x = 0.0;
  double value = 0.0;  // signed error
};

struct ErrorScan {
  double eps_measured = 0.0;
  double coeff_noise = 0.0;       // |curve perturbation| from double-rounded coefficients
  std::vector<Extremum> extrema;  // ascending x over [a, 1]
};

// Dense scan of the error over [a, 1]: grid evaluation, local-maximum
// detection on |error|, one golden-section refinement per significant
// bracket, deduplication of brackets that refine to the same point.
ErrorScan scan_error(const InversionPolynomial& ip, int grid) {
  check_spec(ip.spec);
  if (grid < 100 * ip.spec.n)
    throw std::invalid_argument("error grid must have at least 100*n points per interval");
  const double a = ip.spec.a;
  std::vector<double> e(grid);
  const double h = (1.0 - a) / (grid - 1);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < grid; ++i) {
    const long double x = static_cast<long double>(a) + static_cast<long double>(h) * i;
    e[i] = static_cast<double>(error_at_ld(ip.cheb, x));
  }
  double grid_max = 0.0;
  for (int i = 0; i < grid; ++i) grid_max = std::max(grid_max, std::abs(e[i]));

  ErrorScan out;
  out.eps_measured = grid_max;
  // Storing the coefficients as doubles perturbs the represented polynomial
  // by up to ~eps * sum |c_k| (|T_k| <= 1), which is the resolution limit of
  // any statement about the error curve's fine structure.
  double coeff_sum = 0.0;
  for (double c : ip.cheb.coeff) coeff_sum += std::abs(c);
  out.coeff_noise = std::numeric_limits<double>::epsilon() * coeff_sum;
  const double floor = 0.5 * grid_max;
  for (int i = 0; i < grid; ++i) {
    const double m = std::abs(e[i]);
    const bool left_ok = (i == 0) || m >= std::abs(e[i - 1]);
    const bool right_ok = (i == grid - 1) || m > std::abs(e[i + 1]);
    if (!(left_ok && right_ok) || m < floor) continue;
    const double lo = a + h * std::max(0, i - 1);
    const double hi = a + h * std::min(grid - 1, i + 1);
    Extremum ext;
    ext.x = golden_refine(ip.cheb, lo, hi, &ext.value);
    // Merge with the previous extremum when both brackets converged to the
    // same point (flat tops produce adjacent grid maxima).
    if (!out.extrema.empty() && std::abs(out.extrema.back().x - ext.x) < 10.0 * h * 1e-6) {
      if (std::abs(ext.value) > std::abs(out.extrema.back().value)) out.extrema.back() = ext;
    } else {
      out.extrema.push_back(ext);
    }
    out.eps_measured = std::max(out.eps_measured, std::abs(ext.value));
  }
  return out;
}

int count_alternations(const ErrorScan& scan) {
  // Keep extrema at the measured level: a 1% relative window widened by the
  // coefficient-rounding noise floor. Once the level approaches that floor
  // the stored polynomial genuinely stops equioscillating to 1%, so the
  // window must not exclude extrema the rounding pushed off-level; the 0.5
  // scan floor still rejects sub-level ripples.
  const double threshold = (1.0 - 1e-2) * scan.eps_measured - 8.0 * scan.coeff_noise;
  std::vector<int> sign;
  for (const Extremum& ext : scan.extrema) {
    if (std::abs(ext.value) >= threshold) sign.push_back(ext.value >= 0.0 ? 1 : -1);
  }
  if (sign.empty()) return 0;
  // Greedy alternating chain over [a, 1] ...
  int chain = 1;
  for (size_t i = 1; i < sign.size(); ++i)
    if (sign[i] != sign[i - 1]) ++chain;
  // ... doubled for the mirror interval: the error is odd, so the reflected
  // extrema alternate internally in the same count and the junction between
  // -a and a always alternates (values -s and s).
  return 2 * chain;
}

}  // namespace

double eval_L(double y, const InversionSpec& spec) {
  check_spec(spec);
  const long double a = spec.a;
  const long double rho = (1.0L - a) / (1.0L + a);
  long double t_prev = 1.0L, t_cur = y;
  for (int k = 1; k < spec.n; ++k) {
    const long double t_next = 2.0L * static_cast<long double>(y) * t_cur - t_prev;
    t_prev = t_cur;
    t_cur = t_next;
  }
  return static_cast<double>(std::ldexp(t_cur + rho * t_prev, 1 - spec.n));
}

double eval_inversion(double x, const InversionSpec& spec) {
  check_spec(spec);
  if (x == 0.0) return 0.0;
  const long double a = spec.a;
  const long double lx = x;
  const long double s = 1.0L - a * a;
  const long double y0 = -(1.0L + a * a) / s;
  const long double dy = -2.0L * lx * lx / s;  // y0 - yhat; yhat = y0 - dy
  const long double yh = y0 - dy;
  const long double rho = (1.0L - a) / (1.0L + a);
  // Coupled recurrences: t_k = T_k(yh) and the difference d_k = T_k(y0) -
  // T_k(yh), advanced jointly so the difference is never formed from two
  // large near-equal values:
  //   d_{k+1} = 2 y0 d_k - d_{k-1} + 2 (y0 - yh) t_k.
  long double t_prev = 1.0L, t_cur = yh;
  long double d_prev = 0.0L, d_cur = dy;
  for (int k = 1; k < spec.n; ++k) {
    const long double t_next = 2.0L * yh * t_cur - t_prev;
    const long double d_next = 2.0L * y0 * d_cur - d_prev + 2.0L * dy * t_cur;
    t_prev = t_cur;
    t_cur = t_next;
    d_prev = d_cur;
    d_cur = d_next;
    // Joint power-of-two rescale (exact; cancels in the final ratio) guards
    // against overflow for very large n.
    if (std::abs(d_cur) > 0x1p4000L || std::abs(t_cur) > 0x1p4000L) {
      t_prev = std::ldexp(t_prev, -4096);
      t_cur = std::ldexp(t_cur, -4096);
      d_prev = std::ldexp(d_prev, -4096);
      d_cur = std::ldexp(d_cur, -4096);
    }
  }
  const long double num = d_cur + rho * d_prev;
  const long double den = (t_cur + d_cur) + rho * (t_prev + d_prev);
  return static_cast<double>(num / (lx * den));
}

double error_bound(double a, int n) {
  if (!(a > 0.0) || !(a < 1.0)) throw std::invalid_argument("error_bound needs 0 < a < 1");
  if (n < 1) throw std::invalid_argument("error_bound needs n >= 1");
  const double lb = 0.5 * std::log1p(a * a) - std::log(a) + n * std::log1p(-a) -
                    (n - 1) * std::log1p(a);
  return std::exp(lb);
}

int select_degree(double a, double eps) {
  if (!(a > 0.0) || !(a < 1.0)) throw std::invalid_argument("select_degree needs 0 < a < 1");
  if (!(eps > 0.0)) throw std::invalid_argument("select_degree needs eps > 0");
  const double C = 0.5 * std::log1p(a * a) - std::log(a) + std::log1p(a);
  const double L = std::log1p(-a) - std::log1p(a);  // < 0
  const double log_eps = std::log(eps);
  const auto log_bound = [&](long long n) { return C + static_cast<double>(n) * L; };
  long long n = std::max(1LL, static_cast<long long>(std::ceil((log_eps - C) / L)));
  while (n > 1 && log_bound(n - 1) <= log_eps) --n;
  while (log_bound(n) > log_eps) ++n;
  return static_cast<int>(n);
}

InversionPolynomial build(const InversionSpec& spec) {
  check_spec(spec);
  const int degree = 2 * spec.n - 1;
  const std::vector<double> nodes = chebyshev_gauss_nodes(degree);
  std::vector<double> samples(nodes.size());
#pragma omp parallel for schedule(static) if (nodes.size() >= 64)
  for (int j = 0; j < static_cast<int>(nodes.size()); ++j)
    samples[j] = eval_inversion(nodes[j], spec);

  InversionPolynomial ip;
  ip.spec = spec;
  ip.cheb = chebyshev_interpolate(samples, degree);

  // The target is odd, so even-order coefficients must vanish; anything
  // beyond interpolation roundoff signals an evaluation bug.
  double parity = 0.0;
  for (int k = 0; k <= degree; k += 2) parity = std::max(parity, std::abs(ip.cheb.coeff[k]));
  if (parity > 1e-10)
    throw ParityError("even-order coefficient of magnitude " + std::to_string(parity) +
                      " violates odd parity");
  for (int k = 0; k <= degree; k += 2) ip.cheb.coeff[k] = 0.0;

  ip.eps_bound = error_bound(spec.a, spec.n);
  const int grid = std::max(100000, 100 * spec.n);
  const ErrorScan scan = scan_error(ip, grid);
  ip.eps_measured = scan.eps_measured;
  ip.alternation_count = count_alternations(scan);
  return ip;
}

double measure_error(const InversionPolynomial& ip, int grid_per_interval) {
  return scan_error(ip, grid_per_interval).eps_measured;
}

int alternation_count(const InversionPolynomial& ip, int grid_per_interval) {
  return count_alternations(scan_error(ip, grid_per_interval));
}

std::vector<std::pair<double, double>> error_curve(const InversionPolynomial& ip,
                                                   int per_interval) {
  check_spec(ip.spec);
  if (per_interval < 2) throw std::invalid_argument("error_curve needs at least 2 points");
  const double a = ip.spec.a;
  const double h = (1.0 - a) / (per_interval - 1);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(2 * per_interval);
  for (int i = 0; i < per_interval; ++i) {
    const double x = -1.0 + h * i;  // [-1, -a]
    pts.emplace_back(x, static_cast<double>(error_at_ld(ip.cheb, x)));
  }
  for (int i = 0; i < per_interval; ++i) {
    const double x = a + h * i;  // [a, 1]
    pts.emplace_back(x, static_cast<double>(error_at_ld(ip.cheb, x)));
  }
  return pts;
}

}  // namespace qsprep::inversion
