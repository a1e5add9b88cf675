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

#include "qsprep/completion.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <Eigen/Eigenvalues>

#include "qsprep/kernels.hpp"

namespace qsprep::completion {

namespace {

using cxl = std::complex<long double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;
constexpr double kTauNorm = 1e-10;       // validation slack on the measured sup-norm
constexpr double kDeltaStrict = 1e-4;    // strict-contraction margin below 1
constexpr double kCertifiedFloor = 1e-7; // refined grid minimum proving "no circle roots"
constexpr double kExtendedSup = 0.99;    // switch grid evaluation to long double above this

void check_config(const CompletionConfig& cfg) {
  const auto tau_ok = [](double t) { return t > 0.0 && t < 1.0; };
  if (!tau_ok(cfg.tau_defect) || !tau_ok(cfg.tau_tail) || !tau_ok(cfg.tau_circle))
    throw std::invalid_argument("completion tolerances must lie strictly inside (0, 1)");
  if (!kernels::is_pow2(cfg.n_min) || !kernels::is_pow2(cfg.n_max))
    throw std::invalid_argument("grid bounds must be powers of two");
  if (cfg.n_min < 8 || cfg.n_min > cfg.n_max)
    throw std::invalid_argument("grid bounds need 8 <= n_min <= n_max");
}

cxl horner_ld(const std::vector<cxd>& c, cxl z) {
  cxl acc(0.0L, 0.0L);
  for (std::size_t k = c.size(); k-- > 0;)
    acc = acc * z + cxl(c[k].real(), c[k].imag());
  return acc;
}

cxl polar_ld(long double phi) { return cxl(std::cos(phi), std::sin(phi)); }

long double one_minus_abs2_ld(const ComplexPoly& p, long double phi) {
  const cxl v = horner_ld(p.coeff, polar_ld(phi));
  return 1.0L - (v.real() * v.real() + v.imag() * v.imag());
}

// f(phi) = 1 - |P(e^{i phi})|^2 together with its first two phi-derivatives,
// from termwise-differentiated sums.
void abs2_derivatives_ld(const ComplexPoly& p, long double phi, long double* f,
                         long double* fp, long double* fpp) {
  cxl v(0.0L, 0.0L), v1(0.0L, 0.0L), v2(0.0L, 0.0L);
  for (std::size_t k = 0; k < p.coeff.size(); ++k) {
    const cxl term = cxl(p.coeff[k].real(), p.coeff[k].imag()) *
                     polar_ld(static_cast<long double>(k) * phi);
    const cxl ik(0.0L, static_cast<long double>(k));
    v += term;
    v1 += ik * term;
    v2 += ik * ik * term;
  }
  const auto re_dot = [](cxl a, cxl b) { return a.real() * b.real() + a.imag() * b.imag(); };
  *f = 1.0L - re_dot(v, v);
  *fp = -2.0L * re_dot(v, v1);
  *fpp = -2.0L * re_dot(v, v2) - 2.0L * re_dot(v1, v1);
}

// Golden-section minimization of f over [lo, hi].
template <class F>
long double golden_min_ld(F&& f, long double lo, long double hi) {
  constexpr long double inv_phi = 0.6180339887498948482L;
  long double a = lo, b = hi;
  long double x1 = b - inv_phi * (b - a);
  long double x2 = a + inv_phi * (b - a);
  long double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 120 && b - a > 1e-19L * (1.0L + std::abs(a)); ++it) {
    if (f1 > f2) {
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
  return std::min(f1, f2);
}

// A(z) = z^d (1 - P(z) conj(P)(1/z)) = z^d - P(z) * conjugate_reciprocal(P)(z).
ComplexPoly auxiliary_poly(const ComplexPoly& p) {
  const int d = p.degree();
  const ComplexPoly prod = multiply(p, conjugate_reciprocal(p));
  std::vector<cxd> a(prod.coeff.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = -prod.coeff[k];
  a[static_cast<std::size_t>(d)] += 1.0;
  return ComplexPoly(std::move(a));
}

// Companion-matrix eigenvalues of a general polynomial, with a few guarded
// Newton corrections per root (each accepted only when it shrinks the
// residual; a double root gains one bit per step, which is what the circle
// membership test needs).
std::vector<cxd> companion_roots(const ComplexPoly& poly) {
  const int d = poly.degree();
  const cxd lead = poly.coeff[static_cast<std::size_t>(d)];
  if (std::abs(lead) == 0.0)
    throw Error("leading coefficient vanished; cannot form the companion matrix");
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    if (i + 1 < d) mat(i + 1, i) = 1.0;
    mat(i, d - 1) = -poly.coeff[static_cast<std::size_t>(i)] / lead;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(mat, false);
  if (solver.info() != Eigen::Success) throw Error("companion eigenvalue iteration failed");
  std::vector<cxd> roots(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);

  const auto eval_pair = [&poly](cxd z, cxd* deriv) {
    cxd value(0.0, 0.0), dv(0.0, 0.0);
    for (std::size_t k = poly.coeff.size(); k-- > 0;) {
      dv = dv * z + value;
      value = value * z + poly.coeff[k];
    }
    *deriv = dv;
    return value;
  };
  for (cxd& r : roots) {
    for (int step = 0; step < 3; ++step) {
      cxd deriv;
      const cxd value = eval_pair(r, &deriv);
      if (!(std::abs(deriv) > 0.0)) break;
      const cxd cand = r - value / deriv;
      cxd cand_deriv;
      if (std::abs(eval_pair(cand, &cand_deriv)) < std::abs(value)) r = cand;
      else break;
    }
  }
  return roots;
}

cxd pow_int(cxd base, int e) {
  cxd acc(1.0, 0.0);
  for (int i = 0; i < e; ++i) acc *= base;
  return acc;
}

cxd q0_at(const std::vector<CircleRoot>& roots, cxd z) {
  cxd acc(1.0, 0.0);
  for (const CircleRoot& r : roots) acc *= pow_int(z - r.t, r.half_multiplicity);
  return acc;
}

// Sharpen a cluster angle by Newton on d/dphi of 1 - |P|^2 (a circle root is
// a zero-value minimum); keeps the eigenvalue location when the iteration
// does not improve the function value.
double refine_root_angle(const ComplexPoly& p, double phi0) {
  long double phi = phi0;
  long double f0, fp, fpp;
  abs2_derivatives_ld(p, phi, &f0, &fp, &fpp);
  const long double start_value = f0;
  for (int it = 0; it < 60; ++it) {
    if (!(std::abs(fpp) > 0.0L)) break;
    const long double step = fp / fpp;
    if (!(std::abs(step) < 1e-2L)) break;
    phi -= step;
    abs2_derivatives_ld(p, phi, &f0, &fp, &fpp);
    if (std::abs(step) < 1e-18L) break;
  }
  if (f0 <= start_value && std::abs(phi - static_cast<long double>(phi0)) < 1e-2L)
    return static_cast<double>(phi);
  return phi0;
}

// Grid + deflation evaluator for the ratio (1 - |P|^2) / |Q0|^2.
//
// With circle roots detected, A(z) factors as B(z) * prod (z - t_j)^{2 l_j},
// and on |z| = 1 the ratio equals B(z) * z^{m-d} * prod (-t_j)^{l_j} with
// m = deg Q0: the unimodular correction is exact because 1/conj(t) = t on
// the circle.  Without roots the ratio is 1 - |P|^2 directly, evaluated in
// long double when the target is nearly unimodular (the log amplifies
// relative error of small values by 1/(1 - |P|^2), which would otherwise
// freeze the coefficient tail above tau_tail).
struct RatioEvaluator {
  const TargetPolynomial* target = nullptr;
  std::vector<CircleRoot> roots;
  ComplexPoly bpoly;
  cxd unimod{1.0, 0.0};
  int m = 0;
  bool deflated = false;
  bool extended = false;

  RatioEvaluator(const TargetPolynomial& p, const CircleRootSet& rs)
      : target(&p), roots(rs.roots) {
    extended = p.sup_norm > kExtendedSup;
    m = rs.degree_q0();
    if (m == 0) return;
    deflated = true;
    ComplexPoly aux = auxiliary_poly(p.poly);
    const double scale = coeff_inf_norm(aux);
    for (const CircleRoot& root : roots) {
      for (int rep = 0; rep < 2 * root.half_multiplicity; ++rep) {
        if (aux.degree() == 0)
          throw NonPositiveRatioError(
              "circle-root multiplicities exceed the associated polynomial degree");
        cxd rem(0.0, 0.0);
        aux = deflate(aux, root.t, &rem);
        if (!(std::abs(rem) <= 1e-9 * scale)) {
          std::ostringstream msg;
          msg << "synthetic division by detected circle root (" << root.t.real() << ", "
              << root.t.imag() << ") leaves relative residual " << std::abs(rem) / scale
              << "; the detected root set does not divide 1 - |P|^2";
          throw NonPositiveRatioError(msg.str());
        }
      }
      unimod *= pow_int(-root.t, root.half_multiplicity);
    }
    bpoly = std::move(aux);
  }

  UnitGridSamples on_grid(int n) const {
    const ComplexPoly& p = target->poly;
    const int d = p.degree();
    if (!kernels::is_pow2(n))
      throw std::invalid_argument("ratio grid size must be a power of two");
    if (n < 8 * (d + 1))
      throw std::invalid_argument("ratio grid needs at least 8*(degree+1) points");
    std::vector<cxd> w(static_cast<std::size_t>(n));
    if (!deflated) {
      if (extended) {
#pragma omp parallel for schedule(static)
        for (int k = 0; k < n; ++k) {
          const long double phi = (kTwoPiL * k) / n;
          w[k] = cxd(static_cast<double>(one_minus_abs2_ld(p, phi)), 0.0);
        }
      } else {
        std::vector<cxd> z(static_cast<std::size_t>(n)), pv(static_cast<std::size_t>(n));
        kernels::par::unit_circle(n, z);
        kernels::par::horner(p, z, pv);
#pragma omp parallel for schedule(static) if (n >= 4096)
        for (int k = 0; k < n; ++k) w[k] = cxd(1.0 - std::norm(pv[k]), 0.0);
      }
    } else {
      std::vector<cxd> z(static_cast<std::size_t>(n)), bv(static_cast<std::size_t>(n));
      kernels::par::unit_circle(n, z);
      kernels::par::horner(bpoly, z, bv);
      const long long shift = m - d;
#pragma omp parallel for schedule(static) if (n >= 4096)
      for (int k = 0; k < n; ++k) {
        // z_k^{m-d} via exact modular phase arithmetic (|z_k| = 1).
        const long long idx = ((shift * k) % n + n) % n;
        w[k] = bv[k] * std::polar(1.0, (kTwoPi * static_cast<double>(idx)) / n) * unimod;
      }
      for (int k = 0; k < n; ++k) {
        if (!(std::abs(w[k].imag()) < 1e-10)) {
          std::ostringstream msg;
          msg << "deflated ratio at grid node " << k << " has imaginary residue "
              << w[k].imag() << "; the detected circle roots are inconsistent";
          throw NonPositiveRatioError(msg.str());
        }
        w[k] = cxd(w[k].real(), 0.0);
      }
    }
    for (int k = 0; k < n; ++k) {
      if (!(w[k].real() > 0.0)) {
        std::ostringstream msg;
        msg << "ratio value " << w[k].real() << " at grid node " << k
            << " is not strictly positive (misdetected circle roots or |P| = 1 on the grid)";
        throw NonPositiveRatioError(msg.str());
      }
    }
    return UnitGridSamples(n, std::move(w));
  }

  long double value_at_angle(long double phi) const {
    if (!deflated) {
      const long double v = one_minus_abs2_ld(target->poly, phi);
      if (!(v > 0.0L))
        throw NonPositiveRatioError("1 - |P|^2 is not strictly positive at the quadrature node");
      return v;
    }
    const cxl b = horner_ld(bpoly.coeff, polar_ld(phi));
    const cxl u(unimod.real(), unimod.imag());
    const long double shift = static_cast<long double>(m - target->poly.degree());
    const cxl w = b * polar_ld(shift * phi) * u;
    if (!(w.real() > 0.0L))
      throw NonPositiveRatioError("deflated ratio is not strictly positive at the quadrature node");
    return w.real();
  }
};

// One grid pass of the main loop: log of the ratio, one-sided projection of
// its spectrum, exponentiation, multiplication by Q0 on the grid, and the
// transform back to coefficients; fills q, tail mass and the 2N-grid defect.
void run_pass(const TargetPolynomial& p, const RatioEvaluator& ratio, int n,
              CompletionResult* res) {
  const int d = p.poly.degree();
  const kernels::FftPlan plan(n);
  UnitGridSamples rg = ratio.on_grid(n);
  std::vector<cxd> buf = std::move(rg.value);
  const double inv_n = 1.0 / n;
#pragma omp parallel for schedule(static) if (n >= 4096)
  for (int k = 0; k < n; ++k) buf[k] = cxd(std::log(buf[k].real()), 0.0);
  kernels::par::fft(buf, plan, false);
#pragma omp parallel for schedule(static) if (n >= 4096)
  for (int k = 0; k < n; ++k) buf[k] *= inv_n;
  buf = riesz_project(std::move(buf));
  kernels::par::fft(buf, plan, true);  // grid values of the one-sided log factor

  std::vector<cxd> z(static_cast<std::size_t>(n));
  kernels::par::unit_circle(n, z);
#pragma omp parallel for schedule(static) if (n >= 1024)
  for (int k = 0; k < n; ++k) buf[k] = q0_at(ratio.roots, z[k]) * std::exp(buf[k]);
  kernels::par::fft(buf, plan, false);
#pragma omp parallel for schedule(static) if (n >= 4096)
  for (int k = 0; k < n; ++k) buf[k] *= inv_n;

  long double tail2 = 0.0L;
  for (int k = d + 1; k < n; ++k) tail2 += static_cast<long double>(std::norm(buf[k]));
  res->q = ComplexPoly(std::vector<cxd>(buf.begin(), buf.begin() + d + 1));
  res->n_used = n;
  res->tail_mass = static_cast<double>(std::sqrt(tail2));
  res->defect = defect(p, res->q, 2 * n);
}

}  // namespace

TargetPolynomial validate_target(const ComplexPoly& p, const CompletionConfig& cfg) {
  check_config(cfg);
  TargetPolynomial out;
  out.poly = p.trimmed(1e-12);
  if (std::abs(out.poly.coeff[0]) == 0.0)
    throw ZeroConstantTermError(
        "constant coefficient is zero; factor out the leading power of z first");
  const int d = out.poly.degree();
  out.sup_norm = sup_norm_circle(out.poly, 16 * (d + 1));
  if (out.sup_norm > 1.0 + kTauNorm) {
    std::ostringstream msg;
    msg << "measured circle sup-norm " << out.sup_norm << " exceeds 1";
    throw SupNormExceedsOneError(msg.str());
  }
  out.strictly_contractive = out.sup_norm < 1.0 - kDeltaStrict;
  return out;
}

CircleRootSet detect_circle_roots(const TargetPolynomial& p, const CompletionConfig& cfg) {
  check_config(cfg);
  CircleRootSet out;
  if (p.strictly_contractive) return out;
  const ComplexPoly& poly = p.poly;
  const int d = poly.degree();

  // Refined grid minimum of 1 - |P|^2: a strictly positive floor certifies
  // the empty root set without an eigensolve (which would be cubic in d).
  const int probe = std::max(64, 16 * (d + 1));
  long double best = std::numeric_limits<long double>::infinity();
  int best_k = 0;
  for (int k = 0; k < probe; ++k) {
    const long double v = one_minus_abs2_ld(poly, (kTwoPiL * k) / probe);
    if (v < best) {
      best = v;
      best_k = k;
    }
  }
  const long double h = kTwoPiL / probe;
  const long double refined = golden_min_ld(
      [&poly](long double t) { return one_minus_abs2_ld(poly, t); }, best_k * h - h,
      best_k * h + h);
  if (std::min(best, refined) > kCertifiedFloor) return out;

  const std::vector<cxd> roots = companion_roots(auxiliary_poly(poly));
  std::vector<cxd> near;
  for (const cxd& r : roots)
    if (std::abs(std::abs(r) - 1.0) < cfg.tau_circle) near.push_back(r);
  if (near.empty()) return out;

  std::sort(near.begin(), near.end(), [](const cxd& a, const cxd& b) {
    if (std::arg(a) != std::arg(b)) return std::arg(a) < std::arg(b);
    return std::norm(a) < std::norm(b);
  });
  const double cluster_tol = std::max(10.0 * cfg.tau_circle, 1e-7);
  std::vector<std::vector<cxd>> clusters;
  for (const cxd& r : near) {
    if (!clusters.empty() && std::abs(r - clusters.back().back()) <= cluster_tol)
      clusters.back().push_back(r);
    else
      clusters.push_back({r});
  }
  if (clusters.size() > 1 &&
      std::abs(clusters.front().front() - clusters.back().back()) <= cluster_tol) {
    // The sorted walk cut one cluster at the branch of arg; rejoin it.
    std::vector<cxd>& first = clusters.front();
    first.insert(first.end(), clusters.back().begin(), clusters.back().end());
    clusters.pop_back();
  }

  for (const std::vector<cxd>& cl : clusters) {
    if (cl.size() % 2 != 0) {
      std::ostringstream msg;
      msg << "cluster of " << cl.size() << " near-circle roots around angle "
          << std::arg(cl.front())
          << " has odd multiplicity; circle roots of 1 - |P|^2 must be even "
             "(raise or lower tau_circle, or the target is invalid)";
      throw OddCircleMultiplicityError(msg.str());
    }
    cxd centroid(0.0, 0.0);
    for (const cxd& r : cl) centroid += r;
    centroid /= static_cast<double>(cl.size());
    const double phi = refine_root_angle(poly, std::arg(centroid));
    out.roots.push_back({std::polar(1.0, phi), static_cast<int>(cl.size() / 2)});
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const CircleRoot& a, const CircleRoot& b) {
    return std::arg(a.t) < std::arg(b.t);
  });
  return out;
}

UnitGridSamples ratio_on_grid(const TargetPolynomial& p, const CircleRootSet& rootset, int n) {
  return RatioEvaluator(p, rootset).on_grid(n);
}

std::vector<cxd> riesz_project(std::vector<cxd> spectrum) {
  const int n = static_cast<int>(spectrum.size());
  if (n < 2 || !kernels::is_pow2(n))
    throw std::invalid_argument("spectrum length must be a power of two >= 2");
  spectrum[0] *= 0.5;
  // Index k < n/2 carries frequency +k; indices n/2.. carry the Nyquist mode
  // and the negative frequencies, all of which the projection kills.
  for (int k = n / 2; k < n; ++k) spectrum[k] = cxd(0.0, 0.0);
  return spectrum;
}

CompletionResult complete(const TargetPolynomial& p, const CompletionConfig& cfg,
                          const std::optional<CircleRootSet>& rootset_override) {
  check_config(cfg);
  const int d = p.poly.degree();
  CircleRootSet rootset;
  if (rootset_override)
    rootset = *rootset_override;
  else if (cfg.detect_circle_roots)
    rootset = detect_circle_roots(p, cfg);

  const RatioEvaluator ratio(p, rootset);
  CompletionResult res;
  res.rootset = rootset;
  res.sup_norm_p = p.sup_norm;
  if (!p.strictly_contractive && rootset.roots.empty())
    res.warnings.push_back(
        "target is nearly unimodular with no detected circle roots; "
        "log(1 - |P|^2) has large dynamic range and the grid may reach n_max");

  const int n_start = std::max(cfg.n_min, kernels::pow2_ceil(8 * (d + 1)));
  if (n_start > cfg.n_max)
    throw std::invalid_argument("n_max is too small for the target degree");
  for (int n = n_start;; n *= 2) {
    run_pass(p, ratio, n, &res);
    if (res.tail_mass <= cfg.tau_tail && res.defect <= cfg.tau_defect) return res;
    if (n >= cfg.n_max) break;
  }
  std::ostringstream msg;
  msg << "no convergence: grid " << res.n_used << " leaves defect " << res.defect
      << " and coefficient tail " << res.tail_mass;
  throw NoConvergenceError(msg.str(), res);
}

double defect(const TargetPolynomial& p, const ComplexPoly& q, int n_grid) {
  const int dmax = std::max(p.poly.degree(), q.degree());
  if (n_grid < 4 * (dmax + 1))
    throw std::invalid_argument("defect grid needs at least 4*(degree+1) points");
  std::vector<double> dev(static_cast<std::size_t>(n_grid));
  const std::vector<cxd>& pc = p.poly.coeff;
  const std::vector<cxd>& qc = q.coeff;
#pragma omp parallel for schedule(static) if (n_grid >= 1024)
  for (int k = 0; k < n_grid; ++k) {
    const cxl z = polar_ld((kTwoPiL * k) / n_grid);
    const cxl pv = horner_ld(pc, z);
    const cxl qv = horner_ld(qc, z);
    const long double val = 1.0L - (pv.real() * pv.real() + pv.imag() * pv.imag()) -
                            (qv.real() * qv.real() + qv.imag() * qv.imag());
    dev[k] = std::abs(static_cast<double>(val));
  }
  return kernels::par::max_abs(std::span<const double>(dev)).value;
}

std::vector<std::pair<double, double>> defect_curve(const TargetPolynomial& p,
                                                    const ComplexPoly& q, int n_grid) {
  if (n_grid < 16) throw std::invalid_argument("defect curve needs at least 16 points");
  std::vector<std::pair<double, double>> rows(static_cast<std::size_t>(n_grid));
  const std::vector<cxd>& pc = p.poly.coeff;
  const std::vector<cxd>& qc = q.coeff;
#pragma omp parallel for schedule(static) if (n_grid >= 1024)
  for (int k = 0; k < n_grid; ++k) {
    const double theta = (kTwoPi * k) / n_grid;
    const cxl z = polar_ld((kTwoPiL * k) / n_grid);
    const cxl pv = horner_ld(pc, z);
    const cxl qv = horner_ld(qc, z);
    const long double val = 1.0L - (pv.real() * pv.real() + pv.imag() * pv.imag()) -
                            (qv.real() * qv.real() + qv.imag() * qv.imag());
    rows[k] = {theta, std::abs(static_cast<double>(val))};
  }
  return rows;
}

cxd eval_Q_interior(const TargetPolynomial& p, const CircleRootSet& rootset, cxd z,
                    int m_nodes) {
  if (!(std::abs(z) <= 1.0 - 1e-3))
    throw std::invalid_argument("interior evaluation requires |z| <= 1 - 1e-3");
  if (m_nodes < 16) throw std::invalid_argument("quadrature needs at least 16 nodes");
  const RatioEvaluator ratio(p, rootset);
  const cxl zl(z.real(), z.imag());
  cxl acc(0.0L, 0.0L);
  for (int k = 0; k < m_nodes; ++k) {
    const long double phi = (kTwoPiL * k) / m_nodes;
    const cxl zp = polar_ld(phi);
    const long double r = std::log(ratio.value_at_angle(phi));
    acc += (zp + zl) / (zp - zl) * r;
  }
  acc /= 2.0L * m_nodes;
  const cxl q0(q0_at(rootset.roots, z).real(), q0_at(rootset.roots, z).imag());
  const cxl result = q0 * std::exp(acc);
  return cxd(static_cast<double>(result.real()), static_cast<double>(result.imag()));
}

cxd eval_Q_boundary(const TargetPolynomial& p, const CircleRootSet& rootset, double theta,
                    int m_nodes) {
  if (m_nodes < 16) throw std::invalid_argument("quadrature needs at least 16 nodes");
  const cxd zb = std::polar(1.0, theta);
  for (const CircleRoot& r : rootset.roots)
    if (std::abs(zb - r.t) <= 1e-6)
      throw std::invalid_argument("boundary evaluation point is too close to a circle root");
  const RatioEvaluator ratio(p, rootset);
  const long double log_rt = std::log(ratio.value_at_angle(theta));
  const cxl zl(zb.real(), zb.imag());
  cxl acc(0.0L, 0.0L);
  // Nodes straddle theta symmetrically, so the singular Cauchy kernel is
  // never sampled at its pole and its principal value (zero) is respected;
  // the subtracted integrand is smooth at phi = theta.
  for (int k = 0; k < m_nodes; ++k) {
    const long double phi =
        static_cast<long double>(theta) + (kTwoPiL * (k + 0.5L)) / m_nodes;
    const cxl zp = polar_ld(phi);
    const long double r = std::log(ratio.value_at_angle(phi));
    acc += (zp + zl) / (zp - zl) * (r - log_rt);
  }
  acc = acc / (2.0L * m_nodes) + 0.5L * log_rt;
  const cxd q0 = q0_at(rootset.roots, zb);
  const cxl result = cxl(q0.real(), q0.imag()) * std::exp(acc);
  return cxd(static_cast<double>(result.real()), static_cast<double>(result.imag()));
}

cxd eval_Q_exterior(const TargetPolynomial& p, const CircleRootSet& rootset, cxd z,
                    int m_nodes) {
  if (!(std::abs(z) >= 1.0 + 1e-3))
    throw std::invalid_argument("exterior evaluation requires |z| >= 1 + 1e-3");
  if (m_nodes < 16) throw std::invalid_argument("quadrature needs at least 16 nodes");
  const cxd w = 1.0 / z;
  // conj(P)(w) = sum conj(p_k) w^k and conj(Q0)(w) = prod (w - conj(t_j))^{l_j}.
  cxd pstar(0.0, 0.0);
  for (std::size_t k = p.poly.coeff.size(); k-- > 0;)
    pstar = pstar * w + std::conj(p.poly.coeff[k]);
  cxd q0star(1.0, 0.0);
  for (const CircleRoot& r : rootset.roots)
    q0star *= pow_int(w - std::conj(r.t), r.half_multiplicity);
  if (std::abs(q0star) < 1e-12)
    throw DivisionByZeroQ0Error("conj(Q0)(1/z) vanishes at the requested exterior point");
  const cxd prefactor = (1.0 - evaluate_monomial(p.poly, z) * pstar) / q0star;

  const RatioEvaluator ratio(p, rootset);
  const cxl zl(z.real(), z.imag());
  cxl acc(0.0L, 0.0L);
  for (int k = 0; k < m_nodes; ++k) {
    const long double phi = (kTwoPiL * k) / m_nodes;
    const cxl zp = polar_ld(phi);
    const long double r = std::log(ratio.value_at_angle(phi));
    acc += (zp + zl) / (zp - zl) * r;
  }
  acc /= 2.0L * m_nodes;
  const cxl result = cxl(prefactor.real(), prefactor.imag()) * std::exp(acc);
  return cxd(static_cast<double>(result.real()), static_cast<double>(result.imag()));
}

int winding_number(const ComplexPoly& q, double radius, int n_grid) {
  if (!(radius > 0.0)) throw std::invalid_argument("winding radius must be positive");
  const int d = q.degree();
  if (n_grid < std::max(16, 8 * (d + 1)))
    throw std::invalid_argument("winding grid needs at least 8*(degree+1) points");
  std::vector<cxd> pts(static_cast<std::size_t>(n_grid)), vals(static_cast<std::size_t>(n_grid));
#pragma omp parallel for schedule(static) if (n_grid >= 4096)
  for (int k = 0; k < n_grid; ++k) pts[k] = std::polar(radius, (kTwoPi * k) / n_grid);
  kernels::par::horner(q, pts, vals);
  double min_mod = std::numeric_limits<double>::infinity();
  for (const cxd& v : vals) min_mod = std::min(min_mod, std::abs(v));
  if (!(min_mod > 1e-9)) {
    std::ostringstream msg;
    msg << "q has modulus " << min_mod << " on the contour of radius " << radius
        << "; the winding number is not defined there";
    throw NearZeroOnContourError(msg.str());
  }
  long double total = 0.0L;
  for (int k = 0; k < n_grid; ++k)
    total += static_cast<long double>(std::arg(vals[(k + 1) % n_grid] / vals[k]));
  return static_cast<int>(std::llround(static_cast<double>(total / kTwoPiL)));
}

}  // namespace qsprep::completion
