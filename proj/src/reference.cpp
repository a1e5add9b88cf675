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

#include "qsprep/reference.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace qsprep::reference {

namespace {

using cxl = std::complex<long double>;

constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;
constexpr double kCircleTol = 1e-8;  // |.|-distance from the unit circle
constexpr double kPairTol = 1e-6;    // matching tolerance for reciprocal pairs

cxl to_ld(cxd z) { return cxl(z.real(), z.imag()); }

cxl horner_ld(const std::vector<cxd>& c, cxl z) {
  cxl acc(0.0L, 0.0L);
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + to_ld(c[k]);
  return acc;
}

long double one_minus_abs2_ld(const ComplexPoly& p, long double phi) {
  const cxl v = horner_ld(p.coeff, cxl(std::cos(phi), std::sin(phi)));
  return 1.0L - (v.real() * v.real() + v.imag() * v.imag());
}

// z^d - P(z) * conjugate_reciprocal(P)(z); equals z^d (1 - |P(z)|^2) on the
// unit circle, so its roots carry the full reciprocal root symmetry.
ComplexPoly pair_symmetric_poly(const ComplexPoly& p) {
  const ComplexPoly prod = multiply(p, conjugate_reciprocal(p));
  std::vector<cxd> a(prod.coeff.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = -prod.coeff[k];
  a[static_cast<std::size_t>(p.degree())] += 1.0;
  return ComplexPoly(std::move(a));
}

}  // namespace

RootMultiset roots_via_companion(const ComplexPoly& p) {
  const int d = p.degree();
  if (d > 32) throw DegreeTooHighError("companion root finding is limited to degree 32");
  const cxd lead = p.coeff.back();
  if (std::abs(lead) < 1e-12)
    throw LeadingCoefficientZeroError("leading coefficient is numerically zero");
  RootMultiset out;
  if (d == 0) return out;

  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    if (i + 1 < d) mat(i + 1, i) = 1.0;
    mat(i, d - 1) = -p.coeff[static_cast<std::size_t>(i)] / lead;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(mat, false);
  if (solver.info() != Eigen::Success) throw Error("companion eigenvalue iteration failed");

  const auto eval_pair = [&p](cxd z, cxd* deriv) {
    cxd value(0.0, 0.0), dv(0.0, 0.0);
    for (std::size_t k = p.coeff.size(); k-- > 0;) {
      dv = dv * z + value;
      value = value * z + p.coeff[k];
    }
    *deriv = dv;
    return value;
  };
  out.roots.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    cxd r = solver.eigenvalues()(i);
    // One guarded Newton correction: accepted only when it reduces |p(r)|.
    cxd deriv;
    const cxd value = eval_pair(r, &deriv);
    if (std::abs(deriv) > 0.0) {
      const cxd cand = r - value / deriv;
      cxd cand_deriv;
      if (std::abs(eval_pair(cand, &cand_deriv)) < std::abs(value)) r = cand;
    }
    out.roots[static_cast<std::size_t>(i)] = r;
  }
  return out;
}

ComplexPoly complementary_by_roots(const completion::TargetPolynomial& p) {
  const int d = p.poly.degree();
  if (d > 8)
    throw DegreeTooHighError("root-based complementary construction is limited to degree 8");
  if (d == 0) {
    const double mag2 = std::norm(p.poly.coeff[0]);
    return ComplexPoly{cxd(std::sqrt(std::max(0.0, 1.0 - mag2)), 0.0)};
  }

  const RootMultiset all = roots_via_companion(pair_symmetric_poly(p.poly));

  std::vector<cxd> near, off;
  for (const cxd& r : all.roots) {
    if (std::abs(std::abs(r) - 1.0) < kCircleTol) near.push_back(r);
    else off.push_back(r);
  }

  // Circle clusters: sort by angle, chain neighbors, demand even sizes.
  std::sort(near.begin(), near.end(), [](const cxd& a, const cxd& b) {
    if (std::arg(a) != std::arg(b)) return std::arg(a) < std::arg(b);
    return std::norm(a) < std::norm(b);
  });
  const double cluster_tol = std::max(10.0 * kCircleTol, 1e-7);
  std::vector<std::vector<cxd>> clusters;
  for (const cxd& r : near) {
    if (!clusters.empty() && std::abs(r - clusters.back().back()) <= cluster_tol)
      clusters.back().push_back(r);
    else
      clusters.push_back({r});
  }
  if (clusters.size() > 1 &&
      std::abs(clusters.front().front() - clusters.back().back()) <= cluster_tol) {
    clusters.front().insert(clusters.front().end(), clusters.back().begin(),
                            clusters.back().end());
    clusters.pop_back();
  }

  std::vector<cxd> selected;
  cxd circle_phase(1.0, 0.0);  // prod (-t_j)^{l_j}: the phase of Q at z = 0
  for (const std::vector<cxd>& cl : clusters) {
    if (cl.size() % 2 != 0) {
      std::ostringstream msg;
      msg << "cluster of " << cl.size() << " near-circle roots has odd multiplicity";
      throw OddCircleMultiplicityError(msg.str());
    }
    cxd centroid(0.0, 0.0);
    for (const cxd& r : cl) centroid += r;
    const cxd t = centroid / std::abs(centroid);  // radial projection onto the circle
    for (std::size_t i = 0; i < cl.size() / 2; ++i) {
      selected.push_back(t);
      circle_phase *= -t;
    }
  }

  // Off-circle roots come in reciprocal pairs (r, 1/conj(r)); keep the outer
  // member of each pair, matching the minimum-winding spectral construction.
  std::vector<bool> used(off.size(), false);
  for (std::size_t i = 0; i < off.size(); ++i) {
    if (used[i] || std::abs(off[i]) <= 1.0) continue;
    const cxd mirror = 1.0 / std::conj(off[i]);
    std::size_t best = off.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < off.size(); ++j) {
      if (used[j] || j == i || std::abs(off[j]) > 1.0) continue;
      const double dist = std::abs(off[j] - mirror);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best == off.size() || best_dist > kPairTol * std::max(1.0, std::abs(mirror))) {
      std::ostringstream msg;
      msg << "no reciprocal partner within tolerance for root (" << off[i].real() << ", "
          << off[i].imag() << ")";
      throw UnpairedRootsError(msg.str());
    }
    used[i] = used[best] = true;
    selected.push_back(off[i]);
  }
  for (std::size_t j = 0; j < off.size(); ++j) {
    if (!used[j]) {
      std::ostringstream msg;
      msg << "root (" << off[j].real() << ", " << off[j].imag()
          << ") has no reciprocal partner";
      throw UnpairedRootsError(msg.str());
    }
  }
  if (static_cast<int>(selected.size()) != d) {
    std::ostringstream msg;
    msg << "selected " << selected.size() << " roots for a degree-" << d << " complement";
    throw UnpairedRootsError(msg.str());
  }

  // Monic product in extended precision.
  std::vector<cxl> coeff{cxl(1.0L, 0.0L)};
  for (const cxd& s : selected) {
    std::vector<cxl> next(coeff.size() + 1, cxl(0.0L, 0.0L));
    for (std::size_t k = 0; k < coeff.size(); ++k) {
      next[k + 1] += coeff[k];
      next[k] -= coeff[k] * to_ld(s);
    }
    coeff = std::move(next);
  }

  // Magnitude: match |Q| to sqrt(1 - |P|^2) where that value is largest.
  const int probe = std::max(1024, 64 * (d + 1));
  long double best_val = -std::numeric_limits<long double>::infinity();
  long double best_phi = 0.0L;
  for (int k = 0; k < probe; ++k) {
    const long double phi = (kTwoPiL * k) / probe;
    const long double v = one_minus_abs2_ld(p.poly, phi);
    if (v > best_val) {
      best_val = v;
      best_phi = phi;
    }
  }
  std::vector<cxd> coeff_d(coeff.size());
  for (std::size_t k = 0; k < coeff.size(); ++k)
    coeff_d[k] = cxd(static_cast<double>(coeff[k].real()), static_cast<double>(coeff[k].imag()));
  const cxl qraw = horner_ld(coeff_d, cxl(std::cos(best_phi), std::sin(best_phi)));
  const long double qraw2 = qraw.real() * qraw.real() + qraw.imag() * qraw.imag();
  if (!(qraw2 > 0.0L))
    throw ZeroPolynomialError("monic complement vanishes at the normalization point");
  const long double eta = std::sqrt(best_val / qraw2);

  // Phase: Q(0) = eta * u * prod(-s_j) must match circle_phase's direction.
  cxl q0(0.0L, 0.0L);
  q0 = coeff[0];
  const cxl target = to_ld(circle_phase);
  const cxl current = q0 * eta;
  const long double cur_mag = std::abs(current);
  cxl rot(1.0L, 0.0L);
  if (cur_mag > 0.0L) rot = (target / std::abs(target)) / (current / cur_mag);

  std::vector<cxd> out(coeff.size());
  for (std::size_t k = 0; k < coeff.size(); ++k) {
    const cxl v = coeff[k] * eta * rot;
    out[k] = cxd(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  }
  return ComplexPoly(std::move(out));
}

PhaseAlign align_phase(const ComplexPoly& q1, const ComplexPoly& q2) {
  if (q1.degree() != q2.degree())
    throw std::invalid_argument("phase alignment requires equal degrees");
  if (coeff_inf_norm(q1) == 0.0 || coeff_inf_norm(q2) == 0.0)
    throw ZeroPolynomialError("phase alignment of an identically zero polynomial");
  cxl s(0.0L, 0.0L);
  for (std::size_t k = 0; k < q1.coeff.size(); ++k)
    s += to_ld(q1.coeff[k]) * std::conj(to_ld(q2.coeff[k]));
  const long double mag = std::abs(s);
  if (!(mag > 0.0L))
    throw ZeroPolynomialError("coefficient inner product vanishes; no preferred phase");
  const cxl u = s / mag;
  const cxd phase(static_cast<double>(u.real()), static_cast<double>(u.imag()));
  double max_diff = 0.0;
  for (std::size_t k = 0; k < q1.coeff.size(); ++k)
    max_diff = std::max(max_diff, std::abs(q1.coeff[k] - phase * q2.coeff[k]));
  return PhaseAlign{phase, max_diff};
}

}  // namespace qsprep::reference
