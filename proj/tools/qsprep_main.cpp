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

// qsprep command-line tool.
//
//   invpoly    --a <f> (--n <i> | --epsilon <f>) --output <path> [--plot <path>]
//   complement --input <path> [--tolerance <f>] [--max-n <i>] [--normalize-phase]
//              --output <path> [--diagnostics <path>]
//   verify     --p <path> --q <path> [--grid <i>]
//   pipeline   --a <f> --epsilon <f> --outdir <path>
//
// Exit codes: 0 ok, 2 invalid input, 3 internal tolerance failure,
// 4 no convergence, 5 verification failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsprep/completion.hpp"
#include "qsprep/errors.hpp"
#include "qsprep/inversion.hpp"
#include "qsprep/io.hpp"
#include "qsprep/kernels.hpp"
#include "qsprep/poly.hpp"
#include "qsprep/reference.hpp"

namespace {

namespace fs = std::filesystem;
using namespace qsprep;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitTolerance = 3;
constexpr int kExitNoConvergence = 4;
constexpr int kExitVerification = 5;

// Sup of |p| over [-1, 1] on a dense inclusive grid with a golden-section
// refinement around the best cell; the grid contains both endpoints exactly.
double sup_norm_interval(const RealChebPoly& p) {
  constexpr int kGrid = 100001;
  double best = 0.0;
  int best_i = 0;
  for (int i = 0; i < kGrid; ++i) {
    const double x = -1.0 + (2.0 * i) / (kGrid - 1);
    const double v = std::abs(evaluate_chebyshev(p, x));
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  double lo = -1.0 + (2.0 * std::max(0, best_i - 1)) / (kGrid - 1);
  double hi = -1.0 + (2.0 * std::min(kGrid - 1, best_i + 1)) / (kGrid - 1);
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = std::abs(evaluate_chebyshev(p, x1));
  double f2 = std::abs(evaluate_chebyshev(p, x2));
  for (int it = 0; it < 90; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = std::abs(evaluate_chebyshev(p, x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = std::abs(evaluate_chebyshev(p, x1));
    }
  }
  return std::max(best, std::max(f1, f2));
}

std::string with_suffix(const fs::path& base, const std::string& suffix) {
  fs::path stem = base;
  stem.replace_extension();
  return stem.string() + suffix;
}

struct InvpolyArgs {
  double a = 0.0;
  int n = 0;
  double epsilon = 0.0;
  bool has_n = false;
  bool has_epsilon = false;
  std::string output;
  std::string plot;
};

int run_invpoly(const InvpolyArgs& args) {
  if (!(args.a > 0.0 && args.a < 1.0))
    throw std::invalid_argument("--a must lie strictly inside (0, 1)");
  if (args.has_n == args.has_epsilon)
    throw std::invalid_argument("exactly one of --n and --epsilon is required");
  int n = args.n;
  if (args.has_n) {
    if (n < 1 || n > 1000) throw std::invalid_argument("--n must lie in 1..1000");
  } else {
    if (!(args.epsilon > 0.0)) throw std::invalid_argument("--epsilon must be positive");
    n = inversion::select_degree(args.a, args.epsilon);
    if (n > 1000)
      throw std::invalid_argument("accuracy " + io::format_double(args.epsilon) +
                                  " needs half-degree n = " + std::to_string(n) +
                                  " beyond the supported 1000");
  }

  const inversion::InversionPolynomial ip = inversion::build({args.a, n});
  if (n > 20)
    std::cerr << "warning: monomial-basis coefficients are severely ill-conditioned for "
                 "n > 20; prefer the chebyshev document\n";

  const fs::path out(args.output);
  const fs::path monomial_path = with_suffix(out, ".monomial.json");
  const fs::path diag_path = with_suffix(out, ".diagnostics.json");
  const fs::path manifest_path = with_suffix(out, ".manifest.json");
  const fs::path csv_path = args.plot.empty() ? fs::path(with_suffix(out, ".error.csv"))
                                              : fs::path(args.plot);

  io::write_polynomial_chebyshev(out, ip.cheb);
  io::write_polynomial_monomial(monomial_path, chebyshev_to_monomial(ip.cheb));
  io::write_inversion_diagnostics(diag_path, ip);
  io::write_curve_csv(csv_path, "x,error", inversion::error_curve(ip, 512));

  io::RunManifest man;
  man.command = "invpoly";
  man.outputs = {out.string(), monomial_path.string(), diag_path.string(), csv_path.string()};
  man.config["a"] = args.a;
  man.config["n"] = n;
  if (args.has_epsilon) man.config["epsilon"] = args.epsilon;
  man.config["output"] = args.output;
  if (!args.plot.empty()) man.config["plot"] = args.plot;
  io::write_manifest(manifest_path, man);
  return kExitOk;
}

struct ComplementArgs {
  std::string input;
  double tolerance = 0.0;
  bool has_tolerance = false;
  int max_n = 0;
  bool has_max_n = false;
  bool normalize_phase = false;
  std::string output;
  std::string diagnostics;
};

int run_complement(const ComplementArgs& args) {
  const ComplexPoly input = io::read_polynomial_as_monomial(args.input);
  completion::CompletionConfig cfg;
  if (args.has_tolerance) {
    if (!(args.tolerance > 0.0 && args.tolerance < 1.0))
      throw std::invalid_argument("--tolerance must lie strictly inside (0, 1)");
    cfg.tau_defect = args.tolerance;
  }
  if (args.has_max_n) {
    if (args.max_n < 8) throw std::invalid_argument("--max-n must be at least 8");
    cfg.n_max = kernels::pow2_ceil(args.max_n);
    cfg.n_min = std::min(cfg.n_min, cfg.n_max);
  }
  const completion::TargetPolynomial target = completion::validate_target(input, cfg);

  const fs::path out(args.output);
  const fs::path diag_path = args.diagnostics.empty()
                                 ? fs::path(with_suffix(out, ".diagnostics.json"))
                                 : fs::path(args.diagnostics);
  const fs::path csv_path = with_suffix(out, ".defect.csv");
  const fs::path manifest_path = with_suffix(out, ".manifest.json");

  io::RunManifest man;
  man.command = "complement";
  man.inputs = {args.input};
  man.config["input"] = args.input;
  if (args.has_tolerance) man.config["tolerance"] = args.tolerance;
  if (args.has_max_n) man.config["max_n"] = args.max_n;
  if (args.normalize_phase) man.config["normalize_phase"] = true;
  man.config["output"] = args.output;
  if (!args.diagnostics.empty()) man.config["diagnostics"] = args.diagnostics;

  completion::CompletionResult res;
  try {
    res = completion::complete(target, cfg);
  } catch (const completion::NoConvergenceError& e) {
    std::cerr << "error: NoConvergence: " << e.what() << "\n";
    io::write_completion_diagnostics(diag_path, e.last());
    man.outputs = {diag_path.string()};
    io::write_manifest(manifest_path, man);
    return kExitNoConvergence;
  }

  ComplexPoly q = res.q;
  if (args.normalize_phase) {
    const cxd lead = q.coeff.back();
    const cxd rot = std::conj(lead) / std::abs(lead);
    for (cxd& c : q.coeff) c *= rot;
  }

  io::write_polynomial_monomial(out, q);
  io::write_completion_diagnostics(diag_path, res);
  io::write_curve_csv(csv_path, "theta,defect",
                      completion::defect_curve(target, q, 4096));
  man.outputs = {out.string(), diag_path.string(), csv_path.string()};
  io::write_manifest(manifest_path, man);
  return kExitOk;
}

struct VerifyArgs {
  std::string p_path;
  std::string q_path;
  int grid = 4096;
};

int run_verify(const VerifyArgs& args) {
  if (args.grid < 16) throw std::invalid_argument("--grid must be at least 16");
  const ComplexPoly p = io::read_polynomial_as_monomial(args.p_path);
  const ComplexPoly q = io::read_polynomial_as_monomial(args.q_path);

  completion::TargetPolynomial tp;  // defect reads only the coefficients
  tp.poly = p;
  const int dmax = std::max(p.degree(), q.degree());
  const double dft = completion::defect(tp, q, std::max(args.grid, 4 * (dmax + 1)));
  std::cout << "defect " << io::format_double(dft) << "\n";

  try {
    const int wgrid = std::max(args.grid, std::max(64, 8 * (q.degree() + 1)));
    const int w = completion::winding_number(q, 1.0 - 1e-6, wgrid);
    std::cout << "winding " << w << "\n";
  } catch (const NearZeroOnContourError&) {
    std::cout << "winding undefined\n";
  }

  if (p.trimmed().degree() <= 8) {
    try {
      const completion::TargetPolynomial target = completion::validate_target(p);
      const ComplexPoly oracle = reference::complementary_by_roots(target);
      if (oracle.degree() == q.degree()) {
        const reference::PhaseAlign align = reference::align_phase(q, oracle);
        std::cout << "oracle_max_diff " << io::format_double(align.max_diff) << "\n";
      } else {
        std::cerr << "note: oracle complement has degree " << oracle.degree()
                  << ", input q has degree " << q.degree() << "; no comparison\n";
      }
    } catch (const Error& e) {
      std::cerr << "note: oracle comparison unavailable: " << e.what() << "\n";
    }
  }
  return dft <= 1e-8 ? kExitOk : kExitVerification;
}

struct PipelineArgs {
  double a = 0.0;
  double epsilon = 0.0;
  std::string outdir;
};

int run_pipeline(const PipelineArgs& args) {
  if (!(args.a > 0.0 && args.a < 1.0))
    throw std::invalid_argument("--a must lie strictly inside (0, 1)");
  if (!(args.epsilon > 0.0)) throw std::invalid_argument("--epsilon must be positive");
  const int n = inversion::select_degree(args.a, args.epsilon);
  if (n > 1000)
    throw std::invalid_argument("accuracy " + io::format_double(args.epsilon) +
                                " needs half-degree n = " + std::to_string(n) +
                                " beyond the supported 1000");

  const inversion::InversionPolynomial ip = inversion::build({args.a, n});
  const double sup = sup_norm_interval(ip.cheb);
  const double scale = 1.0 / (sup * (1.0 + 1e-6));
  RealChebPoly scaled = ip.cheb;
  for (double& c : scaled.coeff) c *= scale;
  const ComplexPoly lifted = circle_lift(scaled);
  const completion::TargetPolynomial target = completion::validate_target(lifted);

  const fs::path outdir(args.outdir);
  fs::create_directories(outdir);
  const fs::path cheb_path = outdir / "inversion.chebyshev.json";
  const fs::path monomial_path = outdir / "inversion.monomial.json";
  const fs::path inv_diag_path = outdir / "inversion.diagnostics.json";
  const fs::path inv_csv_path = outdir / "inversion.error.csv";
  const fs::path target_path = outdir / "target.json";
  const fs::path q_path = outdir / "q.json";
  const fs::path comp_diag_path = outdir / "completion.diagnostics.json";
  const fs::path comp_csv_path = outdir / "completion.defect.csv";
  const fs::path manifest_path = outdir / "manifest.json";

  io::write_polynomial_chebyshev(cheb_path, scaled);
  io::write_polynomial_monomial(monomial_path, chebyshev_to_monomial(scaled));
  io::write_inversion_diagnostics(inv_diag_path, ip);
  io::write_curve_csv(inv_csv_path, "x,error", inversion::error_curve(ip, 512));
  io::write_polynomial_monomial(target_path, target.poly);

  io::RunManifest man;
  man.command = "pipeline";
  man.config["a"] = args.a;
  man.config["epsilon"] = args.epsilon;
  man.config["outdir"] = args.outdir;
  man.outputs = {cheb_path.string(),   monomial_path.string(), inv_diag_path.string(),
                 inv_csv_path.string(), target_path.string()};

  completion::CompletionResult res;
  try {
    res = completion::complete(target);
  } catch (const completion::NoConvergenceError& e) {
    std::cerr << "error: NoConvergence: " << e.what() << "\n";
    io::write_completion_diagnostics(comp_diag_path, e.last(), scale);
    man.outputs.push_back(comp_diag_path.string());
    io::write_manifest(manifest_path, man);
    return kExitNoConvergence;
  }

  io::write_polynomial_monomial(q_path, res.q);
  io::write_completion_diagnostics(comp_diag_path, res, scale);
  io::write_curve_csv(comp_csv_path, "theta,defect",
                      completion::defect_curve(target, res.q, 4096));
  man.outputs.push_back(q_path.string());
  man.outputs.push_back(comp_diag_path.string());
  man.outputs.push_back(comp_csv_path.string());
  io::write_manifest(manifest_path, man);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"complementary-polynomial completion and inverse-approximant toolkit"};
  app.require_subcommand(1);

  InvpolyArgs inv_args;
  CLI::App* inv = app.add_subcommand("invpoly", "build the equioscillating inverse approximant");
  inv->add_option("--a", inv_args.a, "inner domain edge, 0 < a < 1")->required();
  CLI::Option* n_opt = inv->add_option("--n", inv_args.n, "half-degree (degree 2n-1)");
  CLI::Option* eps_opt =
      inv->add_option("--epsilon", inv_args.epsilon, "target uniform error; resolves n");
  n_opt->excludes(eps_opt);
  eps_opt->excludes(n_opt);
  inv->add_option("--output", inv_args.output, "chebyshev polynomial JSON path")->required();
  inv->add_option("--plot", inv_args.plot, "error-curve CSV path (default <output>.error.csv)");

  ComplementArgs comp_args;
  CLI::App* comp = app.add_subcommand("complement", "complete |P|^2 + |Q|^2 = 1 on the circle");
  comp->add_option("--input", comp_args.input, "target polynomial JSON path")->required();
  CLI::Option* tol_opt =
      comp->add_option("--tolerance", comp_args.tolerance, "defect acceptance tolerance");
  CLI::Option* maxn_opt =
      comp->add_option("--max-n", comp_args.max_n, "largest grid size (rounded up to 2^k)");
  comp->add_flag("--normalize-phase", comp_args.normalize_phase,
                 "rotate q so its leading coefficient is real positive");
  comp->add_option("--output", comp_args.output, "complement polynomial JSON path")->required();
  comp->add_option("--diagnostics", comp_args.diagnostics,
                   "diagnostics JSON path (default <output>.diagnostics.json)");

  VerifyArgs ver_args;
  CLI::App* ver = app.add_subcommand("verify", "check a (P, Q) pair against the defect identity");
  ver->add_option("--p", ver_args.p_path, "target polynomial JSON path")->required();
  ver->add_option("--q", ver_args.q_path, "complement polynomial JSON path")->required();
  ver->add_option("--grid", ver_args.grid, "verification grid size (default 4096)");

  PipelineArgs pipe_args;
  CLI::App* pipe = app.add_subcommand("pipeline", "inverse approximant -> lift -> complement");
  pipe->add_option("--a", pipe_args.a, "inner domain edge, 0 < a < 1")->required();
  pipe->add_option("--epsilon", pipe_args.epsilon, "target uniform error")->required();
  pipe->add_option("--outdir", pipe_args.outdir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }
  inv_args.has_n = n_opt->count() > 0;
  inv_args.has_epsilon = eps_opt->count() > 0;
  comp_args.has_tolerance = tol_opt->count() > 0;
  comp_args.has_max_n = maxn_opt->count() > 0;

  const char* name = "?";
  const auto t0 = std::chrono::steady_clock::now();
  int rc = kExitInvalid;
  try {
    if (inv->parsed()) {
      name = "invpoly";
      rc = run_invpoly(inv_args);
    } else if (comp->parsed()) {
      name = "complement";
      rc = run_complement(comp_args);
    } else if (ver->parsed()) {
      name = "verify";
      rc = run_verify(ver_args);
    } else if (pipe->parsed()) {
      name = "pipeline";
      rc = run_pipeline(pipe_args);
    }
  } catch (const ZeroConstantTermError& e) {
    std::cerr << "error: ZeroConstantTerm: " << e.what() << "\n";
    rc = kExitInvalid;
  } catch (const SupNormExceedsOneError& e) {
    std::cerr << "error: SupNormExceedsOne: " << e.what() << "\n";
    rc = kExitInvalid;
  } catch (const ParityError& e) {
    std::cerr << "error: Parity: " << e.what() << "\n";
    rc = kExitTolerance;
  } catch (const completion::NoConvergenceError& e) {
    std::cerr << "error: NoConvergence: " << e.what() << "\n";
    rc = kExitNoConvergence;
  } catch (const ParseError& e) {
    std::cerr << "error: Parse: " << e.what() << "\n";
    rc = kExitInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = kExitInvalid;
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  std::cerr << "qsprep " << name << ": " << dt.count() << " s\n";
  return rc;
}
