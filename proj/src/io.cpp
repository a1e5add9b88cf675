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

#include "qsprep/io.hpp"

#include <charconv>
#include <fstream>
#include <string>
#include <system_error>

#include "qsprep/version.hpp"

namespace qsprep::io {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json coefficients_to_json(const std::vector<cxd>& coeff) {
  ordered_json arr = ordered_json::array();
  for (const cxd& c : coeff) arr.push_back(ordered_json::array({c.real(), c.imag()}));
  return arr;
}

void dump_json(const std::filesystem::path& path, const ordered_json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

double number_at(const ordered_json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string("expected a number for ") + what);
  return j.get<double>();
}

}  // namespace

PolyDocument read_polynomial(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) throw ParseError("cannot open polynomial file: " + path.string());
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed JSON in " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("polynomial document must be a JSON object");
  if (!j.contains("basis") || !j["basis"].is_string())
    throw ParseError("polynomial document needs a string field \"basis\"");
  const std::string basis = j["basis"].get<std::string>();
  if (basis != "monomial" && basis != "chebyshev")
    throw ParseError("unknown basis \"" + basis + "\" (expected \"monomial\" or \"chebyshev\")");
  if (!j.contains("coefficients") || !j["coefficients"].is_array() || j["coefficients"].empty())
    throw ParseError("polynomial document needs a non-empty array field \"coefficients\"");

  std::vector<cxd> coeff;
  coeff.reserve(j["coefficients"].size());
  for (const ordered_json& entry : j["coefficients"]) {
    if (!entry.is_array() || entry.size() != 2)
      throw ParseError("each coefficient must be a [re, im] pair");
    const double re = number_at(entry[0], "a coefficient real part");
    const double im = number_at(entry[1], "a coefficient imaginary part");
    coeff.emplace_back(re, im);
  }

  PolyDocument doc;
  doc.basis = basis;
  if (basis == "monomial") {
    doc.monomial = ComplexPoly(std::move(coeff));
  } else {
    std::vector<double> real_coeff(coeff.size());
    for (std::size_t k = 0; k < coeff.size(); ++k) {
      if (coeff[k].imag() != 0.0)
        throw ParseError("chebyshev coefficients must have zero imaginary part");
      real_coeff[k] = coeff[k].real();
    }
    doc.chebyshev = RealChebPoly(std::move(real_coeff));
  }
  return doc;
}

ComplexPoly read_polynomial_as_monomial(const std::filesystem::path& path) {
  const PolyDocument doc = read_polynomial(path);
  if (doc.basis == "monomial") return doc.monomial;
  return chebyshev_to_monomial(doc.chebyshev);
}

void write_polynomial_monomial(const std::filesystem::path& path, const ComplexPoly& p) {
  ordered_json j;
  j["basis"] = "monomial";
  j["coefficients"] = coefficients_to_json(p.coeff);
  dump_json(path, j);
}

void write_polynomial_chebyshev(const std::filesystem::path& path, const RealChebPoly& p) {
  ordered_json j;
  j["basis"] = "chebyshev";
  ordered_json arr = ordered_json::array();
  for (double c : p.coeff) arr.push_back(ordered_json::array({c, 0.0}));
  j["coefficients"] = arr;
  dump_json(path, j);
}

void write_inversion_diagnostics(const std::filesystem::path& path,
                                 const inversion::InversionPolynomial& ip) {
  ordered_json j;
  j["a"] = ip.spec.a;
  j["n"] = ip.spec.n;
  j["eps_bound"] = ip.eps_bound;
  j["eps_measured"] = ip.eps_measured;
  j["alternations"] = ip.alternation_count;
  dump_json(path, j);
}

void write_completion_diagnostics(const std::filesystem::path& path,
                                  const completion::CompletionResult& res,
                                  std::optional<double> scale) {
  ordered_json j;
  j["n_used"] = res.n_used;
  j["defect"] = res.defect;
  j["tail_mass"] = res.tail_mass;
  ordered_json roots = ordered_json::array();
  for (const completion::CircleRoot& r : res.rootset.roots) {
    ordered_json entry;
    entry["t"] = ordered_json::array({r.t.real(), r.t.imag()});
    entry["l"] = r.half_multiplicity;
    roots.push_back(entry);
  }
  j["circle_roots"] = roots;
  j["sup_norm_p"] = res.sup_norm_p;
  if (!res.warnings.empty()) j["warnings"] = res.warnings;
  if (scale) j["scale"] = *scale;
  dump_json(path, j);
}

void write_curve_csv(const std::filesystem::path& path, const std::string& header,
                     const std::vector<std::pair<double, double>>& rows) {
  std::string out = header + "\n";
  for (const auto& [x, y] : rows) {
    out += format_double(x);
    out += ',';
    out += format_double(y);
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::string format_double(double v) {
  char buf[64];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  ordered_json j;
  j["command"] = manifest.command;
  j["inputs"] = manifest.inputs;
  j["outputs"] = manifest.outputs;
  j["config"] = manifest.config;
  j["version"] = kVersion;
  dump_json(path, j);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out.is_open())
      throw std::invalid_argument("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.good()) throw std::invalid_argument("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw std::invalid_argument("cannot rename " + tmp.string() + " -> " + path.string() +
                                ": " + ec.message());
}

}  // namespace qsprep::io
