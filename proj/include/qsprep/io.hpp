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

// File formats: polynomial JSON documents, diagnostics JSON, CSV curves and
// run manifests.  All writes are atomic (temp file + rename) and
// byte-deterministic: numbers serialize to their shortest round-trip decimal
// form, object keys keep a fixed order, and no timestamps are embedded.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsprep/completion.hpp"
#include "qsprep/errors.hpp"
#include "qsprep/inversion.hpp"
#include "qsprep/poly.hpp"

namespace qsprep::io {

// A polynomial document: {"basis": "monomial"|"chebyshev",
// "coefficients": [[re, im], ...]}.  Chebyshev documents must carry zero
// imaginary parts; violations and all structural problems raise ParseError.
struct PolyDocument {
  std::string basis;       // "monomial" or "chebyshev"
  ComplexPoly monomial;    // filled when basis == "monomial"
  RealChebPoly chebyshev;  // filled when basis == "chebyshev"
};

PolyDocument read_polynomial(const std::filesystem::path& path);

// Either reading accepts both bases: a chebyshev document is converted to
// monomial coefficients on demand.
ComplexPoly read_polynomial_as_monomial(const std::filesystem::path& path);

void write_polynomial_monomial(const std::filesystem::path& path, const ComplexPoly& p);
void write_polynomial_chebyshev(const std::filesystem::path& path, const RealChebPoly& p);

// {"a", "n", "eps_bound", "eps_measured", "alternations"} in that order.
void write_inversion_diagnostics(const std::filesystem::path& path,
                                 const inversion::InversionPolynomial& ip);

// {"n_used", "defect", "tail_mass", "circle_roots", "sup_norm_p"} in that
// order, followed by "warnings" when any are present and "scale" when given.
void write_completion_diagnostics(const std::filesystem::path& path,
                                  const completion::CompletionResult& res,
                                  std::optional<double> scale = std::nullopt);

// Two-column CSV with the given header line; shortest round-trip decimals.
void write_curve_csv(const std::filesystem::path& path, const std::string& header,
                     const std::vector<std::pair<double, double>>& rows);

// Shortest decimal string that round-trips to the same double; the one float
// formatter used for every CSV cell and stdout report.
std::string format_double(double v);

// Reproducibility record written alongside every command's outputs:
// {"command", "inputs", "outputs", "config", "version"}.  Deliberately
// excludes wall-clock data (reported on stderr instead) so that reruns with
// identical inputs and version are byte-identical.
struct RunManifest {
  std::string command;  // invpoly | complement | verify | pipeline
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

// Atomic text-file write used by all writers above.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qsprep::io

