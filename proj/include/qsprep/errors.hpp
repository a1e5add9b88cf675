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

#include <stdexcept>
#include <string>

namespace qsprep {

// Base class for all domain errors thrown by the library.  The CLI maps
// subclasses onto its documented exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- target validation ---

// The constant term of the target polynomial is exactly zero; divide the
// target by its lowest power of z before requesting a completion.
class ZeroConstantTermError : public Error {
 public:
  using Error::Error;
};

// The measured sup-norm of the target on the unit circle exceeds one beyond
// the validation tolerance, so no complementary polynomial exists.
class SupNormExceedsOneError : public Error {
 public:
  using Error::Error;
};

// --- circle-root handling ---

// A cluster of detected unit-circle roots has odd total multiplicity, which
// cannot happen for a nonnegative modulus profile; usually a mis-set
// clustering tolerance.
class OddCircleMultiplicityError : public Error {
 public:
  using Error::Error;
};

// The deflated modulus ratio came out non-positive (or insufficiently real)
// somewhere on the grid; usually a missed or misattributed circle root.
class NonPositiveRatioError : public Error {
 public:
  using Error::Error;
};

// --- misc numeric guards ---

// A contour evaluation found the polynomial's modulus too close to zero for
// a winding number to be meaningful on that circle.
class NearZeroOnContourError : public Error {
 public:
  using Error::Error;
};

// The reflected root product in the exterior evaluator vanished at the
// requested point.
class DivisionByZeroQ0Error : public Error {
 public:
  using Error::Error;
};

// Interpolated coefficients of the inverse approximant failed the odd-parity
// check; signals an evaluation bug rather than bad user input.
class ParityError : public Error {
 public:
  using Error::Error;
};

// --- reference (oracle) module ---

class DegreeTooHighError : public Error {
 public:
  using Error::Error;
};

class LeadingCoefficientZeroError : public Error {
 public:
  using Error::Error;
};

// Root pairing under r -> 1/conj(r) failed within tolerance.
class UnpairedRootsError : public Error {
 public:
  using Error::Error;
};

// Phase alignment was requested against a (numerically) zero polynomial.
class ZeroPolynomialError : public Error {
 public:
  using Error::Error;
};

// --- serialization ---

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qsprep
