// Copyright 2026 The Bellab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace bellab {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (e.g. |value| > 1).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Pearson correlation requested for a constant marginal.
class ZeroDispersion : public Error {
  public:
    using Error::Error;
};

/// A probability table or weight vector is negative somewhere or not normalized.
class InvalidDistribution : public Error {
  public:
    using Error::Error;
};

class InvalidJpd : public Error {
  public:
    using Error::Error;
};

/// A CHSH list value derived from a valid joint distribution exceeded 2.
/// This can only mean an implementation bug.
class TheoremViolation : public Error {
  public:
    using Error::Error;
};

/// The model has no per-microstate local-response decomposition.
class NotLocal : public Error {
  public:
    using Error::Error;
};

/// The LP solver did not reach a decision in either arithmetic.
class NumericalFailure : public Error {
  public:
    using Error::Error;
};

/// A setting pair had no usable events for the chosen estimator.
class NoCoincidences : public Error {
  public:
    using Error::Error;
};

/// The assumption report broke the locality implication chain.
class InconsistentReport : public Error {
  public:
    using Error::Error;
};

/// A model file was unreadable or violated a type invariant. `line` is 1-based,
/// 0 when no line applies (missing file, unknown builtin).
class ModelFileError : public Error {
  public:
    ModelFileError(std::string origin, std::size_t line, const std::string& what)
        : Error(format(origin, line, what)), origin_(std::move(origin)), line_(line) {}

    const std::string& origin() const noexcept { return origin_; }
    std::size_t line() const noexcept { return line_; }

  private:
    static std::string format(const std::string& origin, std::size_t line, const std::string& what) {
        if (line == 0) return origin + ": " + what;
        return origin + ":" + std::to_string(line) + ": " + what;
    }

    std::string origin_;
    std::size_t line_;
};

}  // namespace bellab
