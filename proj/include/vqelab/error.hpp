// Copyright 2026 The vqelab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Exception hierarchy shared by every vqelab module.
 *
 * Validation-type errors (bad input, malformed files, violated
 * preconditions) derive from ValidationError; everything that can only be
 * detected while running (I/O, non-convergence) derives from RuntimeFailure.
 * The CLI maps the two families onto exit codes 1 and 2.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vqelab {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
  public:
    using Error::Error;
};

class RuntimeFailure : public Error {
  public:
    using Error::Error;
};

/// Mismatched qubit counts, vector lengths or matrix shapes.
class DimensionError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// An operator does not have a symmetry that a reduction relies on.
class SymmetryError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
  public:
    ParseError(const std::string &what, std::size_t line)
        : ValidationError(line ? what + " (line " + std::to_string(line) + ")"
                               : what),
          line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// A requested dense object would exceed the configured size cap.
class ResourceError : public RuntimeFailure {
  public:
    using RuntimeFailure::RuntimeFailure;
};

class IoError : public RuntimeFailure {
  public:
    using RuntimeFailure::RuntimeFailure;
};

class ConvergenceError : public RuntimeFailure {
  public:
    using RuntimeFailure::RuntimeFailure;
};

/// The physical-subspace weight of a padded first-quantization state is zero.
class DegenerateProjectionError : public RuntimeFailure {
  public:
    using RuntimeFailure::RuntimeFailure;
};

} // namespace vqelab
