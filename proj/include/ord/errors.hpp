// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ord {

/// Malformed or missing input data (clouds, labels, poses, grid files).
/// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration value violates its contract. CLI exit code 3.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vehicle geometry for which the step-height expression is undefined
/// (zero friction).
class UndefinedConditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vehicle geometry whose step-height radicand goes negative; no real
/// solution exists.
class InfeasibleGeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ord
