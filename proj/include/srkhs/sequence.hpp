// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace srkhs {

/// Named sequence generator s(i), i = 1, 2, ...
///
/// Textual form (used by configs and the CLI):
///   power:e        s(i) = i^e
///   geometric:r    s(i) = r^i
///   constant:c     s(i) = c
///   literal:a,b,.. s(1) = a, s(2) = b, ..., zero past the end
class Sequence {
 public:
  enum class Kind { Power, Geometric, Constant, Literal };

  static Sequence power(double exponent);
  static Sequence geometric(double ratio);
  static Sequence constant(double value);
  static Sequence literal(std::vector<double> values);
  static Sequence parse(std::string_view text);

  double operator()(std::size_t i) const;

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  const std::vector<double>& values() const { return values_; }

  /// Closed-form answer to "is sum |s(i)| finite", when the family decides it.
  std::optional<bool> abs_summable() const;
  /// Closed-form answer to "is sum s(i)^2 finite".
  std::optional<bool> square_summable() const;
  /// sum_i |s(i)| when finite and available in closed form.
  std::optional<double> abs_sum() const;
  /// Number of non-zero terms if finite.
  std::optional<std::size_t> support() const;

  std::string to_string() const;

  friend bool operator==(const Sequence&, const Sequence&) = default;

 private:
  Sequence(Kind kind, double param, std::vector<double> values)
      : kind_(kind), param_(param), values_(std::move(values)) {}

  Kind kind_;
  double param_;
  std::vector<double> values_;
};

/// Formats a double with the shortest representation that round-trips.
std::string format_double(double value);

/// Parses a double, throwing ConfigError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);

}  // namespace srkhs
