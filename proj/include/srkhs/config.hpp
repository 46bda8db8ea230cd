// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srkhs/basis.hpp"
#include "srkhs/kernel.hpp"

namespace srkhs {

inline constexpr int kConfigSchema = 1;

/// Flat experiment configuration:
///
///   # comment
///   schema = 1
///   kernel = stable-spline
///   alpha = 0.95
///
/// Keys are lower-case identifiers; values run to the end of the line.
class Config {
 public:
  /// Parses the text form. `schema = 1` is mandatory.
  static Config parse(std::string_view text);
  static Config load(const std::string& path);

  /// schema first, then the remaining keys in lexicographic order.
  std::string serialize() const;

  void set(std::string key, std::string value);
  bool has(std::string_view key) const;
  std::optional<std::string> find(std::string_view key) const;
  const std::map<std::string, std::string, std::less<>>& entries() const { return values_; }

  std::string get_string(std::string_view key, std::string_view fallback) const;
  double get_double(std::string_view key, double fallback) const;
  std::size_t get_size(std::string_view key, std::size_t fallback) const;
  std::optional<std::uint64_t> get_seed() const;

  /// Throws ConfigError naming the first key not in `allowed`.
  void require_known(std::span<const std::string_view> allowed) const;

  friend bool operator==(const Config&, const Config&) = default;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

/// "a:b:step" (inclusive) or a comma list of orders.
std::vector<std::size_t> parse_grid(std::string_view text, std::string_view what);
/// "1-5,100" style index sets, returned ascending without duplicates.
std::vector<std::size_t> parse_index_set(std::string_view text, std::string_view what);
/// Comma list of doubles.
std::vector<double> parse_double_list(std::string_view text, std::string_view what);
std::size_t parse_size(std::string_view text, std::string_view what);

/// Kernel keys: kernel, alpha, width, h, v, g.
KernelSpec kernel_from_config(const Config& config);
/// Model keys: basis, pole, count, window, lambda, basis_seed.
MercerModel model_from_config(const Config& config);

}  // namespace srkhs
