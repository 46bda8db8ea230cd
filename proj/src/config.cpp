// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "srkhs/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "srkhs/error.hpp"

namespace srkhs {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(std::string_view key) {
  return !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config c;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('\n', start), text.size());
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (!valid_key(key)) {
      throw ConfigError("config line " + std::to_string(line_no) + ": invalid key '" + key + "'");
    }
    if (c.has(key)) throw ConfigError("config key '" + key + "' given twice");
    c.values_.emplace(key, trim(line.substr(eq + 1)));
    if (end == text.size()) break;
  }
  const auto schema = c.find("schema");
  if (!schema) throw ConfigError("config is missing 'schema = " + std::to_string(kConfigSchema) + "'");
  if (*schema != std::to_string(kConfigSchema)) {
    throw ConfigError("unsupported config schema '" + *schema + "'");
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string Config::serialize() const {
  std::string out = "schema = " + get_string("schema", std::to_string(kConfigSchema)) + "\n";
  for (const auto& [k, v] : values_) {
    if (k != "schema") out += k + " = " + v + "\n";
  }
  return out;
}

void Config::set(std::string key, std::string value) {
  if (!valid_key(key)) throw ConfigError("invalid config key '" + key + "'");
  if (value.find('\n') != std::string::npos) {
    throw ConfigError("config value for '" + key + "' contains a newline");
  }
  values_[std::move(key)] = std::string(trim(value));
}

bool Config::has(std::string_view key) const { return values_.find(key) != values_.end(); }

std::optional<std::string> Config::find(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_string(std::string_view key, std::string_view fallback) const {
  const auto v = find(key);
  return v ? *v : std::string(fallback);
}

double Config::get_double(std::string_view key, double fallback) const {
  const auto v = find(key);
  return v ? parse_double(*v, key) : fallback;
}

std::size_t Config::get_size(std::string_view key, std::size_t fallback) const {
  const auto v = find(key);
  return v ? parse_size(*v, key) : fallback;
}

std::optional<std::uint64_t> Config::get_seed() const {
  const auto v = find("seed");
  if (!v) return std::nullopt;
  std::uint64_t seed = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), seed);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    throw ConfigError("config field 'seed': expected a non-negative integer, got '" + *v + "'");
  }
  return seed;
}

void Config::require_known(std::span<const std::string_view> allowed) const {
  for (const auto& [k, v] : values_) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ConfigError("unknown config key '" + k + "'");
    }
  }
}

// ---------------------------------------------------------------------------

std::size_t parse_size(std::string_view text, std::string_view what) {
  text = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("config field '" + std::string(what) + "': expected a non-negative integer, got '" +
                      std::string(text) + "'");
  }
  return v;
}

std::vector<std::size_t> parse_grid(std::string_view text, std::string_view what) {
  std::vector<std::size_t> grid;
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const std::size_t lo = parse_size(parts[0], what), hi = parse_size(parts[1], what),
                      step = parse_size(parts[2], what);
    if (step == 0 || lo > hi) {
      throw ConfigError("config field '" + std::string(what) + "': range must be lo:hi:step with step > 0");
    }
    for (std::size_t d = lo; d <= hi; d += step) grid.push_back(d);
  } else if (parts.size() == 1) {
    for (auto p : split(text, ',')) grid.push_back(parse_size(p, what));
  } else {
    throw ConfigError("config field '" + std::string(what) + "': expected lo:hi:step or a comma list");
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] < 1 || (k > 0 && grid[k] <= grid[k - 1])) {
      throw ConfigError("config field '" + std::string(what) + "': orders must be >= 1 and ascending");
    }
  }
  return grid;
}

std::vector<std::size_t> parse_index_set(std::string_view text, std::string_view what) {
  std::vector<std::size_t> out;
  for (auto part : split(text, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(parse_size(part, what));
      continue;
    }
    const std::size_t lo = parse_size(part.substr(0, dash), what);
    const std::size_t hi = parse_size(part.substr(dash + 1), what);
    if (lo > hi) throw ConfigError("config field '" + std::string(what) + "': empty range");
    for (std::size_t i = lo; i <= hi; ++i) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (!out.empty() && out.front() < 1) {
    throw ConfigError("config field '" + std::string(what) + "': indices are 1-based");
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  for (auto p : split(text, ',')) out.push_back(parse_double(p, what));
  return out;
}

KernelSpec kernel_from_config(const Config& config) {
  const std::string family = config.get_string("kernel", "stable-spline");
  auto sequence = [&](std::string_view key) {
    const auto v = config.find(key);
    if (!v) throw ConfigError("kernel '" + family + "' needs config field '" + std::string(key) + "'");
    try {
      return Sequence::parse(*v);
    } catch (const ConfigError& e) {
      throw ConfigError("config field '" + std::string(key) + "': " + e.what());
    }
  };
  if (family == "stable-spline") return KernelSpec::stable_spline(config.get_double("alpha", 0.95));
  if (family == "gaussian") return KernelSpec::gaussian(config.get_double("width", 1.0));
  if (family == "translation-invariant") return KernelSpec::translation_invariant(sequence("h"));
  if (family == "rank-one") return KernelSpec::rank_one(sequence("v"));
  if (family == "diagonal") return KernelSpec::diagonal(sequence("g"));
  throw ConfigError("config field 'kernel': unknown family '" + family + "'");
}

MercerModel model_from_config(const Config& config) {
  const std::string kind = config.get_string("basis", "laguerre");
  const std::size_t count = config.get_size("count", 20);
  EigenLaw law = EigenLaw::power_law(4.0);
  if (const auto text = config.find("lambda")) {
    try {
      law = EigenLaw::parse(*text);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("config field 'lambda': ") + e.what());
    }
  }
  if (kind == "canonical") {
    return {OrthoBasis::canonical(count, config.get_size("window", count)), law};
  }
  if (kind == "laguerre") {
    const double pole = config.get_double("pole", 0.8);
    const std::size_t window = config.get_size("window", 400);
    return {OrthoBasis::laguerre(pole, count, window), law};
  }
  if (kind == "random") {
    const std::size_t window = config.get_size("window", 400);
    const std::uint64_t seed = config.get_size("basis_seed", 0);
    return {OrthoBasis::random_orthogonal(count, window, seed), law};
  }
  throw ConfigError("config field 'basis': unknown basis '" + kind + "'");
}

}  // namespace srkhs
