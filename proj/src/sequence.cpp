// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "srkhs/sequence.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "srkhs/error.hpp"

namespace srkhs {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("invalid number '" + std::string(text) + "' for " + std::string(what));
  }
  return out;
}

Sequence Sequence::power(double exponent) {
  if (!std::isfinite(exponent)) throw ConfigError("power exponent must be finite");
  return Sequence(Kind::Power, exponent, {});
}

Sequence Sequence::geometric(double ratio) {
  if (!std::isfinite(ratio)) throw ConfigError("geometric ratio must be finite");
  return Sequence(Kind::Geometric, ratio, {});
}

Sequence Sequence::constant(double value) {
  if (!std::isfinite(value)) throw ConfigError("constant must be finite");
  return Sequence(Kind::Constant, value, {});
}

Sequence Sequence::literal(std::vector<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("literal sequence entries must be finite");
  }
  return Sequence(Kind::Literal, 0.0, std::move(values));
}

Sequence Sequence::parse(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("sequence '" + std::string(text) + "' must look like name:parameters");
  }
  const auto name = trim(text.substr(0, colon));
  const auto args = trim(text.substr(colon + 1));
  if (name == "power") return power(parse_double(args, "power exponent"));
  if (name == "geometric") return geometric(parse_double(args, "geometric ratio"));
  if (name == "constant") return constant(parse_double(args, "constant value"));
  if (name == "literal") {
    std::vector<double> values;
    std::string_view rest = args;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      values.push_back(parse_double(rest.substr(0, comma), "literal entry"));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return literal(std::move(values));
  }
  throw ConfigError("unknown sequence generator '" + std::string(name) + "'");
}

double Sequence::operator()(std::size_t i) const {
  if (i < 1) throw DomainError("sequence index must be >= 1");
  const auto x = static_cast<double>(i);
  switch (kind_) {
    case Kind::Power:
      return std::pow(x, param_);
    case Kind::Geometric:
      return std::pow(param_, x);
    case Kind::Constant:
      return param_;
    case Kind::Literal:
      return i <= values_.size() ? values_[i - 1] : 0.0;
  }
  return 0.0;
}

std::optional<bool> Sequence::abs_summable() const {
  switch (kind_) {
    case Kind::Power:
      return param_ < -1.0;
    case Kind::Geometric:
      return std::abs(param_) < 1.0;
    case Kind::Constant:
      return param_ == 0.0;
    case Kind::Literal:
      return true;
  }
  return std::nullopt;
}

std::optional<bool> Sequence::square_summable() const {
  switch (kind_) {
    case Kind::Power:
      return param_ < -0.5;
    case Kind::Geometric:
      return std::abs(param_) < 1.0;
    case Kind::Constant:
      return param_ == 0.0;
    case Kind::Literal:
      return true;
  }
  return std::nullopt;
}

std::optional<double> Sequence::abs_sum() const {
  switch (kind_) {
    case Kind::Power:
      if (param_ < -1.0) return std::riemann_zeta(-param_);
      return std::nullopt;
    case Kind::Geometric: {
      const double r = std::abs(param_);
      if (r < 1.0) return r / (1.0 - r);
      return std::nullopt;
    }
    case Kind::Constant:
      if (param_ == 0.0) return 0.0;
      return std::nullopt;
    case Kind::Literal: {
      double s = 0.0;
      for (double v : values_) s += std::abs(v);
      return s;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> Sequence::support() const {
  if (kind_ == Kind::Literal) {
    std::size_t n = values_.size();
    while (n > 0 && values_[n - 1] == 0.0) --n;
    return n;
  }
  if ((kind_ == Kind::Constant || kind_ == Kind::Geometric) && param_ == 0.0) return 0;
  return std::nullopt;
}

std::string Sequence::to_string() const {
  switch (kind_) {
    case Kind::Power:
      return "power:" + format_double(param_);
    case Kind::Geometric:
      return "geometric:" + format_double(param_);
    case Kind::Constant:
      return "constant:" + format_double(param_);
    case Kind::Literal: {
      std::string out = "literal:";
      for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) out += ',';
        out += format_double(values_[i]);
      }
      return out;
    }
  }
  return {};
}

}  // namespace srkhs
