// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "srkhs/stability.hpp"

namespace srkhs {

using Json = nlohmann::json;

Json to_json(const ProbeResult& p);
Json to_json(const NormEstimate& e);
Json to_json(const ClassFlags& f);
Json to_json(const StabilityReport& r);
Json to_json(const Eigen::VectorXd& v);

/// Small CSV builder; numbers use the shortest round-trip form.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  Csv& row(std::span<const double> values);
  Csv& row(std::vector<std::string> cells);
  const std::string& str() const { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

/// Writes `content` to dir/name; `name` must be a plain file name.
void write_output(const std::filesystem::path& dir, std::string_view name, std::string_view content);

}  // namespace srkhs
