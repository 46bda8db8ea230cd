// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "srkhs/report.hpp"

#include <cmath>
#include <fstream>

#include "srkhs/error.hpp"

namespace srkhs {

namespace {

// JSON has no NaN or infinity; those become null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json numbers(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

Json to_json(const ProbeResult& p) {
  return {{"trend", to_string(p.trend)},
          {"rule", p.rule},
          {"increments", numbers(p.increments)},
          {"fitted_exponent", number(p.fitted_exponent)},
          {"last_relative_increment", number(p.last_relative_increment)},
          {"tail_estimate", number(p.tail_estimate)}};
}

Json to_json(const NormEstimate& e) {
  return {{"d", e.d},
          {"value", number(e.value)},
          {"kind", to_string(e.kind)},
          {"method", to_string(e.method)},
          {"downgraded", e.downgraded}};
}

Json to_json(const ClassFlags& f) {
  return {{"abs_summable", to_string(f.abs_summable())},
          {"stable", to_string(f.stable())},
          {"finite_trace", to_string(f.finite_trace())},
          {"sq_summable", to_string(f.sq_summable())}};
}

Json to_json(const StabilityReport& r) {
  Json tests = Json::array();
  for (const auto& t : r.tests) {
    Json j = {{"name", t.name}, {"analytic", t.analytic}, {"decision", t.decision}};
    if (!t.grid.empty()) j["grid"] = t.grid;
    if (!t.series.empty()) j["series"] = numbers(t.series);
    if (t.probe) j["probe"] = to_json(*t.probe);
    if (!t.norms.empty()) {
      Json n = Json::array();
      for (const auto& e : t.norms) n.push_back(to_json(e));
      j["norms"] = n;
    }
    tests.push_back(j);
  }
  return {{"kernel", r.kernel},
          {"verdict", to_string(r.verdict)},
          {"flags", to_json(r.flags)},
          {"tests", tests},
          {"notes", r.notes},
          {"budget_exhausted", r.budget_exhausted}};
}

Json to_json(const Eigen::VectorXd& v) {
  return numbers(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

Csv::Csv(std::vector<std::string> header) : width_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
  text_ += '\n';
}

Csv& Csv::row(std::span<const double> values) {
  std::vector<std::string> cells;
  for (double v : values) cells.push_back(format_double(v));
  return row(std::move(cells));
}

Csv& Csv::row(std::vector<std::string> cells) {
  if (cells.size() != width_) throw Error("CSV row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
  text_ += '\n';
  return *this;
}

void write_output(const std::filesystem::path& dir, std::string_view name,
                  std::string_view content) {
  const std::filesystem::path file(name);
  if (file.has_parent_path() || file.filename() != file || name == "." || name == "..") {
    throw Error("output name '" + std::string(name) + "' is not a plain file name");
  }
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / file, std::ios::binary);
  if (!out) throw ResourceError("cannot write " + (dir / file).string());
  out << content;
  if (!out) throw ResourceError("write failed for " + (dir / file).string());
}

}  // namespace srkhs
