// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "srkhs/stability.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "srkhs/error.hpp"
#include "srkhs/simd.hpp"

namespace srkhs {

namespace {

void require_order(std::size_t d) {
  if (d < 1) throw ConfigError("truncation order must be >= 1");
}

void require_ascending(std::span<const std::size_t> grid) {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] < 1) throw ConfigError("grid orders must be >= 1");
    if (k > 0 && grid[k] <= grid[k - 1]) throw ConfigError("grid must be strictly ascending");
  }
}

enum class SumKind { Abs, Square };

// Incremental double sums over growing leading windows. Column j contributes
// K(j,j) plus twice the strictly-upper part of column j.
std::vector<double> window_sums(const KernelSpec& spec, std::span<const std::size_t> grid,
                                SumKind kind) {
  require_ascending(grid);
  std::vector<double> out;
  out.reserve(grid.size());
  if (grid.empty()) return out;
  std::vector<double> column(grid.back());
  const auto& simd = simd::active();
  double total = 0.0;
  std::size_t done = 0;
  for (std::size_t target : grid) {
    for (std::size_t j = done + 1; j <= target; ++j) {
      for (std::size_t i = 1; i < j; ++i) column[i - 1] = spec.entry(i, j);
      const double diag = spec.entry(j, j);
      if (kind == SumKind::Abs) {
        total += std::abs(diag) + 2.0 * simd.abs_sum(column.data(), j - 1);
      } else {
        total += diag * diag + 2.0 * simd.sq_sum(column.data(), j - 1);
      }
    }
    done = target;
    out.push_back(total);
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Eigen::VectorXd as_vector(std::span<const int> u) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) v(static_cast<Eigen::Index>(i)) = u[i];
  return v;
}

}  // namespace

double partial_trace(const KernelSpec& spec, std::size_t d) {
  require_order(d);
  double s = 0.0;
  for (std::size_t i = 1; i <= d; ++i) s += spec.entry(i, i);
  return s;
}

double tail_trace(const KernelSpec& spec, std::size_t n, std::size_t d) {
  require_order(d);
  double s = 0.0;
  for (std::size_t i = n + 1; i <= d; ++i) s += spec.entry(i, i);
  return s;
}

double abs_sum_partial(const KernelSpec& spec, std::size_t d) {
  require_order(d);
  const std::size_t g[] = {d};
  return window_sums(spec, g, SumKind::Abs).front();
}

double sq_sum_partial(const KernelSpec& spec, std::size_t d) {
  require_order(d);
  const std::size_t g[] = {d};
  return window_sums(spec, g, SumKind::Square).front();
}

std::vector<double> trace_series(const KernelSpec& spec, std::span<const std::size_t> grid) {
  require_ascending(grid);
  std::vector<double> out;
  double s = 0.0;
  std::size_t done = 0;
  for (std::size_t target : grid) {
    for (std::size_t i = done + 1; i <= target; ++i) s += spec.entry(i, i);
    done = target;
    out.push_back(s);
  }
  return out;
}

std::vector<double> abs_sum_series(const KernelSpec& spec, std::span<const std::size_t> grid) {
  return window_sums(spec, grid, SumKind::Abs);
}

std::vector<double> sq_sum_series(const KernelSpec& spec, std::span<const std::size_t> grid) {
  return window_sums(spec, grid, SumKind::Square);
}

std::vector<std::size_t> geometric_grid(unsigned lo, unsigned hi) {
  if (lo > hi || hi > 40) throw ConfigError("geometric grid exponents out of range");
  std::vector<std::size_t> out;
  for (unsigned e = lo; e <= hi; ++e) out.push_back(std::size_t{1} << e);
  return out;
}

// ---------------------------------------------------------------------------

ProbeResult divergence_probe(std::span<const std::size_t> grid, std::span<const double> sums,
                             const ProbeThresholds& t) {
  if (sums.size() < 3) throw ConfigError("divergence probe needs at least 3 grid points");
  if (grid.size() != sums.size()) throw ConfigError("grid and partial sums differ in length");
  require_ascending(grid);

  ProbeResult r;
  const std::size_t m = sums.size() - 1;
  r.increments.resize(m);
  for (std::size_t k = 0; k < m; ++k) r.increments[k] = sums[k + 1] - sums[k];

  std::vector<double> mag(m);
  std::transform(r.increments.begin(), r.increments.end(), mag.begin(),
                 [](double v) { return std::abs(v); });
  const double last = mag.back();
  const double prev = mag[m - 2];
  const double total = std::abs(sums.back());
  r.last_relative_increment =
      total > 0.0 ? last / total : (last == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());

  r.tail_estimate = std::numeric_limits<double>::infinity();
  if (last == 0.0) {
    r.tail_estimate = 0.0;
  } else if (prev > 0.0 && last < prev) {
    const double ratio = last / prev;
    r.tail_estimate = last * ratio / (1.0 - ratio);
  }

  // Slope of log|increment| against log(grid end point) over the last (up to)
  // three increments, plus the local slopes between neighbours.
  const std::size_t window = std::min<std::size_t>(3, m);
  std::vector<double> xs, ys;
  for (std::size_t k = m - window; k < m; ++k) {
    if (mag[k] <= 0.0) break;
    xs.push_back(std::log(static_cast<double>(grid[k + 1])));
    ys.push_back(std::log(mag[k]));
  }
  r.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> local;
  if (xs.size() == window && window >= 2) {
    const double xm = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double ym = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sxy += (xs[k] - xm) * (ys[k] - ym);
      sxx += (xs[k] - xm) * (xs[k] - xm);
    }
    r.fitted_exponent = sxy / sxx;
    for (std::size_t k = 1; k < xs.size(); ++k) {
      local.push_back((ys[k] - ys[k - 1]) / (xs[k] - xs[k - 1]));
    }
  }

  if (last == 0.0 && prev == 0.0) {
    r.trend = Trend::Converging;
    r.rule = "stationary";
    return r;
  }
  if (last <= t.rtol * total && last <= prev) {
    r.trend = Trend::Converging;
    r.rule = "rtol";
    return r;
  }
  bool non_decreasing = last > 0.0;
  for (std::size_t k = m - window + 1; k < m; ++k) non_decreasing &= mag[k] >= mag[k - 1];
  if (non_decreasing) {
    r.trend = Trend::Diverging;
    r.rule = "non-decreasing";
    return r;
  }
  if (!std::isnan(r.fitted_exponent)) {
    if (r.fitted_exponent >= t.diverge_exponent) {
      r.trend = Trend::Diverging;
      r.rule = "power-growth";
      return r;
    }
    const bool steady = std::all_of(local.begin(), local.end(),
                                    [&](double e) { return e <= t.converge_exponent; });
    if (r.fitted_exponent <= t.converge_exponent && steady) {
      r.trend = Trend::Converging;
      r.rule = "power-tail";
      return r;
    }
  }
  r.trend = Trend::Undecided;
  r.rule = "none";
  return r;
}

// ---------------------------------------------------------------------------

double sign_quadratic_form(const TruncatedKernel& k, std::span<const int> u) {
  const std::size_t d = k.order();
  if (u.size() != d) throw ConfigError("sign vector length does not match the kernel order");
  double q = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += k(i, j) * u[j];
    q += u[i] * row;
  }
  return q;
}

NormEstimate inf_one_norm_exact(const TruncatedKernel& k, std::size_t cap) {
  const std::size_t d = k.order();
  if (d == 0) throw ConfigError("empty kernel");
  if (d > cap || d > 62) {
    throw ConfigError("d=" + std::to_string(d) + " exceeds the enumeration cap " +
                      std::to_string(cap) + "; use inf_one_norm_heuristic");
  }
  if (!validate_psd(k).psd) {
    throw StructuralError("exact (inf,1) norm via sign quadratic forms requires a PSD kernel");
  }
  const auto& simd = simd::active();
  const Eigen::MatrixXd& m = k.entries;

  std::vector<int> u(d, 1);
  Eigen::VectorXd s = m * Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d));
  double q = s.sum();
  double best = q;
  std::uint64_t best_code = 0;

  // Periodic exact recomputation bounds drift of the running state.
  constexpr std::uint64_t kResyncMask = (std::uint64_t{1} << 14) - 1;
  const std::uint64_t steps = std::uint64_t{1} << (d - 1);
  for (std::uint64_t g = 1; g < steps; ++g) {
    const auto p = static_cast<std::size_t>(1 + std::countr_zero(g));
    const auto pi = static_cast<Eigen::Index>(p);
    const double delta = -2.0 * u[p];
    q += 2.0 * delta * s(pi) + 4.0 * m(pi, pi);
    simd.axpy(delta, m.col(pi).data(), s.data(), d);
    u[p] = -u[p];
    if ((g & kResyncMask) == 0) {
      const Eigen::VectorXd uv = as_vector(u);
      s = m * uv;
      q = uv.dot(s);
    }
    if (q > best) {
      best = q;
      best_code = g ^ (g >> 1);
    }
  }

  NormEstimate out;
  out.kind = BoundKind::Exact;
  out.method = NormMethod::GrayCodeEnumeration;
  out.d = d;
  out.witness.assign(d, 1);
  for (std::size_t b = 0; b + 1 < d; ++b) {
    if ((best_code >> b) & 1U) out.witness[b + 1] = -1;
  }
  out.value = sign_quadratic_form(k, out.witness);
  return out;
}

double sign_flip_ascent(const TruncatedKernel& k, std::vector<int>& u) {
  const std::size_t d = k.order();
  if (u.size() != d) throw ConfigError("sign vector length does not match the kernel order");
  const auto& simd = simd::active();
  const Eigen::MatrixXd& m = k.entries;
  Eigen::VectorXd s = m * as_vector(u);
  double q = 0.0;
  for (std::size_t i = 0; i < d; ++i) q += u[i] * s(static_cast<Eigen::Index>(i));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (;;) {
    bool improved = false;
    for (std::size_t p = 0; p < d; ++p) {
      const auto pi = static_cast<Eigen::Index>(p);
      const double gain = 4.0 * (m(pi, pi) - u[p] * s(pi));
      const double tol = 64.0 * eps * (std::abs(q) + 4.0 * std::abs(m(pi, pi)) + 4.0 * std::abs(s(pi)));
      if (gain > tol) {
        simd.axpy(-2.0 * u[p], m.col(pi).data(), s.data(), d);
        u[p] = -u[p];
        q += gain;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return sign_quadratic_form(k, u);
}

std::vector<int> restart_signs(std::size_t d, std::uint64_t seed, std::size_t restart) {
  std::vector<int> u(d, 1);
  if (restart > 0) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(restart)));
    for (auto& x : u) x = (rng() & 1U) ? 1 : -1;
  }
  return u;
}

NormEstimate inf_one_norm_heuristic(const TruncatedKernel& k, std::size_t restarts,
                                    std::uint64_t seed) {
  const std::size_t d = k.order();
  if (d == 0) throw ConfigError("empty kernel");
  restarts = std::max<std::size_t>(restarts, 1);
  NormEstimate out;
  out.kind = BoundKind::LowerBound;
  out.method = NormMethod::SignFlipAscent;
  out.d = d;
  out.value = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<int> u = restart_signs(d, seed, r);
    const double v = sign_flip_ascent(k, u);
    if (v > out.value) {
      out.value = v;
      out.witness = std::move(u);
    }
  }
  return out;
}

NormEstimate trace_lower_bound(const TruncatedKernel& k) {
  return {k.entries.trace(), BoundKind::LowerBound, k.order(), NormMethod::TraceSandwich, {}, false};
}

NormEstimate trace_sandwich_upper_bound(const TruncatedKernel& k) {
  const double scale = std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(k.order(), 1023)));
  return {scale * k.entries.trace(), BoundKind::UpperBound, k.order(), NormMethod::TraceSandwich,
          {}, false};
}

NormEstimate abs_sum_upper_bound(const TruncatedKernel& k) {
  return {k.entries.cwiseAbs().sum(), BoundKind::UpperBound, k.order(), NormMethod::AbsSumBound,
          {}, false};
}

std::vector<NormEstimate> norm_growth_scan(const KernelSpec& spec,
                                           std::span<const std::size_t> grid,
                                           const NormScanOptions& options) {
  require_ascending(grid);
  std::vector<NormEstimate> out;
  out.reserve(grid.size());
  for (std::size_t d : grid) {
    const TruncatedKernel k = truncate(spec, d);
    NormEstimate e;
    if (options.method == ScanMethod::Exact && d <= options.cap) {
      e = inf_one_norm_exact(k, options.cap);
    } else {
      e = inf_one_norm_heuristic(k, options.restarts, options.seed);
      e.downgraded = options.method == ScanMethod::Exact;
    }
    if (!out.empty() && e.kind == BoundKind::Exact && out.back().kind == BoundKind::Exact) {
      const double prev = out.back().value;
      if (e.value < prev - 1e-12 * std::max(1.0, std::abs(prev))) {
        throw NumericalError("exact norm sequence decreased between d=" +
                             std::to_string(out.back().d) + " and d=" + std::to_string(d));
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------

ClassFlags ClassFlags::make(Tri abs_summable, Tri stable, Tri finite_trace, Tri sq_summable) {
  Tri f[4] = {abs_summable, stable, finite_trace, sq_summable};
  static const char* names[4] = {"abs_summable", "stable", "finite_trace", "sq_summable"};
  auto clash = [&](int i, int j) {
    throw NumericalError(std::string("class flags contradict the inclusion chain: ") + names[i] +
                         "=" + to_string(f[i]) + " but " + names[j] + "=" + to_string(f[j]));
  };
  for (int i = 0; i < 4; ++i) {
    if (f[i] != Tri::Yes) continue;
    for (int j = i + 1; j < 4; ++j) {
      if (f[j] == Tri::No) clash(i, j);
      f[j] = Tri::Yes;
    }
  }
  for (int i = 3; i >= 0; --i) {
    if (f[i] != Tri::No) continue;
    for (int j = i - 1; j >= 0; --j) {
      if (f[j] == Tri::Yes) clash(i, j);
      f[j] = Tri::No;
    }
  }
  ClassFlags out;
  out.abs_ = f[0];
  out.stable_ = f[1];
  out.ft_ = f[2];
  out.sq_ = f[3];
  return out;
}

namespace {

Tri from_optional(std::optional<bool> b) {
  if (!b) return Tri::Unknown;
  return *b ? Tri::Yes : Tri::No;
}

Tri from_trend(Trend t) {
  switch (t) {
    case Trend::Converging:
      return Tri::Yes;
    case Trend::Diverging:
      return Tri::No;
    case Trend::Undecided:
      return Tri::Unknown;
  }
  return Tri::Unknown;
}

class Battery {
 public:
  Battery(const KernelSpec& spec, const ClassifyBudget& budget) : spec_(spec), budget_(budget) {
    report_.kernel = spec.describe();
    for (std::size_t d : budget.sum_grid) {
      if (!spec.window() || d <= *spec.window()) sum_grid_.push_back(d);
    }
    for (std::size_t d : budget.norm_grid) {
      if (!spec.window() || d <= *spec.window()) norm_grid_.push_back(d);
    }
  }

  StabilityReport run();

 private:
  bool afford(double cost) {
    if (spent_ + cost > budget_.max_work) {
      report_.budget_exhausted = true;
      report_.notes.push_back("work budget exhausted before the next test");
      return false;
    }
    spent_ += cost;
    return true;
  }

  double window_cost() const {
    const double n = sum_grid_.empty() ? 0.0 : static_cast<double>(sum_grid_.back());
    return 0.5 * n * n;
  }

  double norm_cost() const {
    double c = 0.0;
    for (std::size_t d : norm_grid_) {
      const double dd = static_cast<double>(d);
      if (d <= budget_.enumeration_cap) {
        c += std::ldexp(1.0, static_cast<int>(d) - 1) * dd;
      } else {
        c += static_cast<double>(budget_.restarts) * 4.0 * dd * dd * dd;
      }
    }
    return c;
  }

  std::optional<Trend> series_test(const std::string& name,
                                   std::vector<double> (*series)(const KernelSpec&,
                                                                 std::span<const std::size_t>),
                                   double cost) {
    if (sum_grid_.size() < 3) {
      report_.notes.push_back(name + " skipped: fewer than 3 grid points inside the window");
      return std::nullopt;
    }
    if (!afford(cost)) return std::nullopt;
    TestRecord rec;
    rec.name = name;
    rec.grid = sum_grid_;
    rec.series = series(spec_, sum_grid_);
    rec.probe = divergence_probe(rec.grid, rec.series);
    rec.decision = to_string(rec.probe->trend) + " (" + rec.probe->rule + ", evidence)";
    const Trend t = rec.probe->trend;
    report_.tests.push_back(std::move(rec));
    return t;
  }

  std::optional<Trend> norm_test() {
    if (norm_grid_.size() < 3) {
      report_.notes.push_back("norm scan skipped: fewer than 3 grid points inside the window");
      return std::nullopt;
    }
    if (!afford(norm_cost())) return std::nullopt;
    NormScanOptions opt;
    opt.method = ScanMethod::Exact;
    opt.cap = budget_.enumeration_cap;
    opt.restarts = budget_.restarts;
    opt.seed = budget_.seed;
    TestRecord rec;
    rec.name = "norm_scan";
    rec.grid = norm_grid_;
    rec.norms = norm_growth_scan(spec_, norm_grid_, opt);
    for (const auto& e : rec.norms) rec.series.push_back(e.value);
    // Heuristic values are lower bounds; a running maximum keeps the evidence
    // sequence monotone as the true norms are.
    std::vector<double> envelope = rec.series;
    for (std::size_t k = 1; k < envelope.size(); ++k) {
      envelope[k] = std::max(envelope[k], envelope[k - 1]);
    }
    rec.probe = divergence_probe(rec.grid, envelope);
    rec.decision = to_string(rec.probe->trend) + " (" + rec.probe->rule + ", evidence)";
    const Trend t = rec.probe->trend;
    report_.tests.push_back(std::move(rec));
    return t;
  }

  void analytic(std::string name, std::string decision) {
    TestRecord rec;
    rec.name = std::move(name);
    rec.analytic = true;
    rec.decision = std::move(decision);
    report_.tests.push_back(std::move(rec));
  }

  void check_agreement(std::optional<Trend> evidence, Tri analytic_flag, const std::string& what) {
    if (!evidence || analytic_flag == Tri::Unknown) return;
    const Tri e = from_trend(*evidence);
    if (e != Tri::Unknown && e != analytic_flag) {
      report_.notes.push_back(what + ": finite-window evidence (" + to_string(*evidence) +
                              ") disagrees with the closed-form classification");
    }
  }

  bool psd_sanity() {
    std::size_t d = 64;
    if (spec_.window()) d = std::min(d, *spec_.window());
    const auto check = validate_psd(truncate(spec_, d));
    if (!check.psd) {
      report_.verdict = Verdict::Inconclusive;
      report_.notes.push_back("truncation of order " + std::to_string(d) +
                              " is not PSD (min eigenvalue " + format_double(check.min_eigenvalue) +
                              "); not a valid kernel");
      return false;
    }
    return true;
  }

  void evidence_route();

  const KernelSpec& spec_;
  const ClassifyBudget& budget_;
  std::vector<std::size_t> sum_grid_;
  std::vector<std::size_t> norm_grid_;
  StabilityReport report_;
  double spent_ = 0.0;
};

void Battery::evidence_route() {
  auto& flags = report_.flags;
  const auto trace = series_test("trace", &trace_series, static_cast<double>(sum_grid_.empty() ? 0 : sum_grid_.back()));
  if (trace) flags = flags.with_finite_trace(from_trend(*trace));
  if (flags.finite_trace() == Tri::No) {
    report_.verdict = Verdict::EvidenceUnstable;
    report_.notes.push_back("diverging trace rules out stability");
    return;
  }
  const auto sq = series_test("sq_sum", &sq_sum_series, window_cost());
  if (sq) flags = flags.with_sq_summable(from_trend(*sq));
  if (flags.sq_summable() == Tri::No) {
    report_.verdict = Verdict::EvidenceUnstable;
    return;
  }
  const auto abs = series_test("abs_sum", &abs_sum_series, window_cost());
  if (abs) flags = flags.with_abs_summable(from_trend(*abs));
  if (flags.abs_summable() == Tri::Yes) {
    report_.verdict = Verdict::EvidenceStable;
    return;
  }
  if (flags.abs_summable() == Tri::No) {
    report_.notes.push_back(
        "absolute summability fails; that alone does not decide stability, running the norm scan");
  }
  const auto norm = norm_test();
  if (norm) flags = flags.with_stable(from_trend(*norm));
  if (flags.stable() == Tri::Yes) {
    report_.verdict = Verdict::EvidenceStable;
  } else if (flags.stable() == Tri::No) {
    report_.verdict = Verdict::EvidenceUnstable;
  } else {
    report_.verdict = Verdict::Inconclusive;
  }
}

StabilityReport Battery::run() {
  auto& flags = report_.flags;
  const double trace_cost = static_cast<double>(sum_grid_.empty() ? 0 : sum_grid_.back());
  const auto& fam = spec_.family();

  if (const auto* ss = std::get_if<family::StableSpline>(&fam); ss && ss->alpha == 0.0) {
    flags = ClassFlags::make(Tri::Yes, Tri::Yes, Tri::Yes, Tri::Yes);
    analytic("zero_kernel", "alpha = 0 gives the zero kernel");
    report_.verdict = Verdict::AnalyticallyStable;
    return std::move(report_);
  }

  const bool translation = std::holds_alternative<family::Gaussian>(fam) ||
                           std::holds_alternative<family::TranslationInvariant>(fam);
  if (translation) {
    if (!psd_sanity()) return std::move(report_);
    const double h0 = spec_.entry(1, 1);
    if (h0 == 0.0) {
      flags = ClassFlags::make(Tri::Yes, Tri::Yes, Tri::Yes, Tri::Yes);
      analytic("zero_kernel", "h(0) = 0 forces h = 0 for a PSD translation-invariant kernel");
      report_.verdict = Verdict::AnalyticallyStable;
      return std::move(report_);
    }
    flags = ClassFlags::make(Tri::Unknown, Tri::Unknown, Tri::No, Tri::No);
    analytic("trace_analytic", "trace = sum_i h(0) diverges since h(0) = " + format_double(h0) +
                                   " != 0; translation-invariant kernels are never finite-trace");
    check_agreement(series_test("trace", &trace_series, trace_cost), Tri::No, "trace");
    report_.verdict = Verdict::AnalyticallyUnstable;
    return std::move(report_);
  }

  if (const auto* d = std::get_if<family::Diagonal>(&fam)) {
    const Tri summable = from_optional(d->g.abs_summable());
    if (summable != Tri::Unknown) {
      const Tri sq = from_optional(d->g.square_summable());
      std::string why = "canonical basis has ||e_i||_1 = 1, so stability <=> sum g_i < inf";
      if (const auto s = d->g.abs_sum()) why += "; sum g_i = " + format_double(*s);
      else why += "; sum g_i diverges for " + d->g.to_string();
      analytic("bounded_l1_route", why);
      flags = summable == Tri::Yes ? ClassFlags::make(Tri::Yes, Tri::Yes, Tri::Yes, Tri::Yes)
                                   : ClassFlags::make(Tri::No, Tri::No, Tri::No, sq);
      check_agreement(series_test("trace", &trace_series, trace_cost), summable, "trace");
      report_.verdict =
          summable == Tri::Yes ? Verdict::AnalyticallyStable : Verdict::AnalyticallyUnstable;
      return std::move(report_);
    }
  }

  if (const auto* r1 = std::get_if<family::RankOne>(&fam)) {
    const Tri l1 = from_optional(r1->v.abs_summable());
    const Tri l2 = from_optional(r1->v.square_summable());
    if (l1 != Tri::Unknown && l2 != Tri::Unknown) {
      analytic("rank_one_analytic",
               "K = v v^T: trace = ||v||_2^2 (finite_trace=" + to_string(l2) +
                   "), ||K||_(inf,1) = ||v||_1^2 attained at u = sign(v) (stable=" +
                   to_string(l1) + ")");
      flags = ClassFlags::make(l1, l1, l2, l2);
      check_agreement(series_test("trace", &trace_series, trace_cost), l2, "trace");
      check_agreement(norm_test(), l1, "norm_scan");
      report_.verdict = l1 == Tri::Yes ? Verdict::AnalyticallyStable : Verdict::AnalyticallyUnstable;
      return std::move(report_);
    }
  }

  if (!psd_sanity()) return std::move(report_);
  evidence_route();
  return std::move(report_);
}

}  // namespace

StabilityReport classify(const KernelSpec& spec, const ClassifyBudget& budget) {
  require_ascending(budget.sum_grid);
  require_ascending(budget.norm_grid);
  Battery battery(spec, budget);
  StabilityReport report = battery.run();
  if (report.budget_exhausted && report.verdict != Verdict::AnalyticallyStable &&
      report.verdict != Verdict::AnalyticallyUnstable && report.verdict != Verdict::EvidenceStable &&
      report.verdict != Verdict::EvidenceUnstable) {
    report.verdict = Verdict::Inconclusive;
  }
  return report;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ProvenUnstable: return "ProvenUnstable";
    case Verdict::EvidenceStable: return "EvidenceStable";
    case Verdict::EvidenceUnstable: return "EvidenceUnstable";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::AnalyticallyStable: return "AnalyticallyStable";
    case Verdict::AnalyticallyUnstable: return "AnalyticallyUnstable";
  }
  return "?";
}

std::string to_string(Tri t) {
  switch (t) {
    case Tri::Unknown: return "unknown";
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
  }
  return "?";
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::Converging: return "Converging";
    case Trend::Diverging: return "Diverging";
    case Trend::Undecided: return "Undecided";
  }
  return "?";
}

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::Exact: return "Exact";
    case BoundKind::LowerBound: return "LowerBound";
    case BoundKind::UpperBound: return "UpperBound";
  }
  return "?";
}

std::string to_string(NormMethod m) {
  switch (m) {
    case NormMethod::GrayCodeEnumeration: return "GrayCodeEnumeration";
    case NormMethod::SignFlipAscent: return "SignFlipAscent";
    case NormMethod::TraceSandwich: return "TraceSandwich";
    case NormMethod::AbsSumBound: return "AbsSumBound";
  }
  return "?";
}

}  // namespace srkhs
