// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srkhs/kernel.hpp"

namespace srkhs {

// ---------------------------------------------------------------------------
// Partial sums

double partial_trace(const KernelSpec& spec, std::size_t d);
/// sum_{i=n+1}^{d} K(i,i)
double tail_trace(const KernelSpec& spec, std::size_t n, std::size_t d);
/// sum_{i,j<=d} |K(i,j)|
double abs_sum_partial(const KernelSpec& spec, std::size_t d);
/// sum_{i,j<=d} K(i,j)^2
double sq_sum_partial(const KernelSpec& spec, std::size_t d);

/// The same sums over an ascending grid, computed incrementally.
std::vector<double> trace_series(const KernelSpec& spec, std::span<const std::size_t> grid);
std::vector<double> abs_sum_series(const KernelSpec& spec, std::span<const std::size_t> grid);
std::vector<double> sq_sum_series(const KernelSpec& spec, std::span<const std::size_t> grid);

/// 2^lo, 2^(lo+1), ..., 2^hi
std::vector<std::size_t> geometric_grid(unsigned lo, unsigned hi);

// ---------------------------------------------------------------------------
// Divergence probe

enum class Trend { Converging, Diverging, Undecided };

struct ProbeResult {
  Trend trend = Trend::Undecided;
  /// Which decision rule fired: "stationary", "rtol", "power-tail",
  /// "non-decreasing", "power-growth" or "none".
  std::string rule;
  std::vector<double> increments;
  /// Least-squares slope of log|increment| against log(grid) over the last
  /// three increments; NaN when undefined.
  double fitted_exponent;
  double last_relative_increment;
  /// Geometric extrapolation of the remaining tail when the increments shrink.
  double tail_estimate;
};

struct ProbeThresholds {
  double rtol = 1e-8;
  /// Increments decaying at least like grid^converge_exponent are treated as
  /// a convergent power tail.
  double converge_exponent = -0.5;
  double diverge_exponent = 0.0;
};

/// Evidence-only trend classification of partial sums on an ascending grid.
/// Throws ConfigError for fewer than three grid points.
ProbeResult divergence_probe(std::span<const std::size_t> grid, std::span<const double> sums,
                             const ProbeThresholds& thresholds = {});

// ---------------------------------------------------------------------------
// (inf,1) operator norm

inline constexpr std::size_t kDefaultEnumerationCap = 28;

enum class BoundKind { Exact, LowerBound, UpperBound };
enum class NormMethod { GrayCodeEnumeration, SignFlipAscent, TraceSandwich, AbsSumBound };

struct NormEstimate {
  double value = 0.0;
  BoundKind kind = BoundKind::Exact;
  std::size_t d = 0;
  NormMethod method = NormMethod::GrayCodeEnumeration;
  /// Maximizing sign vector (entries +1/-1) for the sign-vector methods.
  std::vector<int> witness;
  /// Set when an Exact request was served by the heuristic.
  bool downgraded = false;
};

/// max over u in {+-1}^d of u^T K u, by Gray-code enumeration with u_1 = +1.
/// Throws ConfigError if d > cap and StructuralError if K is not PSD.
NormEstimate inf_one_norm_exact(const TruncatedKernel& k,
                                std::size_t cap = kDefaultEnumerationCap);

/// Best-of-restarts first-improvement sign-flip ascent on u^T K u. Restart 0
/// starts from all ones; restart r > 0 from signs drawn with a per-restart seed.
NormEstimate inf_one_norm_heuristic(const TruncatedKernel& k, std::size_t restarts,
                                    std::uint64_t seed);

NormEstimate trace_lower_bound(const TruncatedKernel& k);
/// 2^d tr(K)
NormEstimate trace_sandwich_upper_bound(const TruncatedKernel& k);
/// sum |K(i,j)|
NormEstimate abs_sum_upper_bound(const TruncatedKernel& k);

/// Starting signs for restart r of the sign-flip ascent: all ones for r = 0,
/// otherwise drawn from a generator seeded by (seed, r).
std::vector<int> restart_signs(std::size_t d, std::uint64_t seed, std::size_t restart);

/// u^T K u, evaluated directly.
double sign_quadratic_form(const TruncatedKernel& k, std::span<const int> u);

/// Local ascent from `start` (modified in place); returns the final form value.
double sign_flip_ascent(const TruncatedKernel& k, std::vector<int>& u);

enum class ScanMethod { Exact, Heuristic };

struct NormScanOptions {
  ScanMethod method = ScanMethod::Exact;
  std::size_t cap = kDefaultEnumerationCap;
  std::size_t restarts = 16;
  std::uint64_t seed = 0;
};

/// Norm estimates on an ascending grid. Exact requests beyond the cap fall
/// back to the heuristic with `downgraded` set. Exact sequences are checked
/// to be non-decreasing (NumericalError otherwise).
std::vector<NormEstimate> norm_growth_scan(const KernelSpec& spec,
                                           std::span<const std::size_t> grid,
                                           const NormScanOptions& options = {});

// ---------------------------------------------------------------------------
// Classification

enum class Verdict {
  ProvenUnstable,
  EvidenceStable,
  EvidenceUnstable,
  Inconclusive,
  AnalyticallyStable,
  AnalyticallyUnstable,
};

enum class Tri { Unknown, Yes, No };

/// Membership in S_1 (abs_summable), S_s (stable), S_ft and S_2.
/// Construction closes the flags under S_1 < S_s < S_ft < S_2 and throws
/// NumericalError on a contradiction.
class ClassFlags {
 public:
  ClassFlags() = default;
  static ClassFlags make(Tri abs_summable, Tri stable, Tri finite_trace, Tri sq_summable);

  Tri abs_summable() const { return abs_; }
  Tri stable() const { return stable_; }
  Tri finite_trace() const { return ft_; }
  Tri sq_summable() const { return sq_; }

  /// Returns a copy with one more fact merged in.
  ClassFlags with_abs_summable(Tri v) const { return make(v, stable_, ft_, sq_); }
  ClassFlags with_stable(Tri v) const { return make(abs_, v, ft_, sq_); }
  ClassFlags with_finite_trace(Tri v) const { return make(abs_, stable_, v, sq_); }
  ClassFlags with_sq_summable(Tri v) const { return make(abs_, stable_, ft_, v); }

  friend bool operator==(const ClassFlags&, const ClassFlags&) = default;

 private:
  Tri abs_ = Tri::Unknown;
  Tri stable_ = Tri::Unknown;
  Tri ft_ = Tri::Unknown;
  Tri sq_ = Tri::Unknown;
};

struct TestRecord {
  std::string name;
  std::vector<std::size_t> grid;
  std::vector<double> series;
  std::optional<ProbeResult> probe;
  std::vector<NormEstimate> norms;
  bool analytic = false;
  std::string decision;
};

struct StabilityReport {
  std::string kernel;
  Verdict verdict = Verdict::Inconclusive;
  ClassFlags flags;
  std::vector<TestRecord> tests;
  std::vector<std::string> notes;
  bool budget_exhausted = false;
};

struct ClassifyBudget {
  std::vector<std::size_t> sum_grid = geometric_grid(4, 12);
  std::vector<std::size_t> norm_grid = geometric_grid(2, 8);
  std::size_t enumeration_cap = 20;
  std::size_t restarts = 8;
  std::uint64_t seed = 0;
  /// Work units (roughly entry evaluations and flop counts) the battery may spend.
  double max_work = 5e9;
};

/// Runs trace -> square/absolute sums -> norm scan, with analytic shortcuts
/// for families whose class membership is decidable in closed form.
StabilityReport classify(const KernelSpec& spec, const ClassifyBudget& budget = {});

std::string to_string(Verdict v);
std::string to_string(Tri t);
std::string to_string(Trend t);
std::string to_string(BoundKind k);
std::string to_string(NormMethod m);

}  // namespace srkhs
