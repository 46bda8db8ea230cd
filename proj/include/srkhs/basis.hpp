// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "srkhs/kernel.hpp"
#include "srkhs/stability.hpp"

namespace srkhs {

inline constexpr double kOrthonormalityTolerance = 1e-8;
/// Laguerre windows must satisfy |a|^T below this.
inline constexpr double kLaguerreTailTolerance = 1e-12;

enum class BasisKind { Canonical, Laguerre, RandomOrthogonal, Literal };

/// Orthonormal l2 sequences materialized on a window 1..T.
class OrthoBasis {
 public:
  static OrthoBasis canonical(std::size_t count, std::size_t window);
  static OrthoBasis laguerre(double pole, std::size_t count, std::size_t window);
  static OrthoBasis random_orthogonal(std::size_t count, std::size_t window, std::uint64_t seed);
  /// Columns are the basis vectors; rejected if the Gram matrix deviates
  /// from the identity by more than kOrthonormalityTolerance.
  static OrthoBasis from_columns(Eigen::MatrixXd columns);

  BasisKind kind() const { return kind_; }
  double pole() const { return pole_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return static_cast<std::size_t>(vectors_.cols()); }
  std::size_t window() const { return static_cast<std::size_t>(vectors_.rows()); }

  /// rho_i, 1-based.
  auto vector(std::size_t i) const { return vectors_.col(static_cast<Eigen::Index>(i - 1)); }
  /// rho_i(x), both 1-based; zero outside the window.
  double value(std::size_t i, std::size_t x) const;
  const Eigen::MatrixXd& matrix() const { return vectors_; }

  /// max |G - I| over all materialized pairs.
  double gram_deviation() const;
  /// True when every vector vanishes identically past index `count` of its
  /// window (canonical and pole-zero Laguerre bases).
  bool has_canonical_support() const;

  std::string describe() const;

 private:
  OrthoBasis(BasisKind kind, double pole, std::uint64_t seed, Eigen::MatrixXd vectors)
      : kind_(kind), pole_(pole), seed_(seed), vectors_(std::move(vectors)) {}

  BasisKind kind_;
  double pole_ = 0.0;
  std::uint64_t seed_ = 0;
  Eigen::MatrixXd vectors_;
};

/// Smallest T with |a|^T < kLaguerreTailTolerance.
std::size_t minimal_laguerre_window(double pole);

/// Smallest window of the form minimal * 2^k (and at least count) on which
/// the first `count` Laguerre functions pass the orthonormality check.
std::size_t orthonormal_laguerre_window(double pole, std::size_t count);

/// rho_1(t) = sqrt(1-a^2) a^(t-1); rho_{k+1} is rho_k through the all-pass
/// section y(t) = a y(t-1) + x(t-1) - a x(t).
OrthoBasis laguerre_basis(double pole, std::size_t count, std::size_t window);

struct L1Profile {
  std::vector<double> norms;
  /// max_i ||rho_i||_1 / i
  double linear_constant;
  /// max_i ||rho_i||_1
  double uniform_bound;
  /// Least-squares slope of log ||rho_i||_1 against log i.
  double growth_exponent;
};

L1Profile l1_profile(const OrthoBasis& basis, std::size_t count);

/// Eigenvalue decay law: lambda_i = i^-nu, beta^i, or a literal list.
class EigenLaw {
 public:
  enum class Kind { PowerLaw, Geometric, Literal };

  static EigenLaw power_law(double nu);
  static EigenLaw geometric(double beta);
  static EigenLaw literal(std::vector<double> values);
  /// "power:nu", "geometric:beta", "literal:a,b,c"
  static EigenLaw parse(std::string_view text);

  double operator()(std::size_t i) const;
  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  bool summable() const;
  /// sum_{i>n} lambda_i; +inf when not summable.
  double tail_sum(std::size_t n) const;
  std::string to_string() const;

 private:
  EigenLaw(Kind kind, double param, std::vector<double> values)
      : kind_(kind), param_(param), values_(std::move(values)) {}

  Kind kind_;
  double param_;
  std::vector<double> values_;
};

/// K(x,y) = sum_i lambda_i rho_i(x) rho_i(y) over the materialized basis.
struct MercerModel {
  OrthoBasis basis;
  EigenLaw eigenvalues;

  std::string describe() const;
};

struct SynthesizedKernel {
  TruncatedKernel kernel;
  /// Entrywise bound on the dropped series terms, sum_{i>n} lambda_i
  /// (zero when the basis support makes them vanish on the window).
  double residual_bound;
  std::size_t terms;
};

/// Throws ConfigError if d exceeds the window or the dropped tail is infinite.
SynthesizedKernel synthesize_kernel(const MercerModel& model, std::size_t d);

/// Registers the model as a KernelSpec evaluable on the basis window.
KernelSpec as_kernel_spec(const MercerModel& model);

enum class Certification { Certified, NotCertified };

struct SufficientTestResult {
  Certification certification;
  std::vector<std::size_t> grid;
  /// sum_{i<=n} lambda_i ||rho_i||_1^2
  std::vector<double> partial_sums;
  ProbeResult probe;
};

/// Sufficient condition sum_i lambda_i ||rho_i||_1^2 < inf, judged on the
/// materialized basis.
SufficientTestResult sufficient_stability_test(const MercerModel& model);

enum class BoundedL1Verdict { Stable, Unstable, Undecided, Inapplicable };

struct BoundedL1Result {
  BoundedL1Verdict verdict;
  double observed_bound;
  std::vector<std::size_t> grid;
  std::vector<double> partial_sums;
  std::optional<ProbeResult> probe;
};

/// For bases with ||rho_i||_1 <= A whenever lambda_i > 0, stability is
/// equivalent to sum_i lambda_i < inf.
BoundedL1Result bounded_l1_test(const MercerModel& model, double bound);

struct NsOptions {
  std::size_t cap = kDefaultEnumerationCap;
  std::size_t restarts = 16;
  std::uint64_t seed = 0;
};

/// sup over u in {+-1}^d of sum_i lambda_i <rho_i, u>^2 on the d-window,
/// computed in eigen-coordinates (exact up to the cap, ascent beyond).
NormEstimate ns_condition_estimate(const MercerModel& model, std::size_t d,
                                   const NsOptions& options = {});

/// Named models used by the synth command and the cross-checks: canonical and
/// Laguerre bases with power, geometric and finite eigenvalue laws.
std::vector<std::pair<std::string, MercerModel>> model_zoo();

std::string to_string(Certification c);
std::string to_string(BoundedL1Verdict v);
std::string to_string(BasisKind k);

}  // namespace srkhs
