// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "srkhs/sequence.hpp"

namespace srkhs {

/// Kernel indices start at 1. TruncatedKernel storage is 0-based; the
/// conversion happens in truncate() only.
inline constexpr std::size_t kIndexBase = 1;

/// Default relative tolerance for PSD validation.
inline constexpr double kDefaultPsdTolerance = 1e-10;

/// Entrywise source for kernels that are not given in closed form, e.g. a
/// kernel synthesized from an orthonormal basis materialized on a window.
class EntrySource {
 public:
  virtual ~EntrySource() = default;
  virtual double entry(std::size_t i, std::size_t j) const = 0;
  /// Largest index the source can evaluate.
  virtual std::size_t window() const = 0;
  virtual std::string describe() const = 0;
};

namespace family {

/// K(i,j) = alpha^max(i,j), 0 <= alpha < 1.
struct StableSpline {
  double alpha;
};

/// K(i,j) = exp(-(i-j)^2 / width^2).
struct Gaussian {
  double width = 1.0;
};

/// K(i,j) = h(|i-j|) with h(k) = s(k+1), so s(1) is the diagonal value.
struct TranslationInvariant {
  Sequence h;
};

/// K = v v^T.
struct RankOne {
  Sequence v;
};

/// K = diag(g).
struct Diagonal {
  Sequence g;
};

struct MercerSynthesized {
  std::shared_ptr<const EntrySource> source;
};

}  // namespace family

using KernelFamily =
    std::variant<family::StableSpline, family::Gaussian, family::TranslationInvariant,
                 family::RankOne, family::Diagonal, family::MercerSynthesized>;

/// Symbolic description of an infinite PSD kernel on N x N.
class KernelSpec {
 public:
  static KernelSpec stable_spline(double alpha);
  static KernelSpec gaussian(double width = 1.0);
  static KernelSpec translation_invariant(Sequence h);
  static KernelSpec rank_one(Sequence v);
  static KernelSpec diagonal(Sequence g);
  static KernelSpec synthesized(std::shared_ptr<const EntrySource> source);

  /// K(i,j), 1-based. Throws DomainError for i or j < 1 or outside a window.
  double entry(std::size_t i, std::size_t j) const;

  const KernelFamily& family() const { return family_; }

  /// Short family name as used by configs: "stable-spline", "gaussian", ...
  std::string name() const;
  /// Family plus parameters, e.g. "stable-spline(alpha=0.95)".
  std::string describe() const;
  /// Largest evaluable index, if bounded.
  std::optional<std::size_t> window() const;

 private:
  explicit KernelSpec(KernelFamily f) : family_(std::move(f)) {}
  KernelFamily family_;
};

double eval_entry(const KernelSpec& spec, std::size_t i, std::size_t j);

/// Leading d x d block of a kernel.
struct TruncatedKernel {
  Eigen::MatrixXd entries;
  std::string source;

  std::size_t order() const { return static_cast<std::size_t>(entries.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
};

TruncatedKernel truncate(const KernelSpec& spec, std::size_t d);

/// Wraps an explicit matrix; throws StructuralError unless it is square and symmetric.
TruncatedKernel from_matrix(Eigen::MatrixXd entries, std::string source = "matrix");

/// Throws StructuralError if `m` is not square or asymmetric beyond rounding.
void require_symmetric(const Eigen::MatrixXd& m);

struct PsdCheck {
  bool psd;
  double min_eigenvalue;
  double max_eigenvalue;
};

/// psd iff lambda_min >= -eps * max(1, lambda_max).
PsdCheck validate_psd(const TruncatedKernel& k, double eps = kDefaultPsdTolerance);
PsdCheck validate_psd(const Eigen::MatrixXd& m, double eps = kDefaultPsdTolerance);

}  // namespace srkhs
