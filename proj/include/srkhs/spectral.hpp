// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "srkhs/kernel.hpp"

namespace srkhs {

/// Relative gap (times lambda_1) below which adjacent eigenvalues are flagged.
inline constexpr double kDefaultGapTolerance = 1e-8;

struct SpectralOptions {
  double psd_tolerance = kDefaultPsdTolerance;
  double gap_tolerance = kDefaultGapTolerance;
};

/// Eigenpairs of a truncated kernel, eigenvalues descending. Each eigenvector
/// has its largest-magnitude coordinate positive (lowest index on ties).
struct Spectrum {
  std::size_t d = 0;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  /// The decomposed matrix.
  Eigen::MatrixXd source;
  std::string source_tag;
  /// 1-based index pairs (i, i+1) with lambda_i - lambda_{i+1} < gap_tolerance * lambda_1.
  std::vector<std::pair<std::size_t, std::size_t>> multiplicity_warnings;
  /// Number of slightly negative eigenvalues clamped to zero.
  std::size_t clamped = 0;

  double eigenvalue(std::size_t i) const { return eigenvalues(static_cast<Eigen::Index>(i - 1)); }
  auto eigenvector(std::size_t i) const { return eigenvectors.col(static_cast<Eigen::Index>(i - 1)); }
  /// Smallest distance from lambda_i to a neighbour (1-based).
  double gap(std::size_t i) const;
  /// Rounding-level resolution of eigenvector i: 8 eps lambda_1 / gap(i).
  double eigenvector_resolution(std::size_t i) const;
  /// Number of eigenvalues above rtol * lambda_1.
  std::size_t positive_rank(double rtol = 1e-12) const;
};

/// Throws StructuralError for asymmetric or indefinite input and
/// NumericalError when the eigensolver fails (message names d).
Spectrum eigendecompose(const TruncatedKernel& k, const SpectralOptions& options = {});

/// Flips v in place so its largest-magnitude coordinate is positive.
void normalize_sign(Eigen::Ref<Eigen::VectorXd> v);

struct ConvergenceTrace {
  std::vector<std::size_t> grid;
  std::vector<std::size_t> tracked;
  /// (grid point, tracked index) -> lambda_i^(d)
  Eigen::MatrixXd eigenvalue_paths;
  /// (k, tracked index) -> || rho_i^(d_{k+1}) - rho_i^(d_k) ||_2 after zero
  /// padding and sign alignment; one row fewer than the grid.
  Eigen::MatrixXd discrepancies;
  /// Rounding resolution of each discrepancy entry (larger of the two
  /// eigenvector resolutions involved).
  Eigen::MatrixXd resolution;
  /// (grid point, tracked index) flagged by the multiplicity check.
  std::vector<std::vector<bool>> unreliable;
  /// Tracked eigenvectors at the last grid point, one column each.
  Eigen::MatrixXd final_vectors;
  /// First columns of the spectrum at the last grid point.
  Eigen::MatrixXd leading_vectors;
  Eigen::VectorXd final_eigenvalues;
};

struct ConvergenceOptions {
  SpectralOptions spectral;
  std::size_t threads = 1;
  /// How many leading eigenvectors of the last decomposition to keep.
  std::size_t keep_leading = 5;
};

/// Decomposes the kernel at each grid order (1-based tracked indices) and
/// monitors eigenvalue paths and consecutive eigenvector discrepancies.
ConvergenceTrace convergence_scan(const KernelSpec& spec, std::span<const std::size_t> grid,
                                  std::span<const std::size_t> tracked,
                                  const ConvergenceOptions& options = {});

struct Reconstruction {
  TruncatedKernel kernel;
  double frobenius_error;
  double relative_error;
};

/// Rank-r Mercer sum; r = 0 yields the zero matrix.
Reconstruction mercer_reconstruct(const Spectrum& s, std::size_t r);

/// sum_{i>r} lambda_i / sum_i lambda_i
double tail_energy_ratio(const Spectrum& s, std::size_t r);

/// phi(x)_i = sqrt(lambda_i) rho_i(x), 1-based x.
Eigen::VectorXd feature_map(const Spectrum& s, std::size_t x);

}  // namespace srkhs
