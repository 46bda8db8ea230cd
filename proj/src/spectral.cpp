// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "srkhs/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "srkhs/error.hpp"

namespace srkhs {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

double Spectrum::gap(std::size_t i) const {
  if (i < 1 || i > d) throw ConfigError("eigen index out of range");
  double g = std::numeric_limits<double>::infinity();
  if (i > 1) g = std::min(g, eigenvalue(i - 1) - eigenvalue(i));
  if (i < d) g = std::min(g, eigenvalue(i) - eigenvalue(i + 1));
  return g;
}

double Spectrum::eigenvector_resolution(std::size_t i) const {
  const double g = gap(i);
  if (d == 1) return 0.0;
  if (g <= 0.0) return std::numeric_limits<double>::infinity();
  return 8.0 * kEps * std::max(eigenvalue(1), 0.0) / g;
}

std::size_t Spectrum::positive_rank(double rtol) const {
  if (d == 0) return 0;
  const double cut = rtol * eigenvalue(1);
  std::size_t r = 0;
  while (r < d && eigenvalues(static_cast<Eigen::Index>(r)) > cut &&
         eigenvalues(static_cast<Eigen::Index>(r)) > 0.0) {
    ++r;
  }
  return r;
}

void normalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  }
  if (v.size() > 0 && v(best) < 0.0) v = -v;
}

Spectrum eigendecompose(const TruncatedKernel& k, const SpectralOptions& options) {
  require_symmetric(k.entries);
  const auto n = static_cast<Eigen::Index>(k.order());
  if (n == 0) throw ConfigError("cannot decompose an empty kernel");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k.entries, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver did not converge at d=" + std::to_string(n));
  }

  Spectrum s;
  s.d = k.order();
  s.source = k.entries;
  s.source_tag = k.source;
  // Eigen returns ascending order.
  s.eigenvalues = solver.eigenvalues().reverse();
  s.eigenvectors = solver.eigenvectors().rowwise().reverse();

  const double top = s.eigenvalues(0);
  const double floor = -options.psd_tolerance * std::max(1.0, std::abs(top));
  for (Eigen::Index i = 0; i < n; ++i) {
    double& l = s.eigenvalues(i);
    if (l < 0.0) {
      if (l < floor) {
        throw StructuralError("kernel is not PSD: eigenvalue " + format_double(l) + " at d=" +
                              std::to_string(n));
      }
      l = 0.0;
      ++s.clamped;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) normalize_sign(s.eigenvectors.col(i));

  const double tol = options.gap_tolerance * std::max(top, 0.0);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (s.eigenvalues(i) - s.eigenvalues(i + 1) < tol) {
      s.multiplicity_warnings.emplace_back(i + 1, i + 2);
    }
  }
  return s;
}

namespace {

struct Snapshot {
  Eigen::VectorXd values;   // tracked eigenvalues
  Eigen::MatrixXd vectors;  // tracked eigenvectors
  std::vector<double> resolution;
  std::vector<bool> unreliable;
  Eigen::MatrixXd leading;
  Eigen::VectorXd all_values;
};

Snapshot snapshot(const KernelSpec& spec, std::size_t d, std::span<const std::size_t> tracked,
                  const ConvergenceOptions& options, bool last) {
  const Spectrum s = eigendecompose(truncate(spec, d), options.spectral);
  const double tol = options.spectral.gap_tolerance * s.eigenvalue(1);
  Snapshot out;
  out.values.resize(static_cast<Eigen::Index>(tracked.size()));
  out.vectors.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(tracked.size()));
  for (std::size_t t = 0; t < tracked.size(); ++t) {
    const std::size_t i = tracked[t];
    const auto ti = static_cast<Eigen::Index>(t);
    out.values(ti) = s.eigenvalue(i);
    out.vectors.col(ti) = s.eigenvector(i);
    out.resolution.push_back(s.eigenvector_resolution(i));
    out.unreliable.push_back(s.gap(i) < tol);
  }
  if (last) {
    const auto keep = static_cast<Eigen::Index>(std::min(options.keep_leading, d));
    out.leading = s.eigenvectors.leftCols(keep);
    out.all_values = s.eigenvalues;
  }
  return out;
}

double aligned_distance(const Eigen::VectorXd& shorter, const Eigen::VectorXd& longer) {
  const Eigen::Index n = shorter.size();
  const double tail = longer.tail(longer.size() - n).squaredNorm();
  const double minus = (longer.head(n) - shorter).squaredNorm();
  const double plus = (longer.head(n) + shorter).squaredNorm();
  return std::sqrt(std::min(minus, plus) + tail);
}

}  // namespace

ConvergenceTrace convergence_scan(const KernelSpec& spec, std::span<const std::size_t> grid,
                                  std::span<const std::size_t> tracked,
                                  const ConvergenceOptions& options) {
  if (grid.empty()) throw ConfigError("convergence scan needs a non-empty grid");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] < 1 || (k > 0 && grid[k] <= grid[k - 1])) {
      throw ConfigError("grid must be strictly ascending orders >= 1");
    }
  }
  if (tracked.empty()) throw ConfigError("no tracked eigen indices");
  for (std::size_t i : tracked) {
    if (i < 1 || i > grid.front()) {
      throw ConfigError("tracked index " + std::to_string(i) + " exceeds the smallest grid order " +
                        std::to_string(grid.front()));
    }
  }

  std::vector<Snapshot> snaps(grid.size());
  const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, grid.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t k = next++; k < grid.size(); k = next++) {
      try {
        snaps[k] = snapshot(spec, grid[k], tracked, options, k + 1 == grid.size());
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  const auto rows = static_cast<Eigen::Index>(grid.size());
  const auto cols = static_cast<Eigen::Index>(tracked.size());
  ConvergenceTrace out;
  out.grid.assign(grid.begin(), grid.end());
  out.tracked.assign(tracked.begin(), tracked.end());
  out.eigenvalue_paths.resize(rows, cols);
  out.discrepancies.resize(rows - 1, cols);
  out.resolution.resize(rows - 1, cols);
  for (Eigen::Index k = 0; k < rows; ++k) {
    out.eigenvalue_paths.row(k) = snaps[k].values.transpose();
    out.unreliable.push_back(snaps[k].unreliable);
    if (k == 0) continue;
    for (Eigen::Index t = 0; t < cols; ++t) {
      out.discrepancies(k - 1, t) =
          aligned_distance(snaps[k - 1].vectors.col(t), snaps[k].vectors.col(t));
      out.resolution(k - 1, t) = std::max(snaps[k - 1].resolution[t], snaps[k].resolution[t]);
    }
  }
  out.final_vectors = std::move(snaps.back().vectors);
  out.leading_vectors = std::move(snaps.back().leading);
  out.final_eigenvalues = std::move(snaps.back().all_values);
  return out;
}

Reconstruction mercer_reconstruct(const Spectrum& s, std::size_t r) {
  if (r > s.d) throw ConfigError("reconstruction rank exceeds d");
  const auto n = static_cast<Eigen::Index>(s.d);
  const auto rr = static_cast<Eigen::Index>(r);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  if (r > 0) {
    const auto v = s.eigenvectors.leftCols(rr);
    k = v * s.eigenvalues.head(rr).asDiagonal() * v.transpose();
    k = 0.5 * (k + k.transpose()).eval();
  }
  Reconstruction out;
  out.frobenius_error = (s.source - k).norm();
  const double scale = s.source.norm();
  out.relative_error = scale > 0.0 ? out.frobenius_error / scale : out.frobenius_error;
  out.kernel.entries = std::move(k);
  out.kernel.source = s.source_tag + " rank-" + std::to_string(r);
  return out;
}

double tail_energy_ratio(const Spectrum& s, std::size_t r) {
  if (r > s.d) throw ConfigError("rank exceeds d");
  const double total = s.eigenvalues.sum();
  if (total <= 0.0) return 0.0;
  return s.eigenvalues.tail(static_cast<Eigen::Index>(s.d - r)).sum() / total;
}

Eigen::VectorXd feature_map(const Spectrum& s, std::size_t x) {
  if (x < 1 || x > s.d) {
    throw DomainError("feature index " + std::to_string(x) + " outside the truncation window 1.." +
                      std::to_string(s.d));
  }
  return s.eigenvectors.row(static_cast<Eigen::Index>(x - 1)).transpose().cwiseProduct(
      s.eigenvalues.cwiseMax(0.0).cwiseSqrt());
}

}  // namespace srkhs
