// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

namespace srkhs::simd {

enum class Isa { Scalar, Avx2 };

/// Inner loops shared by the sign-vector searches and the partial-sum
/// diagnostics. Every table entry has a scalar reference implementation;
/// vector variants must match it bit-for-bit for `axpy` (elementwise, no
/// FMA) and within reduction-reordering error for the others.
struct KernelTable {
  Isa isa;
  const char* name;
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*abs_sum)(const double* x, std::size_t n);
  double (*sq_sum)(const double* x, std::size_t n);
  /// sum_i w[i] * x[i]^2
  double (*weighted_sq_sum)(const double* w, const double* x, std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// Best table for this CPU. Setting SRKHS_SIMD=scalar in the environment
/// forces the reference path.
const KernelTable& active();

/// Tables usable on this machine, reference first.
std::span<const KernelTable* const> available();

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline double abs_sum(std::span<const double> x) { return active().abs_sum(x.data(), x.size()); }
inline double sq_sum(std::span<const double> x) { return active().sq_sum(x.data(), x.size()); }

}  // namespace srkhs::simd
