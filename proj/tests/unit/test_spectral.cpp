// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "srkhs/error.hpp"
#include "srkhs/spectral.hpp"

using namespace srkhs;

TEST_CASE("stable spline 2x2 matches the quadratic formula") {
  const auto s = eigendecompose(truncate(KernelSpec::stable_spline(0.5), 2));
  // K = [[.5 .25] [.25 .25]]: lambda = (0.75 +- sqrt(0.0625 + 0.25)) / 2
  const double disc = std::sqrt(0.0625 + 0.25);
  CHECK(s.eigenvalue(1) == doctest::Approx((0.75 + disc) / 2).epsilon(1e-14));
  CHECK(s.eigenvalue(2) == doctest::Approx((0.75 - disc) / 2).epsilon(1e-14));
  CHECK(s.eigenvalue(1) == doctest::Approx(0.6545085).epsilon(1e-7));
  CHECK(s.eigenvalue(2) == doctest::Approx(0.0954915).epsilon(1e-6));
}

TEST_CASE("diagonal and projector spectra") {
  Eigen::Matrix3d d = Eigen::Vector3d(3, 1, 2).asDiagonal();
  const auto s = eigendecompose(from_matrix(d));
  CHECK(s.eigenvalues.isApprox(Eigen::Vector3d(3, 2, 1)));
  CHECK(s.eigenvector(1).isApprox(Eigen::Vector3d(1, 0, 0)));
  CHECK(s.eigenvector(2).isApprox(Eigen::Vector3d(0, 0, 1)));
  CHECK(s.eigenvector(3).isApprox(Eigen::Vector3d(0, 1, 0)));

  const auto p = eigendecompose(from_matrix(Eigen::Matrix2d::Constant(0.5)));
  CHECK(p.eigenvalue(1) == doctest::Approx(1.0));
  CHECK(std::abs(p.eigenvalue(2)) < 1e-15);
  CHECK(p.eigenvector(1)(0) == doctest::Approx(M_SQRT1_2));
  CHECK(p.eigenvector(1)(1) == doctest::Approx(M_SQRT1_2));
}

TEST_CASE("decomposition invariants") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t m = 3 + seed * 4;
    const Eigen::MatrixXd k = oracle::random_psd(m, seed);
    const auto s = eigendecompose(from_matrix(k));
    const auto n = static_cast<Eigen::Index>(m);
    CHECK((s.eigenvectors.transpose() * s.eigenvectors - Eigen::MatrixXd::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    const Eigen::MatrixXd back = s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.transpose();
    CHECK((back - k).norm() <= 1e-12 * std::max(1.0, k.norm()));
    for (Eigen::Index i = 0; i + 1 < n; ++i) CHECK(s.eigenvalues(i) >= s.eigenvalues(i + 1));
    CHECK(s.eigenvalues.minCoeff() >= 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index arg;
      s.eigenvectors.col(i).cwiseAbs().maxCoeff(&arg);
      CHECK(s.eigenvectors(arg, i) > 0.0);
    }
  }
}

TEST_CASE("sign rule picks the lowest index on ties") {
  Eigen::VectorXd v(3);
  v << -0.5, 0.5, 0.1;
  normalize_sign(v);
  CHECK(v(0) == 0.5);
  CHECK(v(1) == -0.5);
}

TEST_CASE("structural errors") {
  Eigen::Matrix2d asym;
  asym << 1, 2, 0, 1;
  CHECK_THROWS_AS(eigendecompose(TruncatedKernel{asym, "asym"}), StructuralError);
  Eigen::Matrix2d indef;
  indef << 1, 2, 2, 1;
  CHECK_THROWS_AS(eigendecompose(from_matrix(indef)), StructuralError);
}

TEST_CASE("multiplicity warnings") {
  const auto s = eigendecompose(from_matrix(Eigen::MatrixXd::Identity(4, 4)));
  CHECK(s.multiplicity_warnings.size() == 3);
  CHECK(s.multiplicity_warnings.front() == std::pair<std::size_t, std::size_t>{1, 2});
  const auto t = eigendecompose(truncate(KernelSpec::stable_spline(0.8), 10));
  CHECK(t.multiplicity_warnings.empty());
  CHECK(t.eigenvector_resolution(1) < 1e-13);
}

TEST_CASE("convergence scan on a diagonal kernel") {
  const std::size_t grid[] = {5, 10, 20};
  const std::size_t tracked[] = {1, 3, 5};
  const auto scan = convergence_scan(KernelSpec::diagonal(Sequence::geometric(0.5)), grid, tracked);
  CHECK(scan.discrepancies.rows() == 2);
  CHECK(scan.discrepancies.cwiseAbs().maxCoeff() == 0.0);
  for (Eigen::Index r = 0; r < 3; ++r) {
    CHECK(scan.eigenvalue_paths(r, 0) == 0.5);
    CHECK(scan.eigenvalue_paths(r, 2) == doctest::Approx(std::pow(0.5, 5)));
  }
  const std::size_t too_far[] = {1, 6};
  CHECK_THROWS_AS(convergence_scan(KernelSpec::stable_spline(0.5), grid, too_far), ConfigError);
}

TEST_CASE("convergence scan eigenvalue paths grow with d") {
  const std::size_t grid[] = {10, 20, 40, 80};
  const std::size_t tracked[] = {1, 2, 5};
  const auto scan = convergence_scan(KernelSpec::stable_spline(0.9), grid, tracked);
  for (Eigen::Index c = 0; c < 3; ++c) {
    for (Eigen::Index r = 1; r < 4; ++r) {
      CHECK(scan.eigenvalue_paths(r, c) >= scan.eigenvalue_paths(r - 1, c) * (1 - 1e-14));
    }
  }
  CHECK(scan.discrepancies(2, 0) < scan.discrepancies(0, 0));
}

TEST_CASE("convergence scan does not depend on the thread count") {
  const std::size_t grid[] = {8, 16, 24, 32, 48};
  const std::size_t tracked[] = {1, 4};
  ConvergenceOptions one;
  ConvergenceOptions four;
  four.threads = 4;
  const auto a = convergence_scan(KernelSpec::stable_spline(0.9), grid, tracked, one);
  const auto b = convergence_scan(KernelSpec::stable_spline(0.9), grid, tracked, four);
  CHECK(a.eigenvalue_paths == b.eigenvalue_paths);
  CHECK(a.discrepancies == b.discrepancies);
  CHECK(a.final_vectors == b.final_vectors);
}

TEST_CASE("mercer reconstruction") {
  const auto k = truncate(KernelSpec::stable_spline(0.9), 40);
  const auto s = eigendecompose(k);
  const auto zero = mercer_reconstruct(s, 0);
  CHECK(zero.kernel.entries.isZero(0.0));
  CHECK(zero.relative_error == doctest::Approx(1.0));
  CHECK(mercer_reconstruct(s, 40).relative_error < 1e-13);
  double prev = 2.0;
  for (std::size_t r = 0; r <= 40; r += 5) {
    const double e = mercer_reconstruct(s, r).relative_error;
    CHECK(e <= prev * (1 + 1e-12));
    prev = e;
    // Eckart-Young: the Frobenius error is the root tail of lambda^2.
    const double tail = s.eigenvalues.tail(static_cast<Eigen::Index>(40 - r)).squaredNorm();
    CHECK(mercer_reconstruct(s, r).frobenius_error == doctest::Approx(std::sqrt(tail)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(mercer_reconstruct(s, 41), ConfigError);
}

TEST_CASE("trace, Hilbert-Schmidt and feature map identities") {
  const auto k = truncate(KernelSpec::stable_spline(0.95), 120);
  const auto s = eigendecompose(k);
  CHECK(s.eigenvalues.sum() == doctest::Approx(k.entries.trace()).epsilon(1e-13));
  CHECK(s.eigenvalues.squaredNorm() == doctest::Approx(k.entries.squaredNorm()).epsilon(1e-13));
  CHECK(tail_energy_ratio(s, 0) == doctest::Approx(1.0));
  CHECK(tail_energy_ratio(s, 120) == 0.0);
  for (std::size_t x : {1, 7, 120}) {
    for (std::size_t y : {1, 50}) {
      const double inner = feature_map(s, x).dot(feature_map(s, y));
      CHECK(inner == doctest::Approx(k.entries(x - 1, y - 1)).epsilon(1e-12));
    }
  }
  CHECK_THROWS(feature_map(s, 121));
  CHECK(s.positive_rank() <= 120);
}
