// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "srkhs/simd.hpp"

using namespace srkhs;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  std::vector<double> v(n);
  for (auto& x : v) x = unif(rng);
  return v;
}

}  // namespace

TEST_CASE("reference table comes first") {
  const auto tables = simd::available();
  REQUIRE(!tables.empty());
  CHECK(tables[0]->isa == simd::Isa::Scalar);
  CHECK(&simd::scalar_kernels() == tables[0]);
  if (const char* env = std::getenv("SRKHS_SIMD"); env && std::string(env) == "scalar") {
    CHECK(simd::active().isa == simd::Isa::Scalar);
  }
  MESSAGE("active kernels: " << simd::active().name);
}

TEST_CASE("vector variants match the scalar reference") {
  const auto& ref = simd::scalar_kernels();
  for (const simd::KernelTable* t : simd::available()) {
    CAPTURE(t->name);
    for (std::size_t n = 0; n <= 67; ++n) {
      CAPTURE(n);
      const auto x = random_vector(n, 2 * n + 1);
      const auto w = random_vector(n, 2 * n + 2);
      for (double alpha : {-2.0, 0.3, 1.0}) {
        auto y_ref = random_vector(n, 7 * n);
        auto y = y_ref;
        ref.axpy(alpha, x.data(), y_ref.data(), n);
        t->axpy(alpha, x.data(), y.data(), n);
        // Elementwise multiply-then-add: identical bits.
        CHECK(std::memcmp(y.data(), y_ref.data(), n * sizeof(double)) == 0);
      }
      const double scale = 1e-13 * (1.0 + static_cast<double>(n));
      const double ad = ref.abs_sum(x.data(), n);
      CHECK(std::abs(t->abs_sum(x.data(), n) - ad) <= scale * ad + 1e-300);
      const double sq = ref.sq_sum(x.data(), n);
      CHECK(std::abs(t->sq_sum(x.data(), n) - sq) <= scale * sq + 1e-300);
      const double dt = ref.dot(x.data(), w.data(), n);
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) mag += std::abs(x[i] * w[i]);
      CHECK(std::abs(t->dot(x.data(), w.data(), n) - dt) <= scale * mag + 1e-300);
      std::vector<double> pw(n);
      for (std::size_t i = 0; i < n; ++i) pw[i] = std::abs(w[i]);
      const double ws = ref.weighted_sq_sum(pw.data(), x.data(), n);
      CHECK(std::abs(t->weighted_sq_sum(pw.data(), x.data(), n) - ws) <= scale * ws + 1e-300);
    }
  }
}

TEST_CASE("scalar reference values") {
  const double x[] = {1, -2, 3};
  const double w[] = {2, 1, 0.5};
  const auto& s = simd::scalar_kernels();
  CHECK(s.abs_sum(x, 3) == 6.0);
  CHECK(s.sq_sum(x, 3) == 14.0);
  CHECK(s.dot(x, w, 3) == 1.5);
  CHECK(s.weighted_sq_sum(w, x, 3) == 2 + 4 + 4.5);
  double y[] = {1, 1, 1};
  s.axpy(2.0, x, y, 3);
  CHECK(y[0] == 3.0);
  CHECK(y[1] == -3.0);
  CHECK(y[2] == 7.0);
}
