// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "srkhs/error.hpp"
#include "srkhs/kernel.hpp"

using namespace srkhs;

TEST_CASE("sequence generators") {
  CHECK(Sequence::power(-1.0)(4) == doctest::Approx(0.25));
  CHECK(Sequence::geometric(0.5)(3) == 0.125);
  CHECK(Sequence::constant(2.0)(100) == 2.0);
  const auto lit = Sequence::parse("literal:1,-0.5,2");
  CHECK(lit(2) == -0.5);
  CHECK(lit(4) == 0.0);
  CHECK(*lit.support() == 3);
  CHECK(Sequence::parse("power:-2") == Sequence::power(-2.0));
  CHECK(Sequence::parse(Sequence::geometric(0.3).to_string()) == Sequence::geometric(0.3));
  CHECK_THROWS_AS(Sequence::parse("power"), ConfigError);
  CHECK_THROWS_AS(Sequence::parse("cubic:3"), ConfigError);
  CHECK_THROWS_AS(Sequence::power(1.0)(0), DomainError);
}

TEST_CASE("closed-form summability of generators") {
  CHECK(*Sequence::power(-2.0).abs_summable());
  CHECK_FALSE(*Sequence::power(-1.0).abs_summable());
  CHECK(*Sequence::power(-1.0).square_summable());
  CHECK(*Sequence::power(-2.0).abs_sum() == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-14));
  CHECK(*Sequence::geometric(0.5).abs_sum() == doctest::Approx(1.0));
  CHECK_FALSE(*Sequence::constant(1.0).square_summable());
  CHECK(*Sequence::constant(0.0).abs_summable());
}

TEST_CASE("eval_entry examples") {
  CHECK(eval_entry(KernelSpec::stable_spline(0.95), 2, 3) == doctest::Approx(0.857375).epsilon(1e-15));
  CHECK(eval_entry(KernelSpec::gaussian(), 7, 7) == 1.0);
  CHECK(eval_entry(KernelSpec::rank_one(Sequence::power(-1)), 2, 3) == doctest::Approx(1.0 / 6.0));
  CHECK(eval_entry(KernelSpec::translation_invariant(Sequence::literal({2, 1})), 5, 6) == 1.0);
  CHECK(eval_entry(KernelSpec::diagonal(Sequence::literal({3, 1})), 2, 2) == 1.0);
  CHECK(eval_entry(KernelSpec::diagonal(Sequence::literal({3, 1})), 1, 2) == 0.0);
}

TEST_CASE("entry errors") {
  const auto tc = KernelSpec::stable_spline(0.5);
  CHECK_THROWS_AS(tc.entry(0, 1), DomainError);
  CHECK_THROWS_AS(tc.entry(1, 0), DomainError);
  CHECK_THROWS_AS(KernelSpec::stable_spline(1.0), ConfigError);
  CHECK_THROWS_AS(KernelSpec::stable_spline(-0.1), ConfigError);
  CHECK_NOTHROW(KernelSpec::stable_spline(0.0));
  CHECK_THROWS_AS(KernelSpec::gaussian(0.0), ConfigError);
  CHECK_THROWS_AS(truncate(tc, 0), ConfigError);
}

TEST_CASE("truncate examples") {
  const auto k = truncate(KernelSpec::stable_spline(0.5), 2);
  CHECK(k.order() == 2);
  CHECK(k(0, 0) == 0.5);
  CHECK(k(0, 1) == 0.25);
  CHECK(k(1, 0) == 0.25);
  CHECK(k(1, 1) == 0.25);

  const auto one = truncate(KernelSpec::gaussian(), 1);
  CHECK(one.order() == 1);
  CHECK(one(0, 0) == 1.0);

  const auto g = truncate(KernelSpec::gaussian(), 3);
  CHECK(g(0, 1) == doctest::Approx(std::exp(-1.0)));
  CHECK(g(0, 2) == doctest::Approx(std::exp(-4.0)));
  CHECK(g(2, 1) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("symmetry and leading-block property") {
  const KernelSpec specs[] = {
      KernelSpec::stable_spline(0.9), KernelSpec::gaussian(3.0),
      KernelSpec::translation_invariant(Sequence::geometric(0.7)),
      KernelSpec::rank_one(Sequence::power(-0.5)), KernelSpec::diagonal(Sequence::power(-1))};
  for (const auto& s : specs) {
    CAPTURE(s.describe());
    for (std::size_t i = 1; i <= 1000; i += 37) {
      for (std::size_t j = 1; j <= 1000; j += 53) CHECK(s.entry(i, j) == s.entry(j, i));
    }
    const auto small = truncate(s, 20);
    const auto big = truncate(s, 45);
    CHECK(big.entries.topLeftCorner(20, 20) == small.entries);
    for (std::size_t i = 0; i < 20; ++i) {
      for (std::size_t j = 0; j < 20; ++j) CHECK(small(i, j) == s.entry(i + 1, j + 1));
    }
  }
}

TEST_CASE("stable-spline truncations are PSD") {
  for (double alpha : {0.1, 0.5, 0.9, 0.99}) {
    for (std::size_t d : {1, 10, 100}) {
      CAPTURE(alpha);
      CAPTURE(d);
      CHECK(validate_psd(truncate(KernelSpec::stable_spline(alpha), d)).psd);
    }
  }
  const auto c = validate_psd(truncate(KernelSpec::stable_spline(0.95), 50));
  CHECK(c.psd);
  CHECK(c.min_eigenvalue > 0.0);
}

TEST_CASE("validate_psd examples") {
  Eigen::Matrix2d m;
  m << 1, 2, 2, 1;
  const auto bad = validate_psd(from_matrix(m));
  CHECK_FALSE(bad.psd);
  CHECK(bad.min_eigenvalue == doctest::Approx(-1.0));

  const auto zero = validate_psd(from_matrix(Eigen::MatrixXd::Zero(4, 4)));
  CHECK(zero.psd);
  CHECK(zero.min_eigenvalue == 0.0);

  // h(0) = 1 and h(k) = -1 otherwise is not a valid kernel at d = 3.
  const auto ti = KernelSpec::translation_invariant(Sequence::literal({1, -1, -1}));
  CHECK_FALSE(validate_psd(truncate(ti, 3)).psd);
}

TEST_CASE("asymmetric input is a structural error") {
  Eigen::Matrix2d m;
  m << 1, 0.5, 0.4, 1;
  CHECK_THROWS_AS(from_matrix(m), StructuralError);
  CHECK_THROWS_AS(validate_psd(Eigen::MatrixXd(m)), StructuralError);
  CHECK_THROWS_AS(from_matrix(Eigen::MatrixXd::Zero(2, 3)), StructuralError);
}

TEST_CASE("describe and name") {
  CHECK(KernelSpec::stable_spline(0.95).name() == "stable-spline");
  CHECK(KernelSpec::stable_spline(0.95).describe() == "stable-spline(alpha=0.95)");
  CHECK(KernelSpec::rank_one(Sequence::power(-1)).describe() == "rank-one(v=power:-1)");
  CHECK_FALSE(KernelSpec::gaussian().window().has_value());
}
