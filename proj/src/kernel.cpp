// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "srkhs/kernel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <new>

#include "srkhs/error.hpp"

namespace srkhs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

KernelSpec KernelSpec::stable_spline(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw ConfigError("stable-spline alpha must satisfy 0 <= alpha < 1, got " +
                      format_double(alpha));
  }
  return KernelSpec(family::StableSpline{alpha});
}

KernelSpec KernelSpec::gaussian(double width) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw ConfigError("gaussian width must be positive");
  }
  return KernelSpec(family::Gaussian{width});
}

KernelSpec KernelSpec::translation_invariant(Sequence h) {
  return KernelSpec(family::TranslationInvariant{std::move(h)});
}

KernelSpec KernelSpec::rank_one(Sequence v) { return KernelSpec(family::RankOne{std::move(v)}); }

KernelSpec KernelSpec::diagonal(Sequence g) {
  // A PSD diagonal needs g >= 0. Closed-form families are checked by sign of
  // their parameter, literals entrywise.
  const bool negative = [&] {
    switch (g.kind()) {
      case Sequence::Kind::Power:
        return false;
      case Sequence::Kind::Geometric:
        return g.parameter() < 0.0;
      case Sequence::Kind::Constant:
        return g.parameter() < 0.0;
      case Sequence::Kind::Literal:
        return std::any_of(g.values().begin(), g.values().end(), [](double v) { return v < 0.0; });
    }
    return false;
  }();
  if (negative) throw ConfigError("diagonal kernel needs a non-negative sequence g");
  return KernelSpec(family::Diagonal{std::move(g)});
}

KernelSpec KernelSpec::synthesized(std::shared_ptr<const EntrySource> source) {
  if (!source) throw ConfigError("synthesized kernel needs an entry source");
  return KernelSpec(family::MercerSynthesized{std::move(source)});
}

double KernelSpec::entry(std::size_t i, std::size_t j) const {
  if (i < kIndexBase || j < kIndexBase) throw DomainError("kernel indices must be >= 1");
  return std::visit(
      overloaded{
          [&](const family::StableSpline& f) {
            return std::pow(f.alpha, static_cast<double>(std::max(i, j)));
          },
          [&](const family::Gaussian& f) {
            const double diff = static_cast<double>(i) - static_cast<double>(j);
            return std::exp(-(diff * diff) / (f.width * f.width));
          },
          [&](const family::TranslationInvariant& f) {
            const std::size_t lag = i > j ? i - j : j - i;
            return f.h(lag + 1);
          },
          [&](const family::RankOne& f) { return f.v(i) * f.v(j); },
          [&](const family::Diagonal& f) { return i == j ? f.g(i) : 0.0; },
          [&](const family::MercerSynthesized& f) {
            const std::size_t w = f.source->window();
            if (i > w || j > w) {
              throw DomainError("index outside the synthesized kernel window (" +
                                std::to_string(w) + ")");
            }
            return f.source->entry(i, j);
          },
      },
      family_);
}

std::string KernelSpec::name() const {
  return std::visit(overloaded{
                        [](const family::StableSpline&) { return std::string("stable-spline"); },
                        [](const family::Gaussian&) { return std::string("gaussian"); },
                        [](const family::TranslationInvariant&) {
                          return std::string("translation-invariant");
                        },
                        [](const family::RankOne&) { return std::string("rank-one"); },
                        [](const family::Diagonal&) { return std::string("diagonal"); },
                        [](const family::MercerSynthesized&) { return std::string("mercer"); },
                    },
                    family_);
}

std::string KernelSpec::describe() const {
  return std::visit(
      overloaded{
          [](const family::StableSpline& f) {
            return "stable-spline(alpha=" + format_double(f.alpha) + ")";
          },
          [](const family::Gaussian& f) {
            return "gaussian(width=" + format_double(f.width) + ")";
          },
          [](const family::TranslationInvariant& f) {
            return "translation-invariant(h=" + f.h.to_string() + ")";
          },
          [](const family::RankOne& f) { return "rank-one(v=" + f.v.to_string() + ")"; },
          [](const family::Diagonal& f) { return "diagonal(g=" + f.g.to_string() + ")"; },
          [](const family::MercerSynthesized& f) { return "mercer(" + f.source->describe() + ")"; },
      },
      family_);
}

std::optional<std::size_t> KernelSpec::window() const {
  if (const auto* f = std::get_if<family::MercerSynthesized>(&family_)) return f->source->window();
  return std::nullopt;
}

double eval_entry(const KernelSpec& spec, std::size_t i, std::size_t j) { return spec.entry(i, j); }

TruncatedKernel truncate(const KernelSpec& spec, std::size_t d) {
  if (d == 0) throw ConfigError("truncation order must be >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  if (d > static_cast<std::size_t>(std::numeric_limits<Eigen::Index>::max() / n)) {
    throw ResourceError("truncation order " + std::to_string(d) + " is too large");
  }
  TruncatedKernel out;
  try {
    out.entries.resize(n, n);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate a " + std::to_string(d) + "x" + std::to_string(d) +
                        " kernel matrix");
  }
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r <= c; ++r) {
      const double v = spec.entry(static_cast<std::size_t>(r) + kIndexBase,
                                  static_cast<std::size_t>(c) + kIndexBase);
      out.entries(r, c) = v;
      out.entries(c, r) = v;
    }
  }
  out.source = spec.describe();
  return out;
}

void require_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw StructuralError("kernel matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double tol = 16.0 * std::numeric_limits<double>::epsilon() * scale;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < c; ++r) {
      if (std::abs(m(r, c) - m(c, r)) > tol) {
        throw StructuralError("kernel matrix is not symmetric at (" + std::to_string(r + 1) + "," +
                              std::to_string(c + 1) + ")");
      }
    }
  }
}

TruncatedKernel from_matrix(Eigen::MatrixXd entries, std::string source) {
  require_symmetric(entries);
  if (entries.rows() == 0) throw ConfigError("kernel matrix must be non-empty");
  return TruncatedKernel{std::move(entries), std::move(source)};
}

PsdCheck validate_psd(const Eigen::MatrixXd& m, double eps) {
  require_symmetric(m);
  if (m.rows() == 0) return {true, 0.0, 0.0};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalue computation failed for d=" + std::to_string(m.rows()));
  }
  const double lo = solver.eigenvalues().minCoeff();
  const double hi = solver.eigenvalues().maxCoeff();
  return {lo >= -eps * std::max(1.0, hi), lo, hi};
}

PsdCheck validate_psd(const TruncatedKernel& k, double eps) { return validate_psd(k.entries, eps); }

}  // namespace srkhs
