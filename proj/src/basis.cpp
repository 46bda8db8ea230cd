// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "srkhs/basis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "srkhs/error.hpp"
#include "srkhs/simd.hpp"

namespace srkhs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_orthonormal(const Eigen::MatrixXd& v, const std::string& what) {
  const Eigen::MatrixXd g = v.transpose() * v;
  const double dev =
      (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  if (dev > kOrthonormalityTolerance) {
    throw ConfigError(what + ": Gram matrix deviates from the identity by " + format_double(dev) +
                      " (tolerance " + format_double(kOrthonormalityTolerance) + ")");
  }
}

// Doubling grid 2, 4, ... capped at n.
std::vector<std::size_t> doubling_grid(std::size_t n) {
  std::vector<std::size_t> g;
  for (std::size_t m = 2; m <= n; m *= 2) g.push_back(m);
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------

OrthoBasis OrthoBasis::canonical(std::size_t count, std::size_t window) {
  if (count < 1 || count > window) throw ConfigError("canonical basis needs 1 <= count <= window");
  return OrthoBasis(BasisKind::Canonical, 0.0, 0,
                    Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(window),
                                              static_cast<Eigen::Index>(count)));
}

OrthoBasis OrthoBasis::laguerre(double pole, std::size_t count, std::size_t window) {
  if (!(std::abs(pole) < 1.0)) throw DomainError("Laguerre pole must satisfy |a| < 1");
  if (count < 1 || count > window) throw ConfigError("Laguerre basis needs 1 <= count <= window");
  const std::size_t minimal = minimal_laguerre_window(pole);
  if (window < minimal) {
    throw ConfigError("Laguerre window T=" + std::to_string(window) + " is too short for a=" +
                      format_double(pole) + "; the minimal T is " + std::to_string(minimal));
  }
  const auto t_len = static_cast<Eigen::Index>(window);
  Eigen::MatrixXd v(t_len, static_cast<Eigen::Index>(count));
  const double head = std::sqrt(1.0 - pole * pole);
  double power = 1.0;
  for (Eigen::Index t = 0; t < t_len; ++t) {
    v(t, 0) = head * power;
    power *= pole;
  }
  for (Eigen::Index k = 1; k < v.cols(); ++k) {
    double y_prev = 0.0, x_prev = 0.0;
    for (Eigen::Index t = 0; t < t_len; ++t) {
      const double x = v(t, k - 1);
      const double y = pole * y_prev + x_prev - pole * x;
      v(t, k) = y;
      y_prev = y;
      x_prev = x;
    }
  }
  require_orthonormal(v, "Laguerre basis a=" + format_double(pole) + " n=" +
                             std::to_string(count) + " T=" + std::to_string(window) +
                             " (increase T)");
  return OrthoBasis(BasisKind::Laguerre, pole, 0, std::move(v));
}

OrthoBasis OrthoBasis::random_orthogonal(std::size_t count, std::size_t window,
                                         std::uint64_t seed) {
  if (count < 1 || count > window) throw ConfigError("random basis needs 1 <= count <= window");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto rows = static_cast<Eigen::Index>(window);
  const auto cols = static_cast<Eigen::Index>(count);
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  // Fix column signs so that R has a positive diagonal.
  const auto& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return OrthoBasis(BasisKind::RandomOrthogonal, 0.0, seed, std::move(q));
}

OrthoBasis OrthoBasis::from_columns(Eigen::MatrixXd columns) {
  if (columns.cols() < 1 || columns.rows() < columns.cols()) {
    throw ConfigError("basis columns must be non-empty with count <= window");
  }
  require_orthonormal(columns, "literal basis");
  return OrthoBasis(BasisKind::Literal, 0.0, 0, std::move(columns));
}

double OrthoBasis::value(std::size_t i, std::size_t x) const {
  if (i < 1 || i > size()) throw ConfigError("basis index " + std::to_string(i) + " out of range");
  if (x < 1) throw DomainError("basis argument must be >= 1");
  if (x > window()) return 0.0;
  return vectors_(static_cast<Eigen::Index>(x - 1), static_cast<Eigen::Index>(i - 1));
}

double OrthoBasis::gram_deviation() const {
  const Eigen::MatrixXd g = vectors_.transpose() * vectors_;
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

bool OrthoBasis::has_canonical_support() const {
  return kind_ == BasisKind::Canonical || (kind_ == BasisKind::Laguerre && pole_ == 0.0);
}

std::string OrthoBasis::describe() const {
  const std::string shape = "n=" + std::to_string(size()) + ",T=" + std::to_string(window());
  switch (kind_) {
    case BasisKind::Canonical:
      return "canonical(" + shape + ")";
    case BasisKind::Laguerre:
      return "laguerre(a=" + format_double(pole_) + "," + shape + ")";
    case BasisKind::RandomOrthogonal:
      return "random-orthogonal(seed=" + std::to_string(seed_) + "," + shape + ")";
    case BasisKind::Literal:
      return "literal(" + shape + ")";
  }
  return "?";
}

std::size_t minimal_laguerre_window(double pole) {
  if (!(std::abs(pole) < 1.0)) throw DomainError("Laguerre pole must satisfy |a| < 1");
  const double a = std::abs(pole);
  if (a == 0.0) return 1;
  auto t = static_cast<std::size_t>(std::floor(std::log(kLaguerreTailTolerance) / std::log(a)));
  while (std::pow(a, static_cast<double>(t)) >= kLaguerreTailTolerance) ++t;
  while (t > 1 && std::pow(a, static_cast<double>(t - 1)) < kLaguerreTailTolerance) --t;
  return std::max<std::size_t>(t, 1);
}

std::size_t orthonormal_laguerre_window(double pole, std::size_t count) {
  std::size_t t = std::max(minimal_laguerre_window(pole), count);
  for (; t <= (std::size_t{1} << 22); t *= 2) {
    try {
      (void)OrthoBasis::laguerre(pole, count, t);
      return t;
    } catch (const ConfigError&) {
    }
  }
  throw ResourceError("no Laguerre window up to 2^22 holds " + std::to_string(count) +
                      " orthonormal functions for a=" + format_double(pole));
}

OrthoBasis laguerre_basis(double pole, std::size_t count, std::size_t window) {
  return OrthoBasis::laguerre(pole, count, window);
}

L1Profile l1_profile(const OrthoBasis& basis, std::size_t count) {
  if (count < 1 || count > basis.size()) throw ConfigError("profile count out of range");
  L1Profile p;
  p.linear_constant = 0.0;
  p.uniform_bound = 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 1; i <= count; ++i) {
    const double n = basis.vector(i).cwiseAbs().sum();
    p.norms.push_back(n);
    p.linear_constant = std::max(p.linear_constant, n / static_cast<double>(i));
    p.uniform_bound = std::max(p.uniform_bound, n);
    const double x = std::log(static_cast<double>(i)), y = std::log(n);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(count);
  const double den = m * sxx - sx * sx;
  p.growth_exponent = count >= 2 && den > 0.0 ? (m * sxy - sx * sy) / den : 0.0;
  return p;
}

// ---------------------------------------------------------------------------

EigenLaw EigenLaw::power_law(double nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw ConfigError("power-law eigenvalue exponent must be finite and >= 0");
  }
  return EigenLaw(Kind::PowerLaw, nu, {});
}

EigenLaw EigenLaw::geometric(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("geometric eigenvalue ratio must lie in [0, 1]");
  return EigenLaw(Kind::Geometric, beta, {});
}

EigenLaw EigenLaw::literal(std::vector<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
      throw ConfigError("eigenvalues must be finite and non-negative");
    }
    if (i > 0 && values[i] > values[i - 1]) throw ConfigError("eigenvalues must be non-increasing");
  }
  return EigenLaw(Kind::Literal, 0.0, std::move(values));
}

EigenLaw EigenLaw::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("eigenvalue law '" + std::string(text) + "' must look like kind:parameter");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view arg = text.substr(colon + 1);
  if (kind == "power") return power_law(parse_double(arg, "eigenvalue exponent"));
  if (kind == "geometric") return geometric(parse_double(arg, "eigenvalue ratio"));
  if (kind == "literal") {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= arg.size()) {
      const auto comma = arg.find(',', start);
      const auto end = comma == std::string_view::npos ? arg.size() : comma;
      values.push_back(parse_double(arg.substr(start, end - start), "eigenvalue"));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return literal(std::move(values));
  }
  throw ConfigError("unknown eigenvalue law '" + std::string(kind) + "'");
}

double EigenLaw::operator()(std::size_t i) const {
  if (i < 1) throw DomainError("eigenvalue index must be >= 1");
  switch (kind_) {
    case Kind::PowerLaw:
      return std::pow(static_cast<double>(i), -param_);
    case Kind::Geometric:
      return std::pow(param_, static_cast<double>(i));
    case Kind::Literal:
      return i <= values_.size() ? values_[i - 1] : 0.0;
  }
  return 0.0;
}

bool EigenLaw::summable() const {
  switch (kind_) {
    case Kind::PowerLaw:
      return param_ > 1.0;
    case Kind::Geometric:
      return param_ < 1.0;
    case Kind::Literal:
      return true;
  }
  return false;
}

double EigenLaw::tail_sum(std::size_t n) const {
  if (!summable()) return kInf;
  switch (kind_) {
    case Kind::PowerLaw:
      if (n == 0) return std::riemann_zeta(param_);
      // Integral comparison: sum_{i>n} i^-nu <= int_n^inf x^-nu dx.
      return std::pow(static_cast<double>(n), 1.0 - param_) / (param_ - 1.0);
    case Kind::Geometric:
      return std::pow(param_, static_cast<double>(n + 1)) / (1.0 - param_);
    case Kind::Literal: {
      double s = 0.0;
      for (std::size_t i = n; i < values_.size(); ++i) s += values_[i];
      return s;
    }
  }
  return kInf;
}

std::string EigenLaw::to_string() const {
  switch (kind_) {
    case Kind::PowerLaw:
      return "power:" + format_double(param_);
    case Kind::Geometric:
      return "geometric:" + format_double(param_);
    case Kind::Literal: {
      std::string s = "literal:";
      for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) s += ',';
        s += format_double(values_[i]);
      }
      return s;
    }
  }
  return "?";
}

std::string MercerModel::describe() const {
  return "mercer(" + basis.describe() + ",lambda=" + eigenvalues.to_string() + ")";
}

// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd law_values(const EigenLaw& law, std::size_t n) {
  Eigen::VectorXd l(static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i <= n; ++i) l(static_cast<Eigen::Index>(i - 1)) = law(i);
  return l;
}

class MercerSource final : public EntrySource {
 public:
  explicit MercerSource(const MercerModel& model) : describe_(model.describe()) {
    const Eigen::VectorXd root = law_values(model.eigenvalues, model.basis.size()).cwiseSqrt();
    features_ = model.basis.matrix() * root.asDiagonal();
  }

  double entry(std::size_t i, std::size_t j) const override {
    if (i < 1 || j < 1 || i > window() || j > window()) {
      throw DomainError("index (" + std::to_string(i) + "," + std::to_string(j) +
                        ") outside the synthesis window 1.." + std::to_string(window()));
    }
    return features_.row(static_cast<Eigen::Index>(i - 1))
        .dot(features_.row(static_cast<Eigen::Index>(j - 1)));
  }
  std::size_t window() const override { return static_cast<std::size_t>(features_.rows()); }
  std::string describe() const override { return describe_; }

 private:
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> features_;
  std::string describe_;
};

}  // namespace

SynthesizedKernel synthesize_kernel(const MercerModel& model, std::size_t d) {
  if (d < 1 || d > model.basis.window()) {
    throw ConfigError("synthesis order d=" + std::to_string(d) + " must lie in 1.." +
                      std::to_string(model.basis.window()) + " (the basis window)");
  }
  const std::size_t n = model.basis.size();
  double residual = 0.0;
  if (!(model.basis.has_canonical_support() && n >= d)) {
    residual = model.eigenvalues.tail_sum(n);
    if (!std::isfinite(residual)) {
      throw ConfigError("eigenvalue law " + model.eigenvalues.to_string() +
                        " is not summable and the basis is truncated at n=" + std::to_string(n) +
                        "; the dropped series terms are unbounded");
    }
  }
  const auto dd = static_cast<Eigen::Index>(d);
  const Eigen::MatrixXd rows = model.basis.matrix().topRows(dd);
  const Eigen::VectorXd lambda = law_values(model.eigenvalues, n);
  Eigen::MatrixXd k = rows * lambda.asDiagonal() * rows.transpose();
  k = 0.5 * (k + k.transpose()).eval();

  SynthesizedKernel out;
  out.kernel.entries = std::move(k);
  out.kernel.source = model.describe() + " d=" + std::to_string(d);
  out.residual_bound = residual;
  out.terms = n;
  const auto check = validate_psd(out.kernel);
  if (!check.psd) {
    throw NumericalError("synthesized kernel is not PSD (min eigenvalue " +
                         format_double(check.min_eigenvalue) + ")");
  }
  return out;
}

KernelSpec as_kernel_spec(const MercerModel& model) {
  return KernelSpec::synthesized(std::make_shared<MercerSource>(model));
}

SufficientTestResult sufficient_stability_test(const MercerModel& model) {
  const std::size_t n = model.basis.size();
  const L1Profile profile = l1_profile(model.basis, n);
  SufficientTestResult r;
  r.certification = Certification::NotCertified;
  r.grid = doubling_grid(n);
  double s = 0.0;
  std::size_t next = 0;
  for (std::size_t i = 1; i <= n && next < r.grid.size(); ++i) {
    s += model.eigenvalues(i) * profile.norms[i - 1] * profile.norms[i - 1];
    if (i == r.grid[next]) {
      r.partial_sums.push_back(s);
      ++next;
    }
  }
  if (r.grid.size() < 3) {
    r.probe.rule = "none";
    r.probe.trend = Trend::Undecided;
    return r;
  }
  r.probe = divergence_probe(r.grid, r.partial_sums);
  if (r.probe.trend == Trend::Converging) r.certification = Certification::Certified;
  return r;
}

BoundedL1Result bounded_l1_test(const MercerModel& model, double bound) {
  if (!(bound > 0.0)) throw ConfigError("l1 bound must be positive");
  BoundedL1Result r;
  r.observed_bound = 0.0;
  for (std::size_t i = 1; i <= model.basis.size(); ++i) {
    if (model.eigenvalues(i) > 0.0) {
      r.observed_bound = std::max(r.observed_bound, model.basis.vector(i).cwiseAbs().sum());
    }
  }
  if (r.observed_bound > bound * (1.0 + 1e-12)) {
    r.verdict = BoundedL1Verdict::Inapplicable;
    return r;
  }
  // The criterion concerns the eigenvalue law itself, so the sums run past the
  // materialized basis.
  for (unsigned e = 4; e <= 20; ++e) r.grid.push_back(std::size_t{1} << e);
  double s = 0.0;
  std::size_t i = 1;
  for (std::size_t target : r.grid) {
    for (; i <= target; ++i) s += model.eigenvalues(i);
    r.partial_sums.push_back(s);
  }
  r.probe = divergence_probe(r.grid, r.partial_sums);
  switch (r.probe->trend) {
    case Trend::Converging:
      r.verdict = BoundedL1Verdict::Stable;
      break;
    case Trend::Diverging:
      r.verdict = BoundedL1Verdict::Unstable;
      break;
    case Trend::Undecided:
      r.verdict = BoundedL1Verdict::Undecided;
      break;
  }
  return r;
}

NormEstimate ns_condition_estimate(const MercerModel& model, std::size_t d,
                                   const NsOptions& options) {
  if (d < 1 || d > model.basis.window()) {
    throw ConfigError("order d=" + std::to_string(d) + " outside the basis window");
  }
  const std::size_t n = model.basis.size();
  const auto dd = static_cast<Eigen::Index>(d);
  const Eigen::VectorXd lambda = law_values(model.eigenvalues, n);
  // Column x of bt is the x-th row of the windowed basis: a flip of u_x moves
  // the projections p = B^T u along it.
  const Eigen::MatrixXd bt = model.basis.matrix().topRows(dd).transpose();
  const auto& simd = simd::active();

  auto value_of = [&](const std::vector<int>& u) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (Eigen::Index x = 0; x < dd; ++x) p += u[static_cast<std::size_t>(x)] * bt.col(x);
    return simd.weighted_sq_sum(lambda.data(), p.data(), n);
  };

  NormEstimate out;
  out.d = d;
  if (d <= options.cap && d <= 62) {
    out.kind = BoundKind::Exact;
    out.method = NormMethod::GrayCodeEnumeration;
    std::vector<int> u(d, 1);
    Eigen::VectorXd p = bt.rowwise().sum();
    double best = simd.weighted_sq_sum(lambda.data(), p.data(), n);
    std::uint64_t best_code = 0;
    const std::uint64_t steps = std::uint64_t{1} << (d - 1);
    for (std::uint64_t g = 1; g < steps; ++g) {
      const auto x = static_cast<std::size_t>(1 + std::countr_zero(g));
      simd.axpy(-2.0 * u[x], bt.col(static_cast<Eigen::Index>(x)).data(), p.data(), n);
      u[x] = -u[x];
      const double v = simd.weighted_sq_sum(lambda.data(), p.data(), n);
      if (v > best) {
        best = v;
        best_code = g ^ (g >> 1);
      }
    }
    out.witness.assign(d, 1);
    for (std::size_t b = 0; b + 1 < d; ++b) {
      if ((best_code >> b) & 1U) out.witness[b + 1] = -1;
    }
    out.value = value_of(out.witness);
    return out;
  }

  out.kind = BoundKind::LowerBound;
  out.method = NormMethod::SignFlipAscent;
  out.value = -kInf;
  // Flip gain for coordinate x: 4 (sum_h lambda_h b_xh^2 - u_x <lambda o b_x, p>).
  const Eigen::MatrixXd lb = lambda.asDiagonal() * bt;
  const Eigen::VectorXd self = (lb.cwiseProduct(bt)).colwise().sum().transpose();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t r = 0; r < std::max<std::size_t>(options.restarts, 1); ++r) {
    std::vector<int> u = restart_signs(d, options.seed, r);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (Eigen::Index x = 0; x < dd; ++x) p += u[static_cast<std::size_t>(x)] * bt.col(x);
    double q = simd.weighted_sq_sum(lambda.data(), p.data(), n);
    for (bool improved = true; improved;) {
      improved = false;
      for (Eigen::Index x = 0; x < dd; ++x) {
        const auto xi = static_cast<std::size_t>(x);
        const double cross = simd.dot(lb.col(x).data(), p.data(), n);
        const double gain = 4.0 * (self(x) - u[xi] * cross);
        if (gain > 64.0 * eps * (std::abs(q) + 4.0 * std::abs(self(x)) + 4.0 * std::abs(cross))) {
          simd.axpy(-2.0 * u[xi], bt.col(x).data(), p.data(), n);
          u[xi] = -u[xi];
          q += gain;
          improved = true;
          break;
        }
      }
    }
    const double v = value_of(u);
    if (v > out.value) {
      out.value = v;
      out.witness = std::move(u);
    }
  }
  return out;
}

std::vector<std::pair<std::string, MercerModel>> model_zoo() {
  std::vector<std::pair<std::string, MercerModel>> zoo;
  const auto canonical = OrthoBasis::canonical(256, 256);
  zoo.emplace_back("canonical-power-2", MercerModel{canonical, EigenLaw::power_law(2.0)});
  zoo.emplace_back("canonical-power-1", MercerModel{canonical, EigenLaw::power_law(1.0)});
  zoo.emplace_back("canonical-geometric-0.5", MercerModel{canonical, EigenLaw::geometric(0.5)});
  zoo.emplace_back("canonical-literal-3-2-1",
                   MercerModel{canonical, EigenLaw::literal({3.0, 2.0, 1.0})});
  const auto lag = OrthoBasis::laguerre(0.8, 32, 1024);
  for (double nu : {2.0, 2.5, 3.0, 3.5, 4.0}) {
    zoo.emplace_back("laguerre-0.8-power-" + format_double(nu),
                     MercerModel{lag, EigenLaw::power_law(nu)});
  }
  zoo.emplace_back("laguerre-0.5-power-4",
                   MercerModel{OrthoBasis::laguerre(0.5, 32, 512), EigenLaw::power_law(4.0)});
  zoo.emplace_back("laguerre-0-geometric-0.5",
                   MercerModel{OrthoBasis::laguerre(0.0, 64, 64), EigenLaw::geometric(0.5)});
  return zoo;
}

std::string to_string(Certification c) {
  return c == Certification::Certified ? "Certified" : "NotCertified";
}

std::string to_string(BoundedL1Verdict v) {
  switch (v) {
    case BoundedL1Verdict::Stable: return "Stable";
    case BoundedL1Verdict::Unstable: return "Unstable";
    case BoundedL1Verdict::Undecided: return "Undecided";
    case BoundedL1Verdict::Inapplicable: return "Inapplicable";
  }
  return "?";
}

std::string to_string(BasisKind k) {
  switch (k) {
    case BasisKind::Canonical: return "canonical";
    case BasisKind::Laguerre: return "laguerre";
    case BasisKind::RandomOrthogonal: return "random-orthogonal";
    case BasisKind::Literal: return "literal";
  }
  return "?";
}

}  // namespace srkhs
