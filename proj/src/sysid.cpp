// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "srkhs/sysid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "srkhs/error.hpp"

namespace srkhs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be positive and finite");
}

RegressionProblem subset(const RegressionProblem& p, const std::vector<std::size_t>& rows) {
  RegressionProblem out;
  out.input = p.input;
  out.sigma = p.sigma;
  out.window = p.window;
  for (std::size_t k : rows) {
    out.instants.push_back(p.instants[k]);
    out.observations.push_back(p.observations[k]);
  }
  return out;
}

// Interleaved folds: row k belongs to fold k mod folds.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> fold_rows(std::size_t n,
                                                                        std::size_t folds,
                                                                        std::size_t f) {
  std::vector<std::size_t> train, test;
  for (std::size_t k = 0; k < n; ++k) (k % folds == f ? test : train).push_back(k);
  return {train, test};
}

void require_folds(std::size_t n, std::size_t folds) {
  if (folds < 2 || folds > n) {
    throw ConfigError("cross-validation needs 2 <= folds <= N (N=" + std::to_string(n) + ")");
  }
}

// Basis vectors restricted to the impulse-response window (zero padded).
Eigen::MatrixXd windowed(const Eigen::MatrixXd& vectors, std::size_t window, std::size_t cols) {
  const auto tf = static_cast<Eigen::Index>(window);
  const auto c = static_cast<Eigen::Index>(cols);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(tf, c);
  const Eigen::Index rows = std::min(tf, vectors.rows());
  out.topRows(rows) = vectors.topLeftCorner(rows, c);
  return out;
}

}  // namespace

void RegressionProblem::validate() const {
  if (observations.empty()) throw ConfigError("regression problem needs N >= 1 observations");
  if (instants.size() != observations.size()) {
    throw ConfigError("observation instants and values differ in length");
  }
  if (window < 1) throw ConfigError("impulse-response window must be >= 1");
  for (std::size_t k = 0; k < instants.size(); ++k) {
    if (instants[k] < 1) throw ConfigError("observation instants are 1-based");
    if (k > 0 && instants[k] <= instants[k - 1]) throw ConfigError("observation instants must ascend");
    if (instants[k] > input.size()) {
      throw ConfigError("instant t=" + std::to_string(instants[k]) + " exceeds the input length " +
                        std::to_string(input.size()));
    }
  }
}

Eigen::MatrixXd RegressionProblem::regression_matrix() const {
  validate();
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(window));
  for (Eigen::Index k = 0; k < n; ++k) {
    const std::size_t t = instants[static_cast<std::size_t>(k)];
    for (std::size_t j = 1; j <= std::min(t, window); ++j) {
      phi(k, static_cast<Eigen::Index>(j - 1)) = input[t - j];
    }
  }
  return phi;
}

std::size_t RegressionProblem::active_width() const {
  return std::min(window, instants.empty() ? std::size_t{0} : instants.back());
}

Eigen::VectorXd RegressionProblem::y() const {
  return Eigen::Map<const Eigen::VectorXd>(observations.data(),
                                           static_cast<Eigen::Index>(observations.size()));
}

Simulation simulate(const Eigen::VectorXd& truth, const InputSpec& input, std::size_t n,
                    double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ConfigError("noise level sigma must be >= 0");
  if (n < 1) throw ConfigError("simulation needs N >= 1");
  if (truth.size() < 1) throw ConfigError("true impulse response is empty");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  Simulation sim;
  auto& p = sim.problem;
  p.input.resize(n);
  switch (input.kind) {
    case InputKind::WhiteNoise:
      for (auto& u : p.input) u = normal(rng);
      break;
    case InputKind::FilteredNoise: {
      if (!(std::abs(input.pole) < 1.0)) throw ConfigError("input filter pole must satisfy |a| < 1");
      double state = 0.0;
      for (auto& u : p.input) u = state = input.pole * state + normal(rng);
      break;
    }
    case InputKind::Step:
      std::fill(p.input.begin(), p.input.end(), 1.0);
      break;
    case InputKind::Impulse:
      std::fill(p.input.begin(), p.input.end(), 0.0);
      p.input[0] = 1.0;
      break;
  }
  p.sigma = sigma;
  p.window = static_cast<std::size_t>(truth.size());
  p.instants.resize(n);
  std::iota(p.instants.begin(), p.instants.end(), std::size_t{1});
  p.observations.assign(n, 0.0);
  const Eigen::VectorXd y = p.regression_matrix() * truth;
  for (std::size_t k = 0; k < n; ++k) {
    p.observations[k] = y(static_cast<Eigen::Index>(k)) + (sigma > 0.0 ? sigma * normal(rng) : 0.0);
  }
  sim.truth = truth;
  return sim;
}

Eigen::VectorXd decaying_exponentials(std::size_t window,
                                      std::span<const std::pair<double, double>> modes) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(window));
  for (const auto& [gain, pole] : modes) {
    double power = 1.0;
    for (Eigen::Index j = 0; j < f.size(); ++j) {
      f(j) += gain * power;
      power *= pole;
    }
  }
  return f;
}

std::string Estimate::tag() const {
  switch (kind) {
    case EstimatorKind::LS:
      return "LS(d=" + std::to_string(order) + ")";
    case EstimatorKind::ReLS:
      return "ReLS(gamma=" + format_double(gamma) + ")";
    case EstimatorKind::TruncMercer:
      return "TruncMercer(gamma=" + format_double(gamma) + ",d=" + std::to_string(order) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------

Estimate ls_estimate(const RegressionProblem& problem, const OrthoBasis& basis, std::size_t d) {
  if (d > basis.size()) {
    throw ConfigError("LS order d=" + std::to_string(d) + " exceeds the basis count " +
                      std::to_string(basis.size()));
  }
  const Eigen::MatrixXd phi = problem.regression_matrix();
  const Eigen::VectorXd y = problem.y();
  Estimate e;
  e.kind = EstimatorKind::LS;
  e.order = d;
  if (d == 0) {
    e.impulse_response = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(problem.window));
    e.rss = y.squaredNorm();
    return e;
  }
  const Eigen::MatrixXd r = windowed(basis.matrix(), problem.window, d);
  const Eigen::MatrixXd g = phi * r;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  e.condition = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : kInf;
  e.rank_deficient = static_cast<std::size_t>(svd.rank()) < d;
  if (e.rank_deficient) {
    e.warnings.push_back("regressor matrix has rank " + std::to_string(svd.rank()) + " < d=" +
                         std::to_string(d) + "; minimum-norm solution");
  }
  e.coefficients = svd.solve(y);
  e.impulse_response = r * e.coefficients;
  e.rss = (y - g * e.coefficients).squaredNorm();
  e.cost_proxy = static_cast<double>(problem.size()) * static_cast<double>(d * d);
  return e;
}

OrderSelection select_order(const RegressionProblem& problem, const OrthoBasis& basis,
                            std::span<const std::size_t> candidates, OrderCriterion criterion,
                            std::size_t folds) {
  if (candidates.empty()) throw ConfigError("order selection needs at least one candidate");
  OrderSelection sel;
  sel.candidates.assign(candidates.begin(), candidates.end());
  std::sort(sel.candidates.begin(), sel.candidates.end());
  sel.candidates.erase(std::unique(sel.candidates.begin(), sel.candidates.end()),
                       sel.candidates.end());
  const auto n = static_cast<double>(problem.size());
  const double ynorm = problem.y().norm();
  // Residuals below rounding level of y are treated as exact fits.
  const double floor = std::max(1e-300, (1e-10 * ynorm) * (1e-10 * ynorm));
  if (criterion == OrderCriterion::CrossValidation) require_folds(problem.size(), folds);

  for (std::size_t d : sel.candidates) {
    double score = 0.0;
    if (criterion == OrderCriterion::AIC) {
      double rss = ls_estimate(problem, basis, d).rss;
      if (rss < floor) {
        rss = floor;
        sel.rss_floored = true;
      }
      score = n * std::log(rss / n) + 2.0 * static_cast<double>(d);
    } else {
      for (std::size_t f = 0; f < folds; ++f) {
        const auto [train, test] = fold_rows(problem.size(), folds, f);
        const Estimate est = ls_estimate(subset(problem, train), basis, d);
        const RegressionProblem held = subset(problem, test);
        score += (held.y() - held.regression_matrix() * est.impulse_response).squaredNorm();
      }
    }
    sel.scores.push_back(score);
  }
  const auto best = std::min_element(sel.scores.begin(), sel.scores.end());
  sel.order = sel.candidates[static_cast<std::size_t>(best - sel.scores.begin())];
  return sel;
}

// ---------------------------------------------------------------------------

Estimate rels_estimate(const RegressionProblem& problem, const KernelSpec& kernel, double gamma) {
  require_gamma(gamma);
  problem.validate();
  const TruncatedKernel k = truncate(kernel, problem.window);
  Estimate e = rels_estimate(problem, k, gamma);
  const double head = k(0, 0);
  const double tail = k(problem.window - 1, problem.window - 1);
  if (tail > 1e-10 * std::abs(head)) {
    e.warnings.push_back("kernel diagonal at T_f is " + format_double(tail) +
                         ", above 1e-10 K(1,1); the window may be too short");
  }
  return e;
}

Estimate rels_estimate(const RegressionProblem& problem, const TruncatedKernel& kernel,
                       double gamma) {
  require_gamma(gamma);
  if (kernel.order() != problem.window) {
    throw ConfigError("kernel order " + std::to_string(kernel.order()) +
                      " does not match the impulse-response window " +
                      std::to_string(problem.window));
  }
  const Eigen::MatrixXd phi = problem.regression_matrix();
  const auto w = static_cast<Eigen::Index>(problem.active_width());
  const auto n = static_cast<Eigen::Index>(problem.size());
  const auto phi_a = phi.leftCols(w);
  // K Phi^T restricted to the columns Phi actually touches.
  const Eigen::MatrixXd kphi = kernel.entries.leftCols(w) * phi_a.transpose();
  Eigen::MatrixXd a = phi_a * kphi.topRows(w);
  a = 0.5 * (a + a.transpose()).eval();
  a.diagonal().array() += gamma;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Cholesky factorization of Phi K Phi^T + gamma I failed (gamma=" +
                         format_double(gamma) + ")");
  }
  const Eigen::VectorXd y = problem.y();
  Estimate e;
  e.kind = EstimatorKind::ReLS;
  e.gamma = gamma;
  e.order = kernel.order();
  e.coefficients = llt.solve(y);
  e.impulse_response = kphi * e.coefficients;
  e.rss = (y - phi * e.impulse_response).squaredNorm();
  const double nd = static_cast<double>(n), wd = static_cast<double>(w);
  e.cost_proxy = nd * nd * nd + nd * wd * wd;
  return e;
}

namespace {

void require_spectrum_window(const RegressionProblem& problem, const Spectrum& spectrum) {
  if (spectrum.d != problem.window) {
    throw ConfigError("spectrum order " + std::to_string(spectrum.d) +
                      " does not match the impulse-response window " +
                      std::to_string(problem.window));
  }
}

}  // namespace

Estimate trunc_mercer_estimate(const RegressionProblem& problem, const Spectrum& spectrum,
                               double gamma, std::size_t d) {
  require_gamma(gamma);
  require_spectrum_window(problem, spectrum);
  if (d < 1 || d > spectrum.d) throw ConfigError("truncation order d must lie in 1..T_f");
  if (!(spectrum.eigenvalue(d) > 0.0)) {
    throw ConfigError("eigenvalue lambda_" + std::to_string(d) +
                      " is not positive; d must not exceed the positive rank " +
                      std::to_string(spectrum.positive_rank(0.0)));
  }
  const auto dd = static_cast<Eigen::Index>(d);
  const auto w = static_cast<Eigen::Index>(problem.active_width());
  const Eigen::MatrixXd phi = problem.regression_matrix();
  const Eigen::VectorXd root = spectrum.eigenvalues.head(dd).cwiseSqrt();
  // Scaled coordinates b = Lambda^{-1/2} a keep the normal matrix well
  // conditioned when trailing eigenvalues are tiny.
  const Eigen::MatrixXd g = phi.leftCols(w) * spectrum.eigenvectors.topLeftCorner(w, dd);
  const Eigen::MatrixXd h = g * root.asDiagonal();
  Eigen::MatrixXd normal = h.transpose() * h;
  normal.diagonal().array() += gamma;
  Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Cholesky factorization failed in the truncated Mercer solve (d=" +
                         std::to_string(d) + ")");
  }
  const Eigen::VectorXd y = problem.y();
  Estimate e;
  e.kind = EstimatorKind::TruncMercer;
  e.gamma = gamma;
  e.order = d;
  e.coefficients = root.cwiseProduct(llt.solve(h.transpose() * y));
  e.impulse_response = spectrum.eigenvectors.leftCols(dd) * e.coefficients;
  e.rss = (y - g * e.coefficients).squaredNorm();
  const double nd = static_cast<double>(problem.size()), d2 = static_cast<double>(d);
  e.cost_proxy = nd * d2 * d2 + d2 * d2 * d2;
  const double cond = spectrum.eigenvalue(1) / spectrum.eigenvalue(d);
  e.condition = cond;
  return e;
}

double rels3_objective(const RegressionProblem& problem, const Spectrum& spectrum, double gamma,
                       const Eigen::VectorXd& coefficients) {
  require_spectrum_window(problem, spectrum);
  const auto d = coefficients.size();
  if (d > static_cast<Eigen::Index>(spectrum.d)) throw ConfigError("too many coefficients");
  const Eigen::VectorXd f = spectrum.eigenvectors.leftCols(d) * coefficients;
  const double fit = (problem.y() - problem.regression_matrix() * f).squaredNorm();
  double penalty = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double a = coefficients(i);
    if (a == 0.0) continue;
    const double l = spectrum.eigenvalues(i);
    if (!(l > 0.0)) return kInf;
    penalty += a * a / l;
  }
  return fit + gamma * penalty;
}

std::vector<SweepRow> sweep_d(const RegressionProblem& problem, const Spectrum& spectrum,
                              double gamma, std::span<const std::size_t> grid) {
  require_spectrum_window(problem, spectrum);
  TruncatedKernel k;
  k.entries = spectrum.source;
  k.source = spectrum.source_tag;
  const Estimate ref = rels_estimate(problem, k, gamma);
  const std::size_t r = spectrum.positive_rank(0.0);
  const auto rr = static_cast<Eigen::Index>(r);
  // Eigen-coordinates of the reference: a_i = lambda_i <rho_i, Phi^T c>.
  const auto w = static_cast<Eigen::Index>(problem.active_width());
  const Eigen::VectorXd phit_c =
      problem.regression_matrix().leftCols(w).transpose() * ref.coefficients;
  const Eigen::VectorXd ref_a = spectrum.eigenvalues.head(rr).cwiseProduct(
      spectrum.eigenvectors.topLeftCorner(w, rr).transpose() * phit_c);
  const double ref_obj = rels3_objective(problem, spectrum, gamma, ref_a);
  const double ref_norm = ref.impulse_response.norm();

  std::vector<SweepRow> rows;
  for (std::size_t d : grid) {
    const Estimate e = trunc_mercer_estimate(problem, spectrum, gamma, d);
    SweepRow row;
    row.d = d;
    const double gap = (e.impulse_response - ref.impulse_response).norm();
    row.l2_gap = ref_norm > 0.0 ? gap / ref_norm : gap;
    row.rkhs_gap = 0.0;
    for (Eigen::Index i = 0; i < rr; ++i) {
      const double a = i < static_cast<Eigen::Index>(d) ? e.coefficients(i) : 0.0;
      const double diff = a - ref_a(i);
      row.rkhs_gap += diff * diff / spectrum.eigenvalues(i);
    }
    row.objective_gap = rels3_objective(problem, spectrum, gamma, e.coefficients) - ref_obj;
    row.cost_proxy = e.cost_proxy;
    rows.push_back(row);
  }
  return rows;
}

GammaSelection select_gamma(const RegressionProblem& problem, const TruncatedKernel& kernel,
                            std::span<const double> candidates, std::size_t folds) {
  if (candidates.empty()) throw ConfigError("gamma selection needs at least one candidate");
  require_folds(problem.size(), folds);
  GammaSelection sel;
  sel.candidates.assign(candidates.begin(), candidates.end());
  std::vector<RegressionProblem> train, test;
  for (std::size_t f = 0; f < folds; ++f) {
    const auto [tr, te] = fold_rows(problem.size(), folds, f);
    train.push_back(subset(problem, tr));
    test.push_back(subset(problem, te));
  }
  for (double gamma : sel.candidates) {
    double score = 0.0;
    for (std::size_t f = 0; f < folds; ++f) {
      const Estimate e = rels_estimate(train[f], kernel, gamma);
      score += (test[f].y() - test[f].regression_matrix() * e.impulse_response).squaredNorm();
    }
    sel.scores.push_back(score);
  }
  const auto best = std::min_element(sel.scores.begin(), sel.scores.end());
  sel.gamma = sel.candidates[static_cast<std::size_t>(best - sel.scores.begin())];
  return sel;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw ConfigError("log grid needs 0 < lo <= hi");
  if (count == 1) return {lo};
  std::vector<double> g;
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i) {
    g.push_back(std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1)));
  }
  return g;
}

double fit_percent(const Eigen::VectorXd& truth, const Eigen::VectorXd& estimate) {
  if (truth.size() != estimate.size()) throw ConfigError("fit vectors differ in length");
  const double spread = (truth.array() - truth.mean()).matrix().norm();
  if (spread == 0.0) throw ConfigError("fit is undefined for a constant true response");
  return 100.0 * (1.0 - (truth - estimate).norm() / spread);
}

std::string to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::LS: return "LS";
    case EstimatorKind::ReLS: return "ReLS";
    case EstimatorKind::TruncMercer: return "TruncMercer";
  }
  return "?";
}

}  // namespace srkhs
