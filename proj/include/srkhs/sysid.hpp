// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "srkhs/basis.hpp"
#include "srkhs/kernel.hpp"
#include "srkhs/spectral.hpp"

namespace srkhs {

/// Scalar output samples y_k of a causal convolution observed at instants t_k.
struct RegressionProblem {
  std::vector<double> input;
  /// 1-based observation instants, ascending.
  std::vector<std::size_t> instants;
  std::vector<double> observations;
  /// Noise level used to generate the data (informational).
  double sigma = 0.0;
  /// Impulse response window T_f.
  std::size_t window = 0;

  std::size_t size() const { return observations.size(); }
  /// Throws ConfigError when the fields are inconsistent.
  void validate() const;
  /// Phi(k, j) = u(t_k - j + 1) for j <= t_k, zero otherwise (N x T_f).
  Eigen::MatrixXd regression_matrix() const;
  /// Columns of Phi past this index are identically zero.
  std::size_t active_width() const;
  Eigen::VectorXd y() const;
};

enum class InputKind { WhiteNoise, FilteredNoise, Step, Impulse };

struct InputSpec {
  InputKind kind = InputKind::WhiteNoise;
  /// Pole of the first-order filter for FilteredNoise.
  double pole = 0.9;
};

struct Simulation {
  RegressionProblem problem;
  Eigen::VectorXd truth;
};

/// y_k = sum_j f0(j) u(t_k - j + 1) + e_k with e_k ~ N(0, sigma^2), t_k = k.
Simulation simulate(const Eigen::VectorXd& truth, const InputSpec& input, std::size_t n,
                    double sigma, std::uint64_t seed);

/// f0(j) = sum_m gain_m pole_m^(j-1), j = 1..window.
Eigen::VectorXd decaying_exponentials(std::size_t window,
                                      std::span<const std::pair<double, double>> modes);

enum class EstimatorKind { LS, ReLS, TruncMercer };

struct Estimate {
  EstimatorKind kind;
  std::size_t order = 0;
  double gamma = 0.0;
  Eigen::VectorXd impulse_response;
  /// Basis coefficients (LS, TruncMercer) or representer weights c (ReLS).
  Eigen::VectorXd coefficients;
  double rss = 0.0;
  /// Dominant operation count of the solve.
  double cost_proxy = 0.0;
  bool rank_deficient = false;
  double condition = 1.0;
  std::vector<std::string> warnings;

  std::string tag() const;
};

Estimate ls_estimate(const RegressionProblem& problem, const OrthoBasis& basis, std::size_t d);

enum class OrderCriterion { AIC, CrossValidation };

struct OrderSelection {
  std::size_t order;
  std::vector<std::size_t> candidates;
  std::vector<double> scores;
  bool rss_floored = false;
};

OrderSelection select_order(const RegressionProblem& problem, const OrthoBasis& basis,
                            std::span<const std::size_t> candidates, OrderCriterion criterion,
                            std::size_t folds = 5);

Estimate rels_estimate(const RegressionProblem& problem, const KernelSpec& kernel, double gamma);
Estimate rels_estimate(const RegressionProblem& problem, const TruncatedKernel& kernel,
                       double gamma);

/// Ridge problem in eigen-coordinates with penalty gamma sum a_i^2 / lambda_i.
Estimate trunc_mercer_estimate(const RegressionProblem& problem, const Spectrum& spectrum,
                               double gamma, std::size_t d);

/// sum_k (y_k - L_k[sum a_i rho_i])^2 + gamma sum a_i^2 / lambda_i
double rels3_objective(const RegressionProblem& problem, const Spectrum& spectrum, double gamma,
                       const Eigen::VectorXd& coefficients);

struct SweepRow {
  std::size_t d;
  /// ||f^(d) - f|| / ||f|| against full ReLS.
  double l2_gap;
  /// sum_i (a_i^(d) - a_i)^2 / lambda_i over the positive modes.
  double rkhs_gap;
  /// Objective excess J(a^(d)) - J(a).
  double objective_gap;
  double cost_proxy;
};

/// Reference is ReLS on spectrum.source.
std::vector<SweepRow> sweep_d(const RegressionProblem& problem, const Spectrum& spectrum,
                              double gamma, std::span<const std::size_t> grid);

struct GammaSelection {
  double gamma;
  std::vector<double> candidates;
  std::vector<double> scores;
};

/// k-fold CV (interleaved folds) of ReLS prediction error.
GammaSelection select_gamma(const RegressionProblem& problem, const TruncatedKernel& kernel,
                            std::span<const double> candidates, std::size_t folds = 5);

std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// 100 (1 - ||f0 - f|| / ||f0 - mean(f0)||)
double fit_percent(const Eigen::VectorXd& truth, const Eigen::VectorXd& estimate);

std::string to_string(EstimatorKind k);

}  // namespace srkhs
