// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance criteria 1-9. `acceptance N` runs one criterion, no argument
// runs all of them. Each prints one PASS/FAIL line; the exit code is 1 if
// any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "srkhs/basis.hpp"
#include "srkhs/spectral.hpp"
#include "srkhs/stability.hpp"
#include "srkhs/sysid.hpp"

using namespace srkhs;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<std::size_t> fig2_grid() {
  std::vector<std::size_t> g;
  for (std::size_t d = 200; d <= 2000; d += 200) g.push_back(d);
  return g;
}

ConvergenceOptions scan_options() {
  ConvergenceOptions o;
  o.threads = std::max(1u, std::thread::hardware_concurrency());
  return o;
}

Outcome criterion1() {
  const auto grid = fig2_grid();
  const std::size_t tracked[] = {100};
  const auto scan = convergence_scan(KernelSpec::stable_spline(0.95), grid, tracked, scan_options());
  // Row k-1 holds || rho_100^(200k+200) - rho_100^(200k) ||.
  std::ostringstream s;
  bool decreasing = true;
  for (Eigen::Index k = 1; k <= scan.discrepancies.rows(); ++k) {
    const double v = scan.discrepancies(k - 1, 0);
    s << (k > 1 ? " " : "") << fmt(v);
    if (k > 4 && !(v < scan.discrepancies(k - 2, 0))) decreasing = false;
  }
  const double last = scan.discrepancies(scan.discrepancies.rows() - 1, 0);
  return {decreasing && last < 1e-6,
          "discrepancies [" + s.str() + "], decreasing for k>=4: " + (decreasing ? "yes" : "no") +
              ", final " + fmt(last) + " < 1e-6"};
}

Outcome criterion2() {
  const auto grid = fig2_grid();
  std::vector<std::size_t> tracked(10);
  for (std::size_t i = 0; i < 10; ++i) tracked[i] = i + 1;
  const auto scan = convergence_scan(KernelSpec::stable_spline(0.95), grid, tracked, scan_options());
  double worst = 0.0;
  for (Eigen::Index c = 0; c < scan.eigenvalue_paths.cols(); ++c) {
    for (Eigen::Index r = 1; r < scan.eigenvalue_paths.rows(); ++r) {
      worst = std::max(worst, scan.eigenvalue_paths(r - 1, c) - scan.eigenvalue_paths(r, c));
    }
  }
  return {worst <= 1e-12, "largest decrease along lambda_1..10 paths " + fmt(worst) + " (slack 1e-12)"};
}

Outcome criterion3() {
  std::size_t sandwich = 0, oracle_ok = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t m = 2 + seed % 11;
    const Eigen::MatrixXd k = oracle::random_psd(m, 30000 + seed);
    const double n = inf_one_norm_exact(from_matrix(k)).value;
    const double tr = k.trace();
    if (tr <= n && n <= std::ldexp(tr, static_cast<int>(m))) ++sandwich;
    const double r = oracle::rel(n, oracle::inf_one_norm(k));
    worst = std::max(worst, r);
    if (r <= 1e-12) ++oracle_ok;
  }
  return {sandwich == 200 && oracle_ok == 200,
          "sandwich holds on " + std::to_string(sandwich) + "/200, brute-force agreement on " +
              std::to_string(oracle_ok) + "/200 (max rel diff " + fmt(worst) + ")"};
}

Outcome criterion4() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t m = 1 + seed % 10;
    const Eigen::MatrixXd k = oracle::random_psd(m, 40000 + seed);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
    const double form = oracle::eigen_form_max(eig.eigenvalues(), eig.eigenvectors());
    const double norm = oracle::inf_one_norm(k);
    worst = std::max(worst, oracle::rel(form, norm));

    // Same identity through the library's eigen-coordinate search.
    const Spectrum s = eigendecompose(from_matrix(k));
    std::vector<double> lambda(s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size());
    const MercerModel model{OrthoBasis::from_columns(s.eigenvectors), EigenLaw::literal(lambda)};
    worst = std::max(worst, oracle::rel(ns_condition_estimate(model, m).value, norm));
  }
  return {worst <= 1e-9, "max relative difference " + fmt(worst) + " over 100 matrices (tol 1e-9)"};
}

Outcome criterion5() {
  std::ostringstream s;
  bool ok = true;

  const auto gauss = classify(KernelSpec::gaussian());
  const bool trace_route = std::any_of(gauss.tests.begin(), gauss.tests.end(), [](const TestRecord& t) {
    return t.name.find("trace") != std::string::npos;
  });
  ok &= gauss.verdict == Verdict::AnalyticallyUnstable && gauss.flags.finite_trace() == Tri::No && trace_route;
  s << "gaussian " << to_string(gauss.verdict) << " (finite_trace=" << to_string(gauss.flags.finite_trace())
    << ")";

  const auto spec = KernelSpec::rank_one(Sequence::power(-1));
  const auto r1 = classify(spec);
  ok &= r1.flags.finite_trace() == Tri::Yes && r1.flags.stable() == Tri::No;
  const std::size_t grid[] = {4, 8, 16, 32, 64, 128, 256, 512};
  const auto norms = norm_growth_scan(spec, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const double h = oracle::harmonic(grid[i]);
    worst = std::max(worst, oracle::rel(norms[i].value, h * h));
    if (i > 0 && !(norms[i].value > norms[i - 1].value)) ok = false;
  }
  ok &= worst <= 0.05;
  s << "; rank-one finite_trace=" << to_string(r1.flags.finite_trace()) << " stable="
    << to_string(r1.flags.stable()) << ", norm scan up to " << fmt(norms.back().value)
    << ", max rel diff to H_d^2 " << fmt(worst);

  const auto diag = classify(KernelSpec::diagonal(Sequence::power(-2)));
  const bool l1_route = std::any_of(diag.tests.begin(), diag.tests.end(), [](const TestRecord& t) {
    return t.name == "bounded_l1_route";
  });
  ok &= diag.verdict == Verdict::AnalyticallyStable && diag.flags.stable() == Tri::Yes && l1_route;
  s << "; diagonal 1/i^2 " << to_string(diag.verdict) << " via bounded_l1_route";
  return {ok, s.str()};
}

Outcome criterion6() {
  const std::size_t window = 2000, n = 200;
  const Eigen::VectorXd truth = [&] {
    const std::pair<double, double> modes[] = {{1.0, 0.9}, {-0.6, 0.7}};
    return decaying_exponentials(window, modes);
  }();
  const TruncatedKernel k = truncate(KernelSpec::stable_spline(0.95), window);
  const Spectrum s = eigendecompose(k);
  const std::size_t full = s.positive_rank();
  std::vector<std::size_t> grid;
  for (std::size_t d = 1; d <= 60; ++d) grid.push_back(d);
  for (std::size_t d = 80; d < full; d *= 2) grid.push_back(d);
  grid.push_back(full);
  const auto gammas = log_grid(1e-3, 1e3, 13);

  double worst_equiv = 0.0, worst_d20 = 0.0, worst_rise = 0.0, worst_obj_rise = 0.0;
  std::size_t rising_seeds = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Simulation sim = simulate(truth, {}, n, 0.1, 6000 + seed);
    const double gamma = select_gamma(sim.problem, k, gammas).gamma;
    const Estimate ref = rels_estimate(sim.problem, k, gamma);
    const Estimate tm = trunc_mercer_estimate(sim.problem, s, gamma, full);
    worst_equiv = std::max(worst_equiv, (tm.impulse_response - ref.impulse_response).norm() /
                                            ref.impulse_response.norm());
    const auto rows = sweep_d(sim.problem, s, gamma, grid);
    bool rises = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double rise = rows[i].l2_gap - rows[i - 1].l2_gap;
      worst_rise = std::max(worst_rise, rise);
      rises |= rise > 1e-10;
      worst_obj_rise = std::max(worst_obj_rise, rows[i].objective_gap - rows[i - 1].objective_gap);
    }
    rising_seeds += rises ? 1 : 0;
    worst_d20 = std::max(worst_d20, rows[19].l2_gap);
  }
  const bool pass = worst_equiv <= 1e-8 && worst_d20 <= 1e-3 && worst_rise <= 1e-10;
  return {pass, "full rank d=" + std::to_string(full) + ": max equivalence gap " + fmt(worst_equiv) +
                    " (tol 1e-8); max d=20 gap " + fmt(worst_d20) + " (tol 1e-3); max gap increase " +
                    fmt(worst_rise) + " (slack 1e-10, " + std::to_string(rising_seeds) +
                    "/20 seeds non-monotone); objective gap max increase " + fmt(worst_obj_rise)};
}

Outcome criterion7() {
  const auto b = OrthoBasis::laguerre(0.8, 20, 400);
  const double dev = b.gram_deviation();
  const auto p = l1_profile(b, 20);
  const double rho1 = b.vector(1).cwiseAbs().sum();
  // ||rho_1||_1 = sqrt(1 - a^2) / (1 - a)
  const double closed = std::sqrt(1 - 0.64) / (1 - 0.8);
  const bool pass = dev <= 1e-8 && std::abs(rho1 - closed) <= 1e-9 && std::isfinite(p.linear_constant);
  return {pass, "gram deviation " + fmt(dev) + ", ||rho_1||_1 - 3 = " + fmt(rho1 - closed) +
                    ", linear constant " + fmt(p.linear_constant) + ", growth exponent " +
                    fmt(p.growth_exponent)};
}

Outcome criterion8() {
  std::size_t certified = 0, contradictions = 0;
  std::ostringstream s;
  for (const auto& [name, model] : model_zoo()) {
    if (sufficient_stability_test(model).certification != Certification::Certified) continue;
    ++certified;
    std::vector<std::size_t> grid;
    for (std::size_t d = 16; d <= model.basis.window(); d *= 2) grid.push_back(d);
    const auto sums = abs_sum_series(as_kernel_spec(model), grid);
    if (divergence_probe(grid, sums).trend != Trend::Converging) {
      ++contradictions;
      s << " " << name;
    }
  }
  return {contradictions == 0, std::to_string(certified) + " of " + std::to_string(model_zoo().size()) +
                                   " zoo models certified, contradictions " + std::to_string(contradictions) +
                                   s.str()};
}

Outcome criterion9() {
  std::vector<std::pair<std::string, KernelSpec>> zoo = {
      {"stable-spline 0.95", KernelSpec::stable_spline(0.95)},
      {"stable-spline 0.5", KernelSpec::stable_spline(0.5)},
      {"gaussian 1", KernelSpec::gaussian(1.0)},
      {"gaussian 5", KernelSpec::gaussian(5.0)},
      {"translation-invariant 1,0.5", KernelSpec::translation_invariant(Sequence::literal({1.0, 0.5}))},
      {"rank-one 1/i", KernelSpec::rank_one(Sequence::power(-1))},
      {"diagonal 1/i^2", KernelSpec::diagonal(Sequence::power(-2))},
      {"diagonal 0.9^i", KernelSpec::diagonal(Sequence::geometric(0.9))},
  };
  for (const auto& [name, model] : model_zoo()) {
    if (model.basis.window() >= 500) zoo.emplace_back(name, as_kernel_spec(model));
  }
  const std::size_t d = 500;
  double worst_trace = 0.0, worst_sq = 0.0;
  for (const auto& [name, spec] : zoo) {
    const Spectrum s = eigendecompose(truncate(spec, d));
    worst_trace = std::max(worst_trace, oracle::rel(s.eigenvalues.sum(), partial_trace(spec, d)));
    worst_sq = std::max(worst_sq, oracle::rel(s.eigenvalues.squaredNorm(), sq_sum_partial(spec, d)));
  }
  return {worst_trace <= 1e-9 && worst_sq <= 1e-9,
          std::to_string(zoo.size()) + " kernels at d=500: max trace rel err " + fmt(worst_trace) +
              ", max squared-sum rel err " + fmt(worst_sq) + " (tol 1e-9)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3,
                                                          criterion4, criterion5, criterion6,
                                                          criterion7, criterion8, criterion9};
  std::vector<int> selected;
  if (argc > 1) {
    const int c = std::atoi(argv[1]);
    if (c < 1 || c > 9) {
      std::fprintf(stderr, "usage: acceptance [1-9]\n");
      return 2;
    }
    selected.push_back(c);
  } else {
    for (int c = 1; c <= 9; ++c) selected.push_back(c);
  }
  bool all = true;
  for (int c : selected) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(c - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c, o.detail.c_str(), secs);
    std::fflush(stdout);
    all &= o.pass;
  }
  return all ? 0 : 1;
}
