// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "srkhs/basis.hpp"
#include "srkhs/cli.hpp"
#include "srkhs/config.hpp"
#include "srkhs/error.hpp"
#include "srkhs/report.hpp"
#include "srkhs/simd.hpp"
#include "srkhs/spectral.hpp"
#include "srkhs/stability.hpp"
#include "srkhs/sysid.hpp"

namespace srkhs::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::string_view kCommon[] = {"schema", "command", "seed", "output_dir", "threads"};
constexpr std::string_view kKernelKeys[] = {"kernel", "alpha", "width", "h", "v", "g"};

const std::map<std::string, std::vector<std::string_view>>& command_keys() {
  static const std::map<std::string, std::vector<std::string_view>> keys = {
      {"classify", {"sum_grid", "norm_grid", "enumeration_cap", "restarts", "max_work"}},
      {"spectrum", {"grid", "track", "keep_leading", "gap_tolerance"}},
      {"reconstruct", {"d", "ranks"}},
      {"synth", {"basis", "pole", "count", "window", "lambda", "basis_seed", "bound", "ns_d", "zoo"}},
      {"identify",
       {"n", "sigma", "input", "input_pole", "window", "truth", "gamma", "gamma_grid", "folds",
        "d_grid", "ls_pole", "ls_max_order", "order_criterion"}},
  };
  return keys;
}

void check_keys(const Config& config, const std::string& command) {
  std::vector<std::string_view> allowed(std::begin(kCommon), std::end(kCommon));
  const auto& extra = command_keys().at(command);
  allowed.insert(allowed.end(), extra.begin(), extra.end());
  if (command != "synth") allowed.insert(allowed.end(), std::begin(kKernelKeys), std::end(kKernelKeys));
  config.require_known(allowed);
  if (const auto c = config.find("command"); c && *c != command) {
    throw ConfigError("config field 'command' is '" + *c + "' but the subcommand is '" + command + "'");
  }
}

struct Context {
  Config config;
  fs::path output_dir;
  std::size_t threads = 1;
  std::ostream& out;
};

void emit(Context& ctx, std::string_view name, const Json& summary) {
  const std::string text = summary.dump(2) + "\n";
  write_output(ctx.output_dir, name, text);
  write_output(ctx.output_dir, "config.txt", ctx.config.serialize());
  ctx.out << text;
}

// ---------------------------------------------------------------------------

void cmd_classify(Context& ctx) {
  const auto& c = ctx.config;
  const KernelSpec spec = kernel_from_config(c);
  ClassifyBudget budget;
  if (const auto g = c.find("sum_grid")) budget.sum_grid = parse_grid(*g, "sum_grid");
  if (const auto g = c.find("norm_grid")) budget.norm_grid = parse_grid(*g, "norm_grid");
  budget.enumeration_cap = c.get_size("enumeration_cap", budget.enumeration_cap);
  budget.restarts = c.get_size("restarts", budget.restarts);
  budget.max_work = c.get_double("max_work", budget.max_work);
  budget.seed = c.get_seed().value_or(0);
  if (budget.enumeration_cap > 30) throw ConfigError("config field 'enumeration_cap' must be <= 30");
  emit(ctx, "report.json", to_json(classify(spec, budget)));
}

// ---------------------------------------------------------------------------

std::vector<std::string> indexed_header(std::string first, std::string_view prefix,
                                        std::span<const std::size_t> idx) {
  std::vector<std::string> h{std::move(first)};
  for (std::size_t i : idx) h.push_back(std::string(prefix) + std::to_string(i));
  return h;
}

void cmd_spectrum(Context& ctx) {
  const auto& c = ctx.config;
  const KernelSpec spec = kernel_from_config(c);
  const auto grid = parse_grid(c.get_string("grid", "200:2000:200"), "grid");
  const auto track = parse_index_set(c.get_string("track", "1-5,100"), "track");
  ConvergenceOptions opt;
  opt.threads = ctx.threads;
  opt.keep_leading = c.get_size("keep_leading", 5);
  opt.spectral.gap_tolerance = c.get_double("gap_tolerance", kDefaultGapTolerance);
  const ConvergenceTrace t = convergence_scan(spec, grid, track, opt);
  const auto rows = static_cast<Eigen::Index>(grid.size());
  const auto cols = static_cast<Eigen::Index>(track.size());

  Csv paths(indexed_header("d", "lambda_", track));
  for (Eigen::Index k = 0; k < rows; ++k) {
    std::vector<double> r{static_cast<double>(grid[static_cast<std::size_t>(k)])};
    for (Eigen::Index i = 0; i < cols; ++i) r.push_back(t.eigenvalue_paths(k, i));
    paths.row(r);
  }
  std::vector<std::string> dh{"d_from"};
  for (auto& h : indexed_header("d_to", "rho_", track)) dh.push_back(h);
  Csv disc(dh);
  for (Eigen::Index k = 0; k + 1 < rows; ++k) {
    std::vector<double> r{static_cast<double>(grid[static_cast<std::size_t>(k)]),
                          static_cast<double>(grid[static_cast<std::size_t>(k + 1)])};
    for (Eigen::Index i = 0; i < cols; ++i) r.push_back(t.discrepancies(k, i));
    disc.row(r);
  }
  auto dump_vectors = [](const Eigen::MatrixXd& m, std::vector<std::size_t> idx) {
    Csv csv(indexed_header("x", "rho_", idx));
    for (Eigen::Index x = 0; x < m.rows(); ++x) {
      std::vector<double> r{static_cast<double>(x + 1)};
      for (Eigen::Index i = 0; i < m.cols(); ++i) r.push_back(m(x, i));
      csv.row(r);
    }
    return csv.str();
  };
  std::vector<std::size_t> leading(static_cast<std::size_t>(t.leading_vectors.cols()));
  for (std::size_t i = 0; i < leading.size(); ++i) leading[i] = i + 1;

  write_output(ctx.output_dir, "eigenvalue_paths.csv", paths.str());
  write_output(ctx.output_dir, "discrepancy.csv", disc.str());
  write_output(ctx.output_dir, "eigenvectors_tracked.csv", dump_vectors(t.final_vectors, track));
  write_output(ctx.output_dir, "eigenvectors_leading.csv", dump_vectors(t.leading_vectors, leading));

  Json per_index = Json::array();
  for (Eigen::Index i = 0; i < cols; ++i) {
    bool monotone = true;
    for (Eigen::Index k = 1; k < rows; ++k) {
      monotone &= t.eigenvalue_paths(k, i) >= t.eigenvalue_paths(k - 1, i) - 1e-12;
    }
    Json unreliable = Json::array();
    for (Eigen::Index k = 0; k < rows; ++k) {
      if (t.unreliable[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]) {
        unreliable.push_back(grid[static_cast<std::size_t>(k)]);
      }
    }
    Json j = {{"index", track[static_cast<std::size_t>(i)]},
              {"eigenvalue_final", t.eigenvalue_paths(rows - 1, i)},
              {"monotone", monotone},
              {"unreliable_at", unreliable}};
    if (rows > 1) {
      j["discrepancy_final"] = t.discrepancies(rows - 2, i);
      j["resolution_final"] = t.resolution(rows - 2, i);
    }
    per_index.push_back(j);
  }
  Spectrum last;
  last.d = grid.back();
  last.eigenvalues = t.final_eigenvalues;
  const std::size_t r = std::min<std::size_t>(10, last.d);
  const Json summary = {{"kernel", spec.describe()},
                        {"grid", grid},
                        {"tracked", per_index},
                        {"positive_rank_final", last.positive_rank()},
                        {"tail_energy_ratio", {{"r", r}, {"value", tail_energy_ratio(last, r)}}}};
  emit(ctx, "summary.json", summary);
}

// ---------------------------------------------------------------------------

void cmd_reconstruct(Context& ctx) {
  const auto& c = ctx.config;
  const KernelSpec spec = kernel_from_config(c);
  const std::size_t d = c.get_size("d", 500);
  if (d < 1) throw ConfigError("config field 'd' must be >= 1");
  std::vector<std::size_t> ranks;
  if (const auto text = c.find("ranks")) {
    for (double v : parse_double_list(*text, "ranks")) {
      if (v < 0 || v != std::floor(v)) throw ConfigError("config field 'ranks': expected integers");
      ranks.push_back(static_cast<std::size_t>(v));
    }
  } else {
    for (std::size_t r : {0, 1, 2, 5, 10, 20, 50, 100}) {
      if (r < d) ranks.push_back(r);
    }
    ranks.push_back(d);
  }
  const TruncatedKernel k = truncate(spec, d);
  const Spectrum s = eigendecompose(k);
  Csv csv({"r", "frobenius_error", "relative_error", "tail_energy_ratio"});
  for (std::size_t r : ranks) {
    const Reconstruction rec = mercer_reconstruct(s, r);
    csv.row(std::vector<double>{static_cast<double>(r), rec.frobenius_error, rec.relative_error,
                                tail_energy_ratio(s, r)});
  }
  write_output(ctx.output_dir, "reconstruction.csv", csv.str());

  const double trace = partial_trace(spec, d);
  const double sq = sq_sum_partial(spec, d);
  const double eig_sum = s.eigenvalues.sum();
  const double eig_sq = s.eigenvalues.squaredNorm();
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  const Eigen::MatrixXd gram = s.eigenvectors.transpose() * s.eigenvectors;
  const Json summary = {
      {"kernel", spec.describe()},
      {"d", d},
      {"trace", {{"eigenvalue_sum", eig_sum}, {"partial_trace", trace}, {"relative_error", rel(eig_sum, trace)}}},
      {"squared_sum",
       {{"eigenvalue_sq_sum", eig_sq}, {"entry_sq_sum", sq}, {"relative_error", rel(eig_sq, sq)}}},
      {"orthonormality_error",
       (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff()},
      {"clamped", s.clamped},
      {"multiplicity_warnings", s.multiplicity_warnings.size()},
      {"positive_rank", s.positive_rank()}};
  emit(ctx, "summary.json", summary);
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> doubling_from(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> g;
  for (std::size_t d = lo; d <= hi; d *= 2) g.push_back(d);
  return g;
}

Json synth_report(const std::string& name, const MercerModel& model, std::optional<double> bound,
                  std::size_t ns_d) {
  Json j = {{"name", name}, {"model", model.describe()}, {"gram_deviation", model.basis.gram_deviation()}};
  const L1Profile profile = l1_profile(model.basis, model.basis.size());
  j["l1_profile"] = {{"linear_constant", profile.linear_constant},
                     {"uniform_bound", profile.uniform_bound},
                     {"growth_exponent", profile.growth_exponent},
                     {"norms", profile.norms}};

  const SufficientTestResult suff = sufficient_stability_test(model);
  j["sufficient"] = {{"certification", to_string(suff.certification)},
                     {"grid", suff.grid},
                     {"partial_sums", suff.partial_sums},
                     {"probe", to_json(suff.probe)}};

  if (!bound && model.basis.has_canonical_support()) bound = 1.0;
  if (bound) {
    const BoundedL1Result b = bounded_l1_test(model, *bound);
    j["bounded_l1"] = {{"bound", *bound},
                       {"verdict", to_string(b.verdict)},
                       {"observed_bound", b.observed_bound}};
    if (b.probe) j["bounded_l1"]["probe"] = to_json(*b.probe);
  } else {
    j["bounded_l1"] = {{"verdict", "Skipped"}, {"reason", "no uniform l1 bound supplied for this basis"}};
  }

  ns_d = std::min(ns_d, model.basis.window());
  const NormEstimate ns = ns_condition_estimate(model, ns_d);
  Json nsj = to_json(ns);
  if (ns_d <= kDefaultEnumerationCap) {
    const NormEstimate direct = inf_one_norm_exact(synthesize_kernel(model, ns_d).kernel);
    nsj["inf_one_norm"] = direct.value;
    nsj["relative_difference"] =
        std::abs(ns.value - direct.value) / std::max(std::abs(direct.value), 1e-300);
  }
  j["ns_condition"] = nsj;

  const auto grid = doubling_from(16, model.basis.window());
  if (grid.size() >= 3) {
    const auto sums = abs_sum_series(as_kernel_spec(model), grid);
    const ProbeResult probe = divergence_probe(grid, sums);
    j["abs_sum_check"] = {{"grid", grid}, {"series", sums}, {"probe", to_json(probe)}};
    j["contradiction"] =
        suff.certification == Certification::Certified && probe.trend != Trend::Converging;
  } else {
    j["abs_sum_check"] = {{"skipped", "window shorter than 64"}};
    j["contradiction"] = false;
  }
  return j;
}

void cmd_synth(Context& ctx) {
  const auto& c = ctx.config;
  const std::size_t ns_d = c.get_size("ns_d", 10);
  std::optional<double> bound;
  if (c.has("bound")) bound = c.get_double("bound", 1.0);
  const std::string zoo = c.get_string("zoo", "false");
  if (zoo != "true" && zoo != "false") throw ConfigError("config field 'zoo' must be true or false");

  if (zoo == "true") {
    Json models = Json::array();
    std::size_t contradictions = 0;
    for (const auto& [name, model] : model_zoo()) {
      Json j = synth_report(name, model, bound, ns_d);
      contradictions += j["contradiction"].get<bool>() ? 1 : 0;
      models.push_back(std::move(j));
    }
    emit(ctx, "synth.json", {{"models", models}, {"contradictions", contradictions}});
    return;
  }
  const MercerModel model = model_from_config(c);
  const L1Profile profile = l1_profile(model.basis, model.basis.size());
  Csv l1({"i", "l1_norm"});
  for (std::size_t i = 0; i < profile.norms.size(); ++i) {
    l1.row(std::vector<double>{static_cast<double>(i + 1), profile.norms[i]});
  }
  std::vector<std::size_t> idx(model.basis.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i + 1;
  Csv basis(indexed_header("x", "rho_", idx));
  for (Eigen::Index x = 0; x < model.basis.matrix().rows(); ++x) {
    std::vector<double> r{static_cast<double>(x + 1)};
    for (Eigen::Index i = 0; i < model.basis.matrix().cols(); ++i) r.push_back(model.basis.matrix()(x, i));
    basis.row(r);
  }
  write_output(ctx.output_dir, "l1_profile.csv", l1.str());
  write_output(ctx.output_dir, "basis.csv", basis.str());
  emit(ctx, "synth.json", synth_report("config", model, bound, ns_d));
}

// ---------------------------------------------------------------------------

InputKind parse_input(const std::string& s) {
  if (s == "white") return InputKind::WhiteNoise;
  if (s == "filtered") return InputKind::FilteredNoise;
  if (s == "step") return InputKind::Step;
  if (s == "impulse") return InputKind::Impulse;
  throw ConfigError("config field 'input': expected white, filtered, step or impulse");
}

std::vector<std::pair<double, double>> parse_modes(std::string_view text) {
  std::vector<std::pair<double, double>> modes;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError("config field 'truth': expected gain:pole pairs separated by commas");
    }
    const double pole = parse_double(item.substr(colon + 1), "truth");
    if (!(std::abs(pole) < 1.0)) throw ConfigError("config field 'truth': poles must satisfy |p| < 1");
    modes.emplace_back(parse_double(item.substr(0, colon), "truth"), pole);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return modes;
}

// Comma list of orders in 1..full; the token "full" stands for full itself.
std::vector<std::size_t> parse_orders(std::string_view text, std::size_t full) {
  std::vector<std::size_t> orders;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    std::string_view item = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    const std::size_t d = item == "full" ? full : parse_size(item, "d_grid");
    if (d < 1 || d > full) {
      throw ConfigError("config field 'd_grid': orders must lie in 1.." + std::to_string(full));
    }
    orders.push_back(d);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return orders;
}

void cmd_identify(Context& ctx) {
  const auto& c = ctx.config;
  const auto seed = c.get_seed();
  if (!seed) throw ConfigError("identify requires a seed (config field 'seed' or --seed)");
  const KernelSpec spec = kernel_from_config(c);
  const std::size_t n = c.get_size("n", 200);
  const double sigma = c.get_double("sigma", 0.1);
  const std::size_t window = c.get_size("window", 2000);
  if (window < 1) throw ConfigError("config field 'window' must be >= 1");
  InputSpec input{parse_input(c.get_string("input", "white")), c.get_double("input_pole", 0.9)};
  const auto truth = decaying_exponentials(window, parse_modes(c.get_string("truth", "1:0.9,-0.6:0.7")));
  const Simulation sim = simulate(truth, input, n, sigma, *seed);
  const RegressionProblem& problem = sim.problem;

  const TruncatedKernel k = truncate(spec, window);
  const Spectrum s = eigendecompose(k);
  const std::size_t full = s.positive_rank();

  Json gamma_json;
  double gamma = 0.0;
  const std::string gamma_text = c.get_string("gamma", "cv");
  if (gamma_text == "cv") {
    const auto parts = parse_double_list(c.get_string("gamma_grid", "0.001,1000,13"), "gamma_grid");
    if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2])) {
      throw ConfigError("config field 'gamma_grid': expected lo,hi,count");
    }
    const auto grid = log_grid(parts[0], parts[1], static_cast<std::size_t>(parts[2]));
    const GammaSelection sel = select_gamma(problem, k, grid, c.get_size("folds", 5));
    gamma = sel.gamma;
    gamma_json = {{"method", "cv"}, {"value", gamma}, {"candidates", sel.candidates}, {"scores", sel.scores}};
  } else {
    gamma = parse_double(gamma_text, "gamma");
    gamma_json = {{"method", "fixed"}, {"value", gamma}};
  }

  const Estimate rels = rels_estimate(problem, spec, gamma);
  const Estimate tm_full = trunc_mercer_estimate(problem, s, gamma, full);

  const auto d_grid = parse_orders(c.get_string("d_grid", "5,10,20,40,80,full"), full);
  const auto sweep = sweep_d(problem, s, gamma, d_grid);
  Csv sweep_csv({"d", "l2_gap", "rkhs_gap", "objective_gap", "cost_proxy"});
  Json sweep_json = Json::array();
  for (const auto& r : sweep) {
    sweep_csv.row(std::vector<double>{static_cast<double>(r.d), r.l2_gap, r.rkhs_gap, r.objective_gap, r.cost_proxy});
    sweep_json.push_back({{"d", r.d}, {"l2_gap", r.l2_gap}, {"rkhs_gap", r.rkhs_gap},
                          {"objective_gap", r.objective_gap}, {"cost_proxy", r.cost_proxy}});
  }

  const std::size_t max_order = c.get_size("ls_max_order", 30);
  const double ls_pole = c.get_double("ls_pole", 0.8);
  const std::size_t ls_window = std::max(window, orthonormal_laguerre_window(ls_pole, max_order));
  const OrthoBasis ls_basis = OrthoBasis::laguerre(ls_pole, max_order, ls_window);
  std::vector<std::size_t> orders(max_order);
  for (std::size_t i = 0; i < max_order; ++i) orders[i] = i + 1;
  const std::string crit = c.get_string("order_criterion", "aic");
  if (crit != "aic" && crit != "cv") throw ConfigError("config field 'order_criterion': expected aic or cv");
  const OrderSelection order =
      select_order(problem, ls_basis, orders,
                   crit == "aic" ? OrderCriterion::AIC : OrderCriterion::CrossValidation,
                   c.get_size("folds", 5));
  const Estimate ls = ls_estimate(problem, ls_basis, order.order);

  Csv est_csv({"estimator", "rss", "fit_percent", "l2_error", "cost_proxy"});
  Json est_json = Json::array();
  for (const Estimate* e : {&ls, &rels, &tm_full}) {
    const double fit = fit_percent(truth, e->impulse_response);
    const double err = (truth - e->impulse_response).norm();
    est_csv.row({e->tag(), format_double(e->rss), format_double(fit), format_double(err),
                 format_double(e->cost_proxy)});
    est_json.push_back({{"estimator", e->tag()}, {"rss", e->rss}, {"fit_percent", fit},
                        {"l2_error", err}, {"cost_proxy", e->cost_proxy}, {"warnings", e->warnings}});
  }
  Csv ir({"j", "truth", "ls", "rels", "trunc_mercer_full"});
  for (Eigen::Index j = 0; j < truth.size(); ++j) {
    ir.row(std::vector<double>{static_cast<double>(j + 1), truth(j), ls.impulse_response(j),
                               rels.impulse_response(j), tm_full.impulse_response(j)});
  }
  write_output(ctx.output_dir, "estimators.csv", est_csv.str());
  write_output(ctx.output_dir, "sweep.csv", sweep_csv.str());
  write_output(ctx.output_dir, "impulse_responses.csv", ir.str());

  const double equivalence =
      (tm_full.impulse_response - rels.impulse_response).norm() / rels.impulse_response.norm();
  const Json summary = {{"seed", *seed},
                        {"kernel", spec.describe()},
                        {"n", n},
                        {"sigma", sigma},
                        {"window", window},
                        {"gamma", gamma_json},
                        {"positive_rank", full},
                        {"equivalence_gap", equivalence},
                        {"estimators", est_json},
                        {"sweep", sweep_json},
                        {"ls_order", {{"criterion", crit}, {"order", order.order},
                                      {"scores", order.scores}, {"rss_floored", order.rss_floored}}}};
  emit(ctx, "identify.json", summary);
}

}  // namespace

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"srkhs: stability, spectra and identification with PSD kernels"};
  app.require_subcommand(1);
  // "--h" is a kernel option, so help is long-form only.
  app.set_help_flag("--help", "Print help and exit");

  std::string config_path, output_dir;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
  auto flag = [&](CLI::App* a, const std::string& name, const std::string& key, const std::string& help) {
    a->add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
  };
  app.add_option("--config", config_path, "Experiment config file");
  flag(&app, "--seed", "seed", "Random seed");
  app.add_option("--output-dir", output_dir, "Directory for all output files (default srkhs-out)");
  flag(&app, "--threads", "threads", "Worker threads");
  app.add_option("--set", sets, "Extra config entry key=value (repeatable)");

  std::string command;
  auto sub = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->set_help_flag("--help", "Print help and exit");
    s->fallthrough();
    s->callback([&command, name] { command = name; });
    return s;
  };
  CLI::App* classify_cmd = sub("classify", "Classify a kernel within the stability inclusion chain");
  CLI::App* spectrum_cmd = sub("spectrum", "Eigenvalue paths and eigenvector convergence over a grid");
  CLI::App* reconstruct_cmd = sub("reconstruct", "Rank-r Mercer reconstruction and trace identities");
  CLI::App* synth_cmd = sub("synth", "Certify a kernel synthesized from an orthonormal basis");
  CLI::App* identify_cmd = sub("identify", "Compare LS, ReLS and truncated-Mercer estimators");

  for (CLI::App* s : {classify_cmd, spectrum_cmd, reconstruct_cmd, identify_cmd}) {
    flag(s, "--kernel", "kernel", "stable-spline | gaussian | translation-invariant | rank-one | diagonal");
    flag(s, "--alpha", "alpha", "Stable-spline decay");
    flag(s, "--width", "width", "Gaussian width");
    flag(s, "--h", "h", "Translation-invariant profile sequence");
    flag(s, "--v", "v", "Rank-one vector sequence");
    flag(s, "--g", "g", "Diagonal sequence");
  }
  flag(spectrum_cmd, "--grid", "grid", "Orders, lo:hi:step or a comma list");
  flag(spectrum_cmd, "--track", "track", "Tracked eigen indices, e.g. 1-5,100");
  flag(reconstruct_cmd, "--d", "d", "Truncation order");
  flag(reconstruct_cmd, "--ranks", "ranks", "Comma list of reconstruction ranks");
  flag(synth_cmd, "--basis", "basis", "canonical | laguerre | random");
  flag(synth_cmd, "--pole", "pole", "Laguerre pole");
  flag(synth_cmd, "--count", "count", "Number of basis vectors");
  flag(synth_cmd, "--window", "window", "Materialization window");
  flag(synth_cmd, "--lambda", "lambda", "Eigenvalue law, e.g. power:4");
  synth_cmd->add_flag_callback("--zoo", [&flags] { flags["zoo"] = "true"; }, "Run the built-in model zoo");
  flag(identify_cmd, "--n", "n", "Number of observations");
  flag(identify_cmd, "--sigma", "sigma", "Noise standard deviation");
  flag(identify_cmd, "--gamma", "gamma", "Regularization weight or 'cv'");
  flag(identify_cmd, "--window", "window", "Impulse-response window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    Config config = config_path.empty() ? Config::parse("schema = 1") : Config::load(config_path);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      config.set(s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& [k, v] : flags) config.set(k, v);
    if (!output_dir.empty()) config.set("output_dir", output_dir);
    check_keys(config, command);

    Context ctx{config, fs::path(config.get_string("output_dir", "srkhs-out")),
                config.get_size("threads", 1), out};
    if (ctx.threads < 1) throw ConfigError("config field 'threads' must be >= 1");
    if (command == "classify") cmd_classify(ctx);
    if (command == "spectrum") cmd_spectrum(ctx);
    if (command == "reconstruct") cmd_reconstruct(ctx);
    if (command == "synth") cmd_synth(ctx);
    if (command == "identify") cmd_identify(ctx);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const StructuralError& e) {
    err << "invalid kernel: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ResourceError& e) {
    err << "resource failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace srkhs::cli
