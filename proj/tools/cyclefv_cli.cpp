// Command-line front end. Subcommands:
//   spectrum    walk spectrum, decay constants, coupling constant
//   covariance  stationary pair correlations by all available routes
//   simulate    particle-system trajectories and moment estimates
//   dynamics    covariance ODE, stationary field, bound curves
//   verify      full numerical verification suite
//
// Data goes to stdout (or --out); human summaries and JSON summaries go to
// stderr. Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cyclefv/cyclefv.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using nlohmann::json;
using namespace cyclefv;

std::string fmt12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* cap = std::getenv("CYCLEFV_THREADS")) {
    const long v = std::strtol(cap, nullptr, 10);
    if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
  }
  return hw;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

Configuration parse_eta0(const std::string& csv, int K, std::uint64_t N) {
  if (csv.empty()) return all_at_site(K, N, 0);
  std::vector<std::uint64_t> counts;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) counts.push_back(std::stoull(cell));
  const Configuration eta(std::move(counts));
  if (eta.K() != K || eta.N != N)
    throw std::invalid_argument("--eta0 must list K counts summing to N");
  return eta;
}

/// Pre-pass for --config: reads a flat JSON object and appends `--key value`
/// for every key not already present on the command line, so explicit flags
/// win over file values.
std::vector<std::string> merge_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") config_path = args[i + 1];
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw std::invalid_argument("cannot read config file: " + config_path);
  json cfg;
  in >> cfg;
  if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object");

  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& a : args) present = present || a == flag;
    if (present) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else {
      args.push_back(flag);
      args.push_back(value.dump());
    }
  }
  return args;
}

json params_json(const ModelParams& params) {
  return json{{"K", params.K}, {"theta", params.theta}, {"p", params.p}};
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
  int K = 0;
  double theta = 0.0;
  double p = 1.0;
  std::string out;
};

int run_spectrum(const SpectrumArgs& a) {
  const ModelParams params(a.K, a.theta, a.p);
  const auto closed = q_spectrum_closed_form(params);
  const auto numeric = circ_eigenvalues(build_Q(params));
  double agreement = 0.0;
  for (int k = 0; k < a.K; ++k)
    agreement = std::max(agreement,
                         std::abs(closed.eigenvalues[static_cast<std::size_t>(k)] -
                                  numeric.eigenvalues[static_cast<std::size_t>(k)]));

  std::string csv = "k,re_lambda,im_lambda\n";
  for (int k = 0; k < a.K; ++k) {
    const auto& z = closed.eigenvalues[static_cast<std::size_t>(k)];
    csv += join_csv({std::to_string(k), format_double(z.real()), format_double(z.imag())});
    csv += "\n";
  }
  write_output(a.out, csv);

  const auto sc = spectral_constants(params);
  double ellipse = std::nan("");
  if (std::abs(a.theta - 1.0) > 1e-12) ellipse = ellipse_residual(params);
  std::ostringstream sum;
  sum << "K=" << a.K << " theta=" << fmt12(a.theta) << "\n"
      << "rho_K=" << fmt12(sc.rho_K) << "\n"
      << "alpha_K=" << fmt12(sc.alpha_K) << "\n"
      << "cloez_lambda=" << fmt12(cloez_lambda(build_Q(params))) << "\n"
      << "ellipse_residual=" << fmt12(ellipse) << "\n"
      << "spectrum_agreement=" << fmt12(agreement) << "\n";
  std::cerr << sum.str();
  return 0;
}

// -------------------------------------------------------------- covariance

struct CovarianceArgs {
  int K = 0;
  std::uint64_t N = 0;
  double theta = 0.0;
  double p = 0.0;
  bool checked = false;
  std::string out;
};

int run_covariance(const CovarianceArgs& a) {
  const ModelParams params(a.K, a.theta, a.p);
  const auto closed = sk_closed_form(params, a.N);
  const auto linear = solve_sk_linear(params, a.N);

  // exact enumeration column when the state space is desk-sized
  std::vector<double> exact;
  try {
    const auto space = enumerate_states(a.K, a.N);
    if (space.size() <= 3000) {
      const auto nu = stationary_distribution_exact(full_generator(params, space));
      exact.resize(static_cast<std::size_t>(a.K));
      for (int k = 0; k < a.K; ++k)
        exact[static_cast<std::size_t>(k)] = second_moment(space, nu, 0, k);
    }
  } catch (const TooLarge&) {
  }

  std::string csv = "k,s_closed,s_linear,s_exact,cov,asym1,asym2\n";
  double worst = 0.0;
  for (int k = 0; k < a.K; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    worst = std::max(worst, std::abs(closed.s[kk] - linear.s[kk]));
    if (!exact.empty()) {
      worst = std::max(worst, std::abs(closed.s[kk] - exact[kk]));
      worst = std::max(worst, std::abs(linear.s[kk] - exact[kk]));
    }
    const auto asym = cov_asymptotic(params, a.N, k);
    csv += join_csv({std::to_string(k), format_double(closed.s[kk]),
                     format_double(linear.s[kk]),
                     exact.empty() ? "nan" : format_double(exact[kk]),
                     format_double(closed.cov[kk]), format_double(asym.order1),
                     format_double(asym.order2)});
    csv += "\n";
  }
  write_output(a.out, csv);

  double sum_s = 0.0;
  for (const double v : closed.s) sum_s += v;
  std::cerr << "K=" << a.K << " N=" << a.N << " theta=" << fmt12(a.theta)
            << " p=" << fmt12(a.p) << "\n"
            << "beta_N=" << fmt12(closed.beta_N) << "\n"
            << "gamma_N=" << fmt12(closed.gamma_N) << "\n"
            << "sum_s=" << fmt12(sum_s) << "\n"
            << "exact_column=" << (exact.empty() ? "skipped" : "enumerated") << "\n"
            << "route_disagreement=" << fmt12(worst) << "\n";
  if (a.checked && worst > 1e-10) {
    std::cerr << "checked: route disagreement " << fmt12(worst) << " exceeds 1e-10\n";
    return 1;
  }
  if (a.checked) std::cerr << "checked: ok\n";
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  int K = 0;
  std::uint64_t N = 0;
  double theta = 0.0;
  double p = 0.0;
  double t_end = 5.0;
  unsigned samples = 11;
  unsigned replicas = 0;
  std::uint64_t seed = 12345;
  unsigned threads = 0;
  std::string eta0;
  std::string out;
  bool stationary = false;
  unsigned batches = 100;
};

int run_simulate(const SimulateArgs& a) {
  const ModelParams params(a.K, a.theta, a.p);
  const auto eta0 = parse_eta0(a.eta0, a.K, a.N);
  const unsigned threads = resolve_threads(a.threads);

  json summary{{"version", version},
               {"command", "simulate"},
               {"seed", a.seed},
               {"params", params_json(params)},
               {"N", a.N},
               {"replicas", a.replicas},
               {"threads", threads},
               {"stationary", a.stationary}};

  int status = 0;
  if (a.stationary) {
    if (a.replicas != 1)
      throw std::invalid_argument("--stationary uses batch means on one replica; "
                                  "pass --replicas 1");
    const double rho = spectral_constants(params).rho_K;
    const double burn = 50.0 / rho;
    const double stride = 2.0 / rho;
    std::vector<double> grid(a.samples);
    for (unsigned i = 0; i < a.samples; ++i)
      grid[i] = burn + stride * static_cast<double>(i);
    const auto ens = simulate(params, eta0, grid, a.seed);
    write_output(a.out, trajectory_csv(ens));

    const auto cov = stationary_covariances(params, a.N);
    summary["burn_in"] = burn;
    summary["sample_stride"] = stride;
    json checks = json::array();
    for (int k : {0, 1}) {
      const auto est = estimate_moments_batched(ens, 0, k, 0, a.batches);
      const double target = cov[static_cast<std::size_t>(k)];
      const bool ok = std::abs(est.cov_kl - target) <= 3.0 * est.std_error;
      checks.push_back({{"pair", {0, k}},
                        {"estimate", est.cov_kl},
                        {"closed_form", target},
                        {"std_error", est.std_error},
                        {"within_3se", ok}});
      std::cerr << "stationary_check cov(0," << k << "): est=" << fmt12(est.cov_kl)
                << " closed=" << fmt12(target) << " se=" << fmt12(est.std_error)
                << (ok ? " OK" : " VIOLATION") << "\n";
      if (!ok) status = 1;
    }
    summary["stationary_checks"] = std::move(checks);
  } else {
    std::vector<double> grid;
    if (a.samples == 1) {
      grid = {a.t_end};
    } else {
      grid.resize(a.samples);
      for (unsigned i = 0; i < a.samples; ++i)
        grid[i] = a.t_end * static_cast<double>(i) / static_cast<double>(a.samples - 1);
    }
    const auto ens = simulate_ensemble(params, eta0, grid, a.replicas, a.seed, threads);
    write_output(a.out, trajectory_csv(ens));

    if (a.replicas >= 2) {
      const std::size_t last = grid.size() - 1;
      json moments = json::array();
      for (int k : {0, 1}) {
        const auto est = estimate_moments(ens, 0, k, last);
        moments.push_back({{"pair", {0, k}},
                           {"t", grid[last]},
                           {"mean_0", est.mean_k},
                           {"cov", est.cov_kl},
                           {"cov_std_error", est.std_error},
                           {"mean_std_error", est.mean_std_error}});
      }
      summary["moments"] = std::move(moments);
    }
  }
  std::cerr << summary.dump(2) << "\n";
  return status;
}

// ---------------------------------------------------------------- dynamics

struct DynamicsArgs {
  int K = 0;
  std::uint64_t N = 0;
  double theta = 0.0;
  double p = 0.0;
  double t_end = 5.0;
  unsigned steps = 26;
  std::string eta0;
  std::string out;
};

int run_dynamics(const DynamicsArgs& a) {
  const ModelParams params(a.K, a.theta, a.p);
  const auto eta0 = parse_eta0(a.eta0, a.K, a.N);
  if (a.steps < 2) throw std::invalid_argument("--steps must be at least 2");

  std::vector<double> grid(a.steps);
  for (unsigned i = 0; i < a.steps; ++i)
    grid[i] = a.t_end * static_cast<double>(i) / static_cast<double>(a.steps - 1);

  const auto fields = integrate_g(params, a.N, eta0, grid);
  const auto gi = g_infinity(params, a.N).g;
  const double var_st = stationary_covariances(params, a.N)[0];
  const auto mu = empirical_measure(eta0);

  // full-chain oracle columns when the state space is desk-sized
  std::optional<StateSpace> space;
  std::optional<FullGenerator> gen;
  try {
    auto s = enumerate_states(a.K, a.N);
    if (s.size() <= 2000) {
      gen = full_generator(params, s);
      space = std::move(s);
    }
  } catch (const TooLarge&) {
  }

  std::vector<std::string> header = {"t"};
  for (int k = 0; k < a.K; ++k) header.push_back("s_" + std::to_string(k));
  for (int k = 0; k < a.K; ++k) header.push_back("g_0" + std::to_string(k));
  for (int k = 0; k < a.K; ++k) header.push_back("ginf_0" + std::to_string(k));
  header.insert(header.end(),
                {"var_bound", "var_gap_ode", "var_gap_exact", "band_lower", "band_upper"});
  std::string csv = join_csv(header) + "\n";

  int status = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const auto s_t = mean_dynamics(params, eta0, t);
    std::vector<std::string> row = {format_double(t)};
    for (int k = 0; k < a.K; ++k) row.push_back(format_double(s_t[k]));
    for (int k = 0; k < a.K; ++k) row.push_back(format_double(fields[i].g(0, k)));
    for (int k = 0; k < a.K; ++k) row.push_back(format_double(gi(0, k)));

    const double bound = variance_bound(params, a.N, t);
    double gap_ode = 0.0;
    for (int k = 0; k < a.K; ++k)
      gap_ode = std::max(gap_ode, std::abs(fields[i].g(k, k) - var_st));
    double gap_exact = std::nan("");
    if (space) {
      const Matrix g_exact = detail::exact_covariance_field(params, *space, *gen, eta0, t);
      gap_exact = 0.0;
      for (int k = 0; k < a.K; ++k)
        gap_exact = std::max(gap_exact, std::abs(g_exact(k, k) - var_st));
    }
    const auto band = empirical_distance_bound(params, a.N, t, eta0, mu);
    row.push_back(format_double(bound));
    row.push_back(format_double(gap_ode));
    row.push_back(format_double(gap_exact));
    row.push_back(format_double(band.lower));
    row.push_back(format_double(band.upper));
    csv += join_csv(row) + "\n";

    if (gap_ode > bound + 1e-9) {
      std::cerr << "VIOLATION variance bound at t=" << fmt12(t)
                << ": gap_ode=" << fmt12(gap_ode) << " bound=" << fmt12(bound) << "\n";
      status = 1;
    }
    if (space && gap_exact > bound + 1e-9) {
      std::cerr << "VIOLATION variance bound (exact) at t=" << fmt12(t)
                << ": gap_exact=" << fmt12(gap_exact) << " bound=" << fmt12(bound) << "\n";
      status = 1;
    }
  }
  write_output(a.out, csv);

  double tail_gap = 0.0;
  for (int k = 0; k < a.K; ++k)
    tail_gap = std::max(tail_gap, std::abs(fields.back().g(0, k) - gi(0, k)));
  std::cerr << "K=" << a.K << " N=" << a.N << " theta=" << fmt12(a.theta)
            << " p=" << fmt12(a.p) << "\n"
            << "stationary_variance=" << fmt12(var_st) << "\n"
            << "final_gap_to_ginf=" << fmt12(tail_gap) << "\n"
            << "exact_columns=" << (space ? "enumerated" : "skipped") << "\n"
            << (status == 0 ? "bounds: ok" : "bounds: VIOLATION") << "\n";
  return status;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
  std::string only;
  std::uint64_t seed = 987654321ULL;
  double theta_skew = 0.0;
  std::string report;
};

int run_verify(const VerifyArgs& a) {
  VerifyOptions opts;
  opts.seed = a.seed;
  opts.theta_skew = a.theta_skew;

  // criterion -> check ids, used to skip criteria the filter cannot match
  static const std::vector<std::pair<int, std::vector<std::string>>> directory = {
      {1, {"cov_closed_vs_linear"}},
      {2, {"cov_enumeration_oracle", "cov_hand_values"}},
      {3, {"thm1_l2_sandwich", "thm1_tv_sandwich"}},
      {4, {"spectrum_closed_form", "spectrum_eigencolumn", "spectrum_constants",
           "spectrum_cloez"}},
      {5, {"genmoments_closed_vs_brute"}},
      {6, {"structure_rotation", "structure_unbiased", "structure_reversible_case",
           "structure_nonreversible_cases", "structure_kolmogorov_exact"}},
      {7, {"asym_first_order", "asym_second_order_decay"}},
      {8, {"dyn_ode_vs_chain", "dyn_ginf_triple", "dyn_kronecker_assembly",
           "dyn_kronecker_exponential"}},
      {9, {"bounds_variance_domination", "bounds_distance_band_mc"}},
      {10, {"sim_stationary_mc", "sim_independent_walkers"}},
      {11, {"determinism_bytes"}},
  };

  std::vector<CheckResult> results;
  for (const auto& [crit, ids] : directory) {
    bool wanted = a.only.empty();
    for (const auto& id : ids)
      wanted = wanted || id.find(a.only) != std::string::npos;
    if (!wanted) continue;
    for (auto& chk : run_criterion(crit, opts)) {
      if (!a.only.empty() && chk.check_id.find(a.only) == std::string::npos) continue;
      results.push_back(std::move(chk));
    }
  }
  if (results.empty()) {
    std::cerr << "--only '" << a.only << "' matches no checks\n";
    return 2;
  }

  bool all_pass = true;
  for (const auto& chk : results) {
    all_pass = all_pass && chk.pass;
    std::printf("%-34s %s  residual %.6g vs threshold %.3g\n", chk.check_id.c_str(),
                chk.pass ? "pass" : "FAIL", chk.residual, chk.threshold);
  }
  std::printf("all_pass=%s\n", all_pass ? "true" : "false");

  if (!a.report.empty()) {
    json checks = json::array();
    for (const auto& chk : results)
      checks.push_back({{"check_id", chk.check_id},
                        {"paper_ref", chk.paper_ref},
                        {"residual", chk.residual},
                        {"threshold", chk.threshold},
                        {"pass", chk.pass}});
    const json report{{"version", version},
                      {"command", "verify"},
                      {"seed", a.seed},
                      {"theta_skew", a.theta_skew},
                      {"only", a.only},
                      {"checks", std::move(checks)},
                      {"all_pass", all_pass}};
    std::ofstream out(a.report, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open report file: " + a.report);
    out << report.dump(2) << "\n";
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cycle-graph killed-walk particle system toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with default option values")
      ->expected(1);

  SpectrumArgs sp;
  auto* spectrum = app.add_subcommand("spectrum", "walk spectrum and decay constants");
  spectrum->add_option("--K", sp.K, "number of sites")->required();
  spectrum->add_option("--theta", sp.theta, "anticlockwise rate")->required();
  spectrum->add_option("--p", sp.p, "killing rate (unused by the spectrum)");
  spectrum->add_option("--out", sp.out, "CSV output path (default stdout)");
  spectrum->add_option("--config", config_path, "JSON defaults (applied in a pre-pass)");

  CovarianceArgs cv;
  auto* covariance = app.add_subcommand("covariance", "stationary pair correlations");
  covariance->add_option("--K", cv.K, "number of sites")->required();
  covariance->add_option("--N", cv.N, "number of particles")->required();
  covariance->add_option("--theta", cv.theta, "anticlockwise rate")->required();
  covariance->add_option("--p", cv.p, "killing rate")->required();
  covariance->add_flag("--checked", cv.checked, "exit nonzero on route disagreement");
  covariance->add_option("--out", cv.out, "CSV output path (default stdout)");
  covariance->add_option("--config", config_path, "JSON defaults (applied in a pre-pass)");

  SimulateArgs sm;
  auto* simulate = app.add_subcommand("simulate", "particle-system trajectories");
  simulate->add_option("--K", sm.K, "number of sites")->required();
  simulate->add_option("--N", sm.N, "number of particles")->required();
  simulate->add_option("--theta", sm.theta, "anticlockwise rate")->required();
  simulate->add_option("--p", sm.p, "killing rate")->required();
  simulate->add_option("--t-end", sm.t_end, "time horizon");
  simulate->add_option("--samples", sm.samples, "sample grid size")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--replicas", sm.replicas, "independent replicas")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sm.seed, "random seed");
  simulate->add_option("--threads", sm.threads, "worker threads (0 = auto)");
  simulate->add_option("--eta0", sm.eta0, "initial counts, comma separated");
  simulate->add_option("--out", sm.out, "CSV output path (default stdout)");
  simulate->add_flag("--stationary", sm.stationary,
                     "burn in and check covariances against the closed form");
  simulate->add_option("--batches", sm.batches, "batch count for --stationary")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--config", config_path, "JSON defaults (applied in a pre-pass)");

  DynamicsArgs dy;
  auto* dynamics = app.add_subcommand("dynamics", "covariance ODE and bound curves");
  dynamics->add_option("--K", dy.K, "number of sites")->required();
  dynamics->add_option("--N", dy.N, "number of particles")->required();
  dynamics->add_option("--theta", dy.theta, "anticlockwise rate")->required();
  dynamics->add_option("--p", dy.p, "killing rate")->required();
  dynamics->add_option("--t-end", dy.t_end, "time horizon");
  dynamics->add_option("--steps", dy.steps, "grid points including t = 0");
  dynamics->add_option("--eta0", dy.eta0, "initial counts, comma separated");
  dynamics->add_option("--out", dy.out, "CSV output path (default stdout)");
  dynamics->add_option("--config", config_path, "JSON defaults (applied in a pre-pass)");

  VerifyArgs vf;
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--only", vf.only, "run only checks whose id contains this text");
  verify->add_option("--seed", vf.seed, "random seed for the Monte Carlo checks");
  verify->add_option("--report", vf.report, "write a JSON report to this path");
  verify->add_option("--inject-theta-skew", vf.theta_skew,
                     "negative control: perturb one route by this offset")
      ->group("");  // hidden
  verify->add_option("--config", config_path, "JSON defaults (applied in a pre-pass)");

  std::vector<std::string> merged;
  try {
    merged = merge_config_args(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    // CLI11 consumes arguments in reverse order
    std::vector<std::string> reversed(merged.rbegin(), merged.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (spectrum->parsed()) return run_spectrum(sp);
    if (covariance->parsed()) return run_covariance(cv);
    if (simulate->parsed()) return run_simulate(sm);
    if (dynamics->parsed()) return run_dynamics(dy);
    if (verify->parsed()) return run_verify(vf);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
