// Command-line front end: prepare probe states, evaluate QFI and the
// analytic precision limits, and run figure-style parameter sweeps.
//
// Exit codes: 0 success, 2 validation error, 3 numeric error,
// 4 partial sweep failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sjq/analytic_limits.hpp"
#include "sjq/qfi_engine.hpp"
#include "sjq/sjj_model.hpp"
#include "sjq/state_io.hpp"
#include "sjq/state_optimizer.hpp"
#include "sjq/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitPartialSweep = 4;

int cmd_ground(long N, double Lambda, const std::string& out) {
  const auto gs = sjq::ground_state(sjq::build_hamiltonian(sjq::SjjParams(N, Lambda)));
  if (!out.empty()) sjq::save_state(gs.state, out);
  std::printf("N=%ld Lambda=%.10g energy=%.12g edge_weight=%.12g residual=%.3g\n",
              N, Lambda, gs.energy, gs.state.edge_weight(), gs.residual);
  if (gs.near_degenerate)
    std::printf("warning: ground state nearly degenerate (gap %.3g)\n", gs.gap);
  return kExitOk;
}

sjq::TwoModeState resolve_probe(const std::string& probe, const std::string& state_file,
                                long N, std::optional<double> Lambda, long k,
                                double eta, std::uint64_t seed) {
  if (!state_file.empty()) return sjq::load_state(state_file);
  if (probe == "noon") return sjq::noon_state(N);
  if (probe == "binomial") return sjq::binomial_state(N);
  if (probe == "sjj") {
    if (!Lambda) throw std::domain_error("probe=sjj requires --lambda");
    return sjq::ground_state(sjq::build_hamiltonian(sjq::SjjParams(N, *Lambda))).state;
  }
  if (probe == "os") {
    sjq::OptimizerConfig oc;
    oc.seed = seed;
    return sjq::optimize_probe(N, k, sjq::LossChannel(eta), oc).state;
  }
  throw std::domain_error("unknown probe '" + probe + "' (noon|binomial|sjj|os)");
}

int cmd_qfi(const std::string& probe, const std::string& state_file, long N,
            std::optional<double> Lambda, double eta, long k,
            const std::string& method, double phi, std::uint64_t seed,
            const std::string& out) {
  sjq::SweepRow row;
  row.probe = state_file.empty() ? probe : "file";
  row.eta = eta;
  row.k = k;
  row.method = method;
  row.Lambda = Lambda;

  sjq::QfiEstimate est;
  if (method == "analytic") {
    if (probe != "noon" || !state_file.empty())
      throw std::domain_error("method=analytic is only defined for probe=noon");
    const auto lim = sjq::limits::noon_limits(N, k, eta);
    est = sjq::QfiEstimate::make(lim.fisher, sjq::QfiMethod::analytic, k, eta);
    row.N = N;
  } else {
    const auto state = resolve_probe(probe, state_file, N, Lambda, k, eta, seed);
    row.N = state.N;
    const sjq::LossChannel channel(eta);
    if (method == "bound")
      est = sjq::qfi_upper_bound(state, channel, k);
    else if (method == "exact")
      est = sjq::qfi_exact(state, channel, k, phi);
    else if (method == "pure")
      est = sjq::pure_qfi(state, k);
    else
      throw std::domain_error("unknown method '" + method +
                              "' (pure|bound|exact|analytic)");
  }
  row.fisher = est.value;
  row.delta_phi = est.delta_phi_min;

  std::printf("%s\n%s\n", sjq::csv_header().c_str(), sjq::format_row(row).c_str());
  if (!out.empty()) {
    std::ofstream f(out, std::ios::app);
    if (!f) throw std::runtime_error("cannot open for append: " + out);
    if (f.tellp() == 0) f << sjq::csv_header() << '\n';
    f << sjq::format_row(row) << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, int jobs_override, bool gnuplot) {
  std::ifstream in(config_path);
  if (!in) throw std::domain_error("cannot open config: " + config_path);
  nlohmann::json j;
  in >> j;
  auto config = sjq::SweepConfig::from_json(j);
  if (jobs_override > 0) config.jobs = jobs_override;
  const auto outcome = sjq::run_sweep(config);
  sjq::write_csv(outcome.rows, config.out);
  sjq::write_metadata(config, outcome, config.out);
  if (gnuplot) sjq::write_gnuplot(config, config.out);
  std::printf("wrote %zu rows to %s\n", outcome.rows.size(), config.out.c_str());
  if (outcome.partial_failure) {
    for (const auto& row : outcome.rows)
      if (row.failed)
        std::fprintf(stderr, "failed point: %s (%s)\n", sjq::format_row(row).c_str(),
                     row.error.c_str());
    return kExitPartialSweep;
  }
  return kExitOk;
}

int cmd_limits(long N, long k, double eta, double gamma) {
  namespace lim = sjq::limits;
  std::printf("quantity,value\n");
  std::printf("ideal_limit,%.12g\n", lim::ideal_limit(N, k));
  const auto noon = lim::noon_limits(N, k, eta);
  std::printf("noon_fisher,%.12g\n", noon.fisher);
  std::printf("noon_delta_phi,%.12g\n", noon.delta_phi);
  const auto il = lim::interferometric_limits(N, k, eta);
  std::printf("sil,%.12g\n", il.sil);
  std::printf("scaled_limit,%.12g\n", il.scaled);
  std::printf("variance_delta_phi,%.12g\n", lim::variance_delta_phi(N, eta));
  std::printf("eta_critical,%.12g\n", lim::eta_critical(N, k));
  if (eta < 1.0) {
    const double nm = lim::n_min(k, eta);
    std::printf("n_min,%.12g\n", nm);
    std::printf("n_min_floor,%.0f\n", std::floor(nm));
    std::printf("n_min_round,%.0f\n", std::round(nm));
  }
  if (gamma > 0.0)
    std::printf("critical_time_s,%.12g\n", lim::critical_time(k, gamma, static_cast<double>(N)));
  return kExitOk;
}

int cmd_optimize(long N, long k, double eta, int starts, std::uint64_t seed,
                 const std::string& out) {
  sjq::OptimizerConfig config;
  config.starts = starts;
  config.seed = seed;
  const auto result = sjq::optimize_probe(N, k, sjq::LossChannel(eta), config);
  if (!out.empty()) sjq::save_state(result.state, out);
  std::printf(
      "N=%ld k=%ld eta=%.10g fisher=%.12g delta_phi=%.12g objective=bound "
      "converged=%d start=%d\n",
      N, k, eta, result.estimate.value, result.estimate.delta_phi_min,
      result.converged ? 1 : 0, result.best_start);
  if (!result.converged)
    std::fprintf(stderr, "warning: best start hit the iteration cap; result is best-effort\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lossy two-mode interferometer QFI toolkit"};
  app.require_subcommand(1);

  long N = 100, k = 1;
  double Lambda = 0.0, eta = 1.0, phi = 0.0, gamma = 0.0;
  bool lambda_set = false;
  std::string out, state_file, probe = "noon", method = "bound", config_path;
  std::uint64_t seed = 0;
  int jobs = 0, starts = 16;

  auto* ground = app.add_subcommand("ground", "SJJ ground state -> JSON state file");
  ground->add_option("--n", N, "total particle number")->required();
  auto* lam_opt = ground->add_option("--lambda", Lambda, "SJJ Lambda parameter")->required();
  ground->add_option("--out", out, "output state JSON path");

  auto* qfi = app.add_subcommand("qfi", "QFI of a probe state");
  qfi->add_option("--probe", probe, "noon|binomial|sjj|os");
  qfi->add_option("--state", state_file, "state JSON file (overrides --probe)");
  qfi->add_option("--n", N, "total particle number");
  auto* qfi_lam = qfi->add_option("--lambda", Lambda, "Lambda (probe=sjj)");
  qfi->add_option("--eta", eta, "channel transmissivity");
  qfi->add_option("--k", k, "phase exponent");
  qfi->add_option("--method", method, "pure|bound|exact|analytic");
  qfi->add_option("--phi", phi, "phase evaluation point (method=exact)");
  qfi->add_option("--seed", seed, "optimizer seed (probe=os)");
  qfi->add_option("--out", out, "append the row to this CSV");

  bool gnuplot = false;
  auto* sweep = app.add_subcommand("sweep", "run a sweep config -> CSV");
  sweep->add_option("--config", config_path, "sweep config JSON")->required();
  sweep->add_option("--jobs", jobs, "worker pool size (0 = cores)");
  sweep->add_flag("--gnuplot", gnuplot, "also write a <out>.gp plot script");

  auto* limits_cmd = app.add_subcommand("limits", "analytic precision limits table");
  limits_cmd->add_option("--n", N, "total particle number")->required();
  limits_cmd->add_option("--k", k, "phase exponent");
  limits_cmd->add_option("--eta", eta, "channel transmissivity");
  limits_cmd->add_option("--gamma", gamma, "one-body loss rate (1/s) for t_c");

  auto* opt = app.add_subcommand("optimize", "optimal probe for the QFI bound");
  opt->add_option("--n", N, "total particle number")->required();
  opt->add_option("--k", k, "phase exponent");
  opt->add_option("--eta", eta, "channel transmissivity");
  opt->add_option("--starts", starts, "multi-start count");
  opt->add_option("--seed", seed, "RNG seed");
  opt->add_option("--out", out, "output state JSON path");

  try {
    app.parse(argc, argv);
    lambda_set = lam_opt->count() > 0 || qfi_lam->count() > 0;
    if (ground->parsed()) return cmd_ground(N, Lambda, out);
    if (qfi->parsed())
      return cmd_qfi(probe, state_file, N,
                     lambda_set ? std::optional<double>(Lambda) : std::nullopt, eta,
                     k, method, phi, seed, out);
    if (sweep->parsed()) return cmd_sweep(config_path, jobs, gnuplot);
    if (limits_cmd->parsed()) return cmd_limits(N, k, eta, gamma);
    if (opt->parsed()) return cmd_optimize(N, k, eta, starts, seed, out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  } catch (const sjq::numeric_error& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitValidation;
}
