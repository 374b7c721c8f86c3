#ifndef SJQ_SWEEP_HPP
#define SJQ_SWEEP_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "sjq/analytic_limits.hpp"
#include "sjq/qfi_engine.hpp"
#include "sjq/sjj_model.hpp"
#include "sjq/state_optimizer.hpp"

// Sweep harness: evaluate a (probe, N, Lambda, eta, k, method) grid and
// emit a flat CSV plus a JSON metadata sidecar.  Grid points are
// independent tasks; rows are sorted before writing, so parallel and
// serial runs produce identical bytes.

namespace sjq {

inline constexpr const char* kVersion = "1.0.0";

namespace sweep_detail {

inline std::vector<double> parse_real_grid(const nlohmann::json& j) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<double>());
  } else if (j.is_object()) {
    const double start = j.at("start").get<double>();
    const double stop = j.at("stop").get<double>();
    const double step = j.at("step").get<double>();
    if (!(step > 0.0)) throw std::domain_error("grid: step must be > 0");
    for (double x = start; x <= stop + 0.5 * step; x += step)
      out.push_back(std::min(x, stop));
    if (!out.empty() && out.back() < stop - 1e-12) out.push_back(stop);
  } else if (j.is_number()) {
    out.push_back(j.get<double>());
  } else {
    throw std::domain_error("grid: expected number, list, or {start,stop,step}");
  }
  return out;
}

inline std::vector<long> parse_int_grid(const nlohmann::json& j) {
  std::vector<long> out;
  for (double x : parse_real_grid(j)) out.push_back(std::lround(x));
  return out;
}

inline std::string format_double(double x, const char* fmt = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, x);
  return buf;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace sweep_detail

struct SweepConfig {
  std::vector<std::string> probes;  // noon | binomial | os | sjj
  std::vector<long> n_values;
  std::vector<double> lambda_values;  // SJJ probes only
  std::vector<double> eta_values;
  std::vector<long> k_values;
  std::vector<std::string> methods;  // bound | exact | analytic
  double phi{0.0};
  std::string out;
  std::uint64_t seed{0};
  int jobs{0};           // 0 = all logical cores
  bool timings{false};   // measured wall_ms column (breaks byte determinism)
  long exact_cap{150};
  int optimizer_starts{16};

  static SweepConfig from_json(const nlohmann::json& j) {
    SweepConfig c;
    for (const auto& p : j.at("probes")) c.probes.push_back(p.get<std::string>());
    c.n_values = sweep_detail::parse_int_grid(j.at("N"));
    if (j.contains("Lambda"))
      c.lambda_values = sweep_detail::parse_real_grid(j.at("Lambda"));
    c.eta_values = sweep_detail::parse_real_grid(j.at("eta"));
    c.k_values = sweep_detail::parse_int_grid(j.at("k"));
    for (const auto& m : j.at("methods")) c.methods.push_back(m.get<std::string>());
    c.phi = j.value("phi", 0.0);
    c.out = j.value("out", std::string("sweep.csv"));
    c.seed = j.value("seed", std::uint64_t{0});
    c.jobs = j.value("jobs", 0);
    c.timings = j.value("timings", false);
    c.exact_cap = j.value("exact_cap", 150L);
    c.optimizer_starts = j.value("optimizer_starts", 16);
    c.validate();
    return c;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["probes"] = probes;
    j["N"] = n_values;
    j["Lambda"] = lambda_values;
    j["eta"] = eta_values;
    j["k"] = k_values;
    j["methods"] = methods;
    j["phi"] = phi;
    j["out"] = out;
    j["seed"] = seed;
    j["jobs"] = jobs;
    j["timings"] = timings;
    j["exact_cap"] = exact_cap;
    j["optimizer_starts"] = optimizer_starts;
    return j;
  }

  void validate() const {
    if (probes.empty() || n_values.empty() || eta_values.empty() ||
        k_values.empty() || methods.empty())
      throw std::domain_error("sweep config: empty grid");
    for (const auto& p : probes)
      if (p != "noon" && p != "binomial" && p != "os" && p != "sjj")
        throw std::domain_error("sweep config: unknown probe '" + p + "'");
    for (const auto& m : methods)
      if (m != "bound" && m != "exact" && m != "analytic")
        throw std::domain_error("sweep config: unknown method '" + m + "'");
    bool has_sjj = false;
    for (const auto& p : probes) has_sjj |= p == "sjj";
    if (has_sjj && lambda_values.empty())
      throw std::domain_error("sweep config: sjj probe requires a Lambda grid");
    for (const auto& m : methods)
      if (m == "exact")
        for (long n : n_values)
          if (n > exact_cap)
            throw std::domain_error(
                "sweep config: exact method requested with N=" + std::to_string(n) +
                " above the exact cap " + std::to_string(exact_cap));
    for (double e : eta_values)
      if (!(e > 0.0 && e <= 1.0))
        throw std::domain_error("sweep config: eta must lie in (0, 1]");
    if (out.empty()) throw std::domain_error("sweep config: empty output path");
  }
};

struct SweepRow {
  std::string probe;
  long N{0};
  std::optional<double> Lambda;
  double eta{1.0};
  long k{1};
  std::string method;
  double fisher{0.0};
  double delta_phi{0.0};
  long wall_ms{0};
  bool failed{false};
  std::string error;

  auto sort_key() const {
    return std::make_tuple(probe, N, Lambda.value_or(-1.0), eta, k, method);
  }
};

inline std::string csv_header() {
  return "probe,N,Lambda,eta,k,method,fisher,delta_phi,wall_ms";
}

inline std::string format_row(const SweepRow& row) {
  using sweep_detail::format_double;
  std::string s = row.probe + "," + std::to_string(row.N) + ",";
  if (row.Lambda) s += format_double(*row.Lambda, "%.10g");
  s += "," + format_double(row.eta, "%.10g") + "," + std::to_string(row.k) + "," +
       row.method + ",";
  if (row.failed) {
    s += "error,error,";
  } else {
    s += format_double(row.fisher) + "," + format_double(row.delta_phi) + ",";
  }
  s += std::to_string(row.wall_ms);
  return s;
}

struct SweepOutcome {
  std::vector<SweepRow> rows;
  bool partial_failure{false};
};

/// Evaluate one grid point.  Throws on invalid combinations; the sweep
/// loop converts exceptions into error-marked rows.
inline void evaluate_row(SweepRow& row, const SweepConfig& config) {
  const LossChannel channel(row.eta);
  if (row.method == "analytic") {
    if (row.probe != "noon")
      throw std::domain_error("method=analytic is only defined for probe=noon");
    const auto lim = limits::noon_limits(row.N, row.k, row.eta);
    row.fisher = lim.fisher;
    row.delta_phi = lim.delta_phi;
    return;
  }

  TwoModeState state;
  if (row.probe == "noon") {
    state = noon_state(row.N);
  } else if (row.probe == "binomial") {
    state = binomial_state(row.N);
  } else if (row.probe == "sjj") {
    state = ground_state(build_hamiltonian(SjjParams(row.N, *row.Lambda))).state;
  } else {  // os
    OptimizerConfig oc;
    oc.seed = config.seed;
    oc.starts = config.optimizer_starts;
    state = optimize_probe(row.N, row.k, channel, oc).state;
  }

  QfiEstimate est;
  if (row.method == "bound") {
    est = qfi_upper_bound(state, channel, row.k);
  } else {  // exact
    ExactQfiConfig ec;
    ec.max_n = config.exact_cap;
    est = qfi_exact(state, channel, row.k, config.phi, ec);
  }
  row.fisher = est.value;
  row.delta_phi = est.delta_phi_min;
}

/// Run the full grid with a bounded worker pool and return sorted rows.
inline SweepOutcome run_sweep(const SweepConfig& config) {
  config.validate();
  std::vector<SweepRow> rows;
  for (const auto& probe : config.probes) {
    const bool is_sjj = probe == "sjj";
    const std::vector<std::optional<double>> lambdas =
        is_sjj ? [&] {
          std::vector<std::optional<double>> v;
          for (double L : config.lambda_values) v.emplace_back(L);
          return v;
        }()
               : std::vector<std::optional<double>>{std::nullopt};
    for (long N : config.n_values)
      for (const auto& L : lambdas)
        for (double eta : config.eta_values)
          for (long k : config.k_values)
            for (const auto& method : config.methods) {
              if (method == "analytic" && probe != "noon") continue;
              SweepRow row;
              row.probe = probe;
              row.N = N;
              row.Lambda = L;
              row.eta = eta;
              row.k = k;
              row.method = method;
              rows.push_back(std::move(row));
            }
  }
  if (rows.empty()) throw std::domain_error("sweep: grid produced no rows");

  const unsigned pool = config.jobs > 0
                            ? static_cast<unsigned>(config.jobs)
                            : std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> any_failed{false};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= rows.size()) return;
      auto& row = rows[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        evaluate_row(row, config);
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
        any_failed = true;
      }
      if (config.timings) {
        const auto t1 = std::chrono::steady_clock::now();
        row.wall_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
      }
    }
  };
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < pool; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  std::sort(rows.begin(), rows.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.sort_key() < b.sort_key(); });
  return {std::move(rows), any_failed.load()};
}

/// Atomic CSV write: temp file in place, then rename.
inline void write_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << csv_header() << '\n';
    for (const auto& row : rows) out << format_row(row) << '\n';
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + tmp + " -> " + path);
}

/// Companion metadata sidecar: <out>.meta.json.
inline void write_metadata(const SweepConfig& config, const SweepOutcome& outcome,
                           const std::string& csv_path) {
  nlohmann::json meta;
  const std::string canonical = config.to_json().dump();
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(sweep_detail::fnv1a(canonical)));
  meta["config"] = config.to_json();
  meta["config_hash"] = hash;
  meta["seed"] = config.seed;
  meta["version"] = kVersion;
  meta["rows"] = outcome.rows.size();
  meta["partial_failure"] = outcome.partial_failure;
  meta["optimizer_objective"] = "bound";  // objective used for probe=os rows
  meta["note"] =
      "SIL prefactor exact; k>1 scaled limit and gaussian/poisson loss forms "
      "are scaling laws with unit prefactor";
  std::ofstream out(csv_path + ".meta.json");
  if (!out) throw std::runtime_error("cannot write metadata for " + csv_path);
  out << meta.dump(2) << '\n';
}

/// Companion gnuplot script: <out>.gp.  Picks the axis with more grid
/// points as the abscissa; plotting stays out of process.
inline void write_gnuplot(const SweepConfig& config, const std::string& csv_path) {
  const bool vs_eta = config.eta_values.size() > config.n_values.size();
  std::ofstream out(csv_path + ".gp");
  if (!out) throw std::runtime_error("cannot write gnuplot script for " + csv_path);
  out << "set datafile separator ','\n"
      << "set logscale y\n"
      << "set key outside\n"
      << "set xlabel '" << (vs_eta ? "eta" : "N") << "'\n"
      << "set ylabel 'delta phi min'\n"
      << "plot '" << csv_path << "' using " << (vs_eta ? 4 : 2)
      << ":8 with points title 'sweep rows'\n";
}

}  // namespace sjq

#endif  // SJQ_SWEEP_HPP
