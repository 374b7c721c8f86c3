#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "sjq/state_optimizer.hpp"

using namespace sjq;

TEST_CASE("lossless k=1 optimum recovers the N00N value") {
  OptimizerConfig config;
  config.seed = 1;
  const auto result = optimize_probe(10, 1, LossChannel(1.0), config);
  CHECK(result.estimate.value == doctest::Approx(100.0).epsilon(1e-6));
  CHECK(std::norm(result.state.amplitudes[0]) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::norm(result.state.amplitudes[10]) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("N=1 optimum matches an exhaustive 1-D scan") {
  for (double eta : {0.4, 0.9})
    for (long k : {1L, 2L}) {
      double best = 0.0;
      for (int i = 0; i <= 20000; ++i) {
        const double theta = 0.5 * M_PI * static_cast<double>(i) / 20000.0;
        std::vector<complexd> amps = {std::cos(theta), std::sin(theta)};
        best = std::max(best,
                        qfi_upper_bound(TwoModeState(1, amps), LossChannel(eta), k).value);
      }
      OptimizerConfig config;
      config.seed = 2;
      config.starts = 8;
      const auto result = optimize_probe(1, k, LossChannel(eta), config);
      CHECK(result.estimate.value == doctest::Approx(best).epsilon(1e-8));
    }
}

TEST_CASE("optimum dominates the standard candidate set") {
  OptimizerConfig config;
  config.seed = 3;
  const auto result = optimize_probe(10, 1, LossChannel(0.9), config);
  double best_candidate = qfi_upper_bound(noon_state(10), LossChannel(0.9), 1).value;
  best_candidate = std::max(
      best_candidate, qfi_upper_bound(binomial_state(10), LossChannel(0.9), 1).value);
  for (double L = 0.0; L <= 3.0 + 1e-9; L += 0.5) {
    const auto gs = ground_state(build_hamiltonian(SjjParams(10, L)));
    best_candidate =
        std::max(best_candidate, qfi_upper_bound(gs.state, LossChannel(0.9), 1).value);
  }
  CHECK(result.estimate.value >= best_candidate - 1e-9);
}

TEST_CASE("determinism for a fixed seed") {
  OptimizerConfig config;
  config.seed = 77;
  config.starts = 6;
  const auto a = optimize_probe(8, 3, LossChannel(0.7), config);
  const auto b = optimize_probe(8, 3, LossChannel(0.7), config);
  CHECK(a.estimate.value == b.estimate.value);  // bit identical
  CHECK(a.best_start == b.best_start);
  for (long n = 0; n <= 8; ++n)
    CHECK(a.state.amplitudes[n] == b.state.amplitudes[n]);
}

TEST_CASE("returned state is normalized and self-consistent") {
  OptimizerConfig config;
  config.seed = 5;
  const auto result = optimize_probe(12, 1, LossChannel(0.6), config);
  CHECK(result.state.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
  const double recomputed =
      qfi_upper_bound(result.state, LossChannel(0.6), 1).value;
  CHECK(result.estimate.value ==
        doctest::Approx(recomputed).epsilon(1e-12));
  for (long n = 0; n <= 12; ++n) {
    CHECK(result.state.amplitudes[n].imag() == 0.0);
    CHECK(result.state.amplitudes[n].real() >= 0.0);
  }
}

TEST_CASE("objective is monotone in eta") {
  OptimizerConfig config;
  config.seed = 6;
  config.starts = 8;
  double prev = -1.0;
  for (double eta : {0.5, 0.7, 0.9, 1.0}) {
    const auto result = optimize_probe(8, 1, LossChannel(eta), config);
    CHECK(result.estimate.value >= prev - 1e-9);
    prev = result.estimate.value;
  }
}

TEST_CASE("optimizer config validation") {
  OptimizerConfig config;
  config.starts = 0;
  CHECK_THROWS_AS(optimize_probe(4, 1, LossChannel(0.9), config), std::domain_error);
  OptimizerConfig exact_config;
  exact_config.objective = OptimizerObjective::exact;
  exact_config.exact_cap = 10;
  CHECK_THROWS_AS(optimize_probe(20, 1, LossChannel(0.9), exact_config),
                  capacity_error);
}

TEST_CASE("exact objective agrees with the bound objective when loss is off") {
  OptimizerConfig config;
  config.seed = 9;
  config.starts = 4;
  config.max_iterations = 300;
  config.objective = OptimizerObjective::exact;
  const auto result = optimize_probe(4, 1, LossChannel(1.0), config);
  CHECK(result.estimate.value == doctest::Approx(16.0).epsilon(1e-5));
}

TEST_CASE("figure ordering report") {
  OptimizerConfig config;
  config.seed = 10;
  const auto report =
      figure_ordering_check(12, 1, LossChannel(0.5), {0.0, 1.0, 2.0, 3.0}, config);
  REQUIRE(report.rows.size() == 7);
  CHECK(report.rows[0].label == "os");
  CHECK(report.os_dominates);
  // under heavy loss the optimum beats the N00N probe outright
  double noon_fisher = 0.0;
  for (const auto& row : report.rows)
    if (row.label == "noon") noon_fisher = row.fisher;
  CHECK(report.rows[0].fisher > noon_fisher * 1.5);

  const auto lossless =
      figure_ordering_check(12, 1, LossChannel(1.0), {}, config);
  CHECK(lossless.rows[0].fisher == doctest::Approx(144.0).epsilon(1e-6));
}
