#include <cmath>
#include <complex>

#include <doctest.h>

#include "oracles.hpp"
#include "sjq/loss_model.hpp"

using namespace sjq;

TEST_CASE("lossless channel gives a single live branch") {
  const auto state = oracles::random_state(6, 3);
  const auto decomp = decompose(state, LossChannel(1.0), 1, 0.4);
  CHECK(decomp.branches.size() == 7 * 8 / 2);
  double live = 0.0;
  for (const auto& branch : decomp.branches) {
    if (branch.l_a == 0 && branch.l_b == 0) {
      CHECK(branch.probability == doctest::Approx(1.0).epsilon(1e-12));
      for (long n = 0; n <= 6; ++n) {
        const complexd expected =
            state.amplitudes[n] * std::polar(1.0, static_cast<double>(n) * 0.4);
        CHECK(std::abs(branch.amplitudes[n] - expected) <= 1e-14);
      }
    } else {
      live += branch.probability;
      CHECK(branch.probability == 0.0);
    }
  }
  CHECK(live == 0.0);
}

TEST_CASE("noon no-loss branch probability is eta^N") {
  const auto decomp = decompose(noon_state(20), LossChannel(0.9), 1, 0.0);
  for (const auto& branch : decomp.branches)
    if (branch.l_a == 0 && branch.l_b == 0)
      CHECK(branch.probability ==
            doctest::Approx(std::pow(0.9, 20)).epsilon(1e-12));
  CHECK(std::pow(0.9, 20) == doctest::Approx(0.12158).epsilon(1e-4));
}

TEST_CASE("branch probabilities close to 1 and ignore phi") {
  for (long N : {3L, 17L, 80L, 200L}) {
    const auto state = oracles::random_state(N, 100 + N);
    const auto d0 = decompose(state, LossChannel(0.62, 0.87), 3, 0.0);
    const auto d1 = decompose(state, LossChannel(0.62, 0.87), 3, 0.7);
    CHECK(d0.total_probability() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(d0.branches.size() == static_cast<std::size_t>((N + 1) * (N + 2) / 2));
    for (std::size_t i = 0; i < d0.branches.size(); ++i)
      CHECK(d0.branches[i].probability ==
            doctest::Approx(d1.branches[i].probability).epsilon(1e-12));
  }
}

TEST_CASE("sector blocks match the explicit-environment oracle") {
  for (long N : {1L, 2L, 3L, 4L})
    for (double eta : {0.3, 0.7, 0.9})
      for (long k : {1L, 2L, 3L}) {
        const auto state = oracles::random_state(N, 1000 + 10 * N + k);
        const double phi = 0.3;
        const auto sectors = assemble_sectors(decompose(state, LossChannel(eta), k, phi));
        oracles::FourModeBasis basis(N);
        const auto blocks = oracles::traced_sector_blocks(
            basis, oracles::purified_output(basis, state, eta, eta, k, phi));
        for (long M = 0; M <= N; ++M)
          for (long i = 0; i <= M; ++i)
            for (long j = 0; j <= M; ++j)
              CHECK(std::abs(sectors[M].at(i, j) - blocks[M](i, j)) <= 1e-12);
      }
}

TEST_CASE("sector blocks with unequal arm transmissivities") {
  const auto state = oracles::random_state(3, 77);
  const auto sectors = assemble_sectors(decompose(state, LossChannel(0.4, 0.85), 2, 0.1));
  oracles::FourModeBasis basis(3);
  const auto blocks = oracles::traced_sector_blocks(
      basis, oracles::purified_output(basis, state, 0.4, 0.85, 2, 0.1));
  for (long M = 0; M <= 3; ++M)
    for (long i = 0; i <= M; ++i)
      for (long j = 0; j <= M; ++j)
        CHECK(std::abs(sectors[M].at(i, j) - blocks[M](i, j)) <= 1e-12);
}

TEST_CASE("sector invariants: hermitian, PSD, unit total weight") {
  const auto state = oracles::random_state(12, 5);
  const auto sectors = assemble_sectors(decompose(state, LossChannel(0.8), 1, 0.25));
  double total = 0.0;
  for (const auto& sector : sectors) {
    total += sector.weight;
    Eigen::MatrixXcd m(sector.M + 1, sector.M + 1);
    for (long i = 0; i <= sector.M; ++i)
      for (long j = 0; j <= sector.M; ++j) {
        m(i, j) = sector.at(i, j);
        CHECK(std::abs(sector.at(i, j) - std::conj(sector.at(j, i))) <= 1e-12);
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    for (long i = 0; i <= sector.M; ++i) CHECK(solver.eigenvalues()(i) >= -1e-10);
    CHECK(m.real().trace() == doctest::Approx(sector.weight).epsilon(1e-10));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("lossless sectors reduce to the pure projector") {
  const auto state = oracles::random_state(5, 9);
  const auto sectors = assemble_sectors(decompose(state, LossChannel(1.0), 2, 0.3));
  for (long M = 0; M < 5; ++M) CHECK(sectors[M].weight == 0.0);
  const auto& top = sectors[5];
  CHECK(top.weight == doctest::Approx(1.0).epsilon(1e-12));
  for (long i = 0; i <= 5; ++i)
    for (long j = 0; j <= 5; ++j) {
      const complexd ci = state.amplitudes[i] *
                          std::polar(1.0, static_cast<double>(i * i) * 0.3);
      const complexd cj = state.amplitudes[j] *
                          std::polar(1.0, static_cast<double>(j * j) * 0.3);
      CHECK(std::abs(top.at(i, j) - ci * std::conj(cj)) <= 1e-13);
    }
}

TEST_CASE("lossy noon keeps coherence only in the top sector") {
  const long N = 8;
  const double eta = 0.75;
  const auto sectors = assemble_sectors(decompose(noon_state(N), LossChannel(eta), 1, 0.2));
  // top sector: 2x2 coherent block between m=0 and m=N with weight eta^N
  const auto& top = sectors[N];
  CHECK(std::abs(top.at(0, N)) == doctest::Approx(0.5 * std::pow(eta, N)).epsilon(1e-10));
  // lower sectors are diagonal
  for (long M = 0; M < N; ++M)
    for (long i = 0; i <= M; ++i)
      for (long j = 0; j <= M; ++j)
        if (i != j) CHECK(std::abs(sectors[M].at(i, j)) <= 1e-14);
}

TEST_CASE("noon loss distribution forms") {
  const auto binom = noon_loss_distribution(100, 0.8, NoonLossForm::binomial);
  KahanAccumulator sum;
  for (double p : binom) sum.add(p);
  CHECK(sum.sum() == doctest::Approx(1.0).epsilon(1e-12));

  const auto lossless = noon_loss_distribution(12, 1.0, NoonLossForm::binomial);
  CHECK(lossless[12] == 1.0);
  for (long n = 0; n < 12; ++n) CHECK(lossless[n] == 0.0);

  // gaussian form: mean 80, width 2 sqrt(N(1-eta)) ~ 9 at N=100, eta=0.8
  CHECK(noon_gauss_mean(100, 0.8) == doctest::Approx(80.0));
  CHECK(noon_gauss_width(100, 0.8) == doctest::Approx(9.0).epsilon(0.01));
  const auto gauss = noon_loss_distribution(100, 0.8, NoonLossForm::gauss);
  double m0 = 0.0, m1 = 0.0;
  for (long n = 0; n <= 100; ++n) {
    m0 += gauss[n];
    m1 += static_cast<double>(n) * gauss[n];
  }
  CHECK(m1 / m0 == doctest::Approx(80.0).epsilon(1e-6));

  CHECK_THROWS_AS(noon_loss_distribution(100, 1.0, NoonLossForm::gauss),
                  std::domain_error);
}

TEST_CASE("binomial vs poisson forms agree near eta=1") {
  const auto binom = noon_loss_distribution(100, 0.98, NoonLossForm::binomial);
  const auto poisson = noon_loss_distribution(100, 0.98, NoonLossForm::poisson);
  double tv = 0.0;
  for (long n = 0; n <= 100; ++n) tv += std::abs(binom[n] - poisson[n]);
  CHECK(tv / 2.0 < 0.05);
}
