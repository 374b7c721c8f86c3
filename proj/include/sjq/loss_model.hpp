#ifndef SJQ_LOSS_MODEL_HPP
#define SJQ_LOSS_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sjq/fock_core.hpp"
#include "sjq/sjj_model.hpp"

// Loss-branch decomposition of a phase-encoded probe.  The channel is two
// fictitious beam splitters; conditioning on the number of lost particles
// (l_a, l_b) gives a pure branch, and the lossy state is the mixture of
// all branches.  Different remaining totals M = N - l_a - l_b live in
// orthogonal sectors, so the density matrix is kept as per-M blocks.

namespace sjq {

/// One loss branch.  amplitudes[m] = C^{n}_{l_a,l_b} e^{i n^k phi} with
/// n = m + l_b; stored unnormalized so that sum |amplitudes|^2 = probability.
struct Branch {
  long l_a{0};
  long l_b{0};
  std::vector<complexd> amplitudes;  // indexed by m = n - l_b, m in [0, M]
  double probability{0.0};

  long remaining(long N) const { return N - l_a - l_b; }
};

struct BranchDecomposition {
  long N{0};
  long k{1};
  double phi{0.0};
  std::vector<Branch> branches;  // sorted by (l_b, l_a)

  double total_probability() const {
    KahanAccumulator acc;
    for (const auto& b : branches) acc.add(b.probability);
    return acc.sum();
  }
};

/// phase n^k in double; n^k stays well inside the double integer range
/// for the supported N.
inline double phase_power(long n, long k) {
  double p = 1.0;
  for (long i = 0; i < k; ++i) p *= static_cast<double>(n);
  return p;
}

/// Split the phase-encoded probe into all (l_a, l_b) loss branches.
/// The phase e^{i n^k phi} is attached to the pre-loss occupation n
/// (phase imprinted before the channel).
inline BranchDecomposition decompose(const TwoModeState& state,
                                     const LossChannel& channel, long k,
                                     double phi) {
  if (k < 1) throw std::domain_error("decompose: k must be >= 1");
  const long N = state.N;
  BranchDecomposition decomp;
  decomp.N = N;
  decomp.k = k;
  decomp.phi = phi;
  decomp.branches.reserve(static_cast<std::size_t>((N + 1) * (N + 2) / 2));
  for (long l_b = 0; l_b <= N; ++l_b) {
    for (long l_a = 0; l_a <= N - l_b; ++l_a) {
      Branch branch;
      branch.l_a = l_a;
      branch.l_b = l_b;
      const long M = N - l_a - l_b;
      branch.amplitudes.resize(M + 1);
      KahanAccumulator prob;
      for (long m = 0; m <= M; ++m) {
        const long n = m + l_b;
        const double w = loss_weight(N, n, l_a, l_b, channel);
        const double theta = phase_power(n, k) * phi;
        const complexd c =
            state.amplitudes[n] * std::sqrt(w) * std::polar(1.0, theta);
        branch.amplitudes[m] = c;
        prob.add(std::norm(c));
      }
      branch.probability = prob.sum();
      decomp.branches.push_back(std::move(branch));
    }
  }
  return decomp;
}

/// Density-matrix block at fixed remaining total M; basis index m is the
/// remaining b-occupation (mode a holds M - m).
struct SectorDensityMatrix {
  long M{0};
  std::vector<complexd> matrix;  // row-major (M+1) x (M+1)
  double weight{0.0};            // trace of the block

  complexd& at(long i, long j) { return matrix[i * (M + 1) + j]; }
  const complexd& at(long i, long j) const { return matrix[i * (M + 1) + j]; }
};

/// Sum the branch projectors into per-M blocks.  Output is ordered
/// M = 0..N; total trace is 1 for a normalized input.
inline std::vector<SectorDensityMatrix> assemble_sectors(
    const BranchDecomposition& decomp) {
  const long N = decomp.N;
  std::vector<SectorDensityMatrix> sectors(N + 1);
  for (long M = 0; M <= N; ++M) {
    sectors[M].M = M;
    sectors[M].matrix.assign(static_cast<std::size_t>(M + 1) * (M + 1), 0.0);
  }
  for (const auto& branch : decomp.branches) {
    const long M = branch.remaining(N);
    auto& sector = sectors[M];
    for (long i = 0; i <= M; ++i) {
      const complexd ci = branch.amplitudes[i];
      if (ci == complexd(0.0)) continue;
      for (long j = 0; j <= M; ++j)
        sector.at(i, j) += ci * std::conj(branch.amplitudes[j]);
    }
    sector.weight += branch.probability;
  }
  return sectors;
}

enum class NoonLossForm { binomial, poisson, gauss };

/// Remaining-particle distribution of a lossy N00N state, n = 0..N.
/// The binomial form is exact; poisson and gauss are the paper's
/// asymptotic approximations and are returned unrenormalized.
inline std::vector<double> noon_loss_distribution(long N, double eta,
                                                  NoonLossForm form) {
  if (N < 1) throw std::domain_error("noon_loss_distribution: N must be >= 1");
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::domain_error("noon_loss_distribution: eta must lie in (0, 1]");
  std::vector<double> p(N + 1, 0.0);
  const double mu = static_cast<double>(N) * (1.0 - eta);
  switch (form) {
    case NoonLossForm::binomial:
      if (eta == 1.0) {
        p[N] = 1.0;
      } else {
        for (long n = 0; n <= N; ++n)
          p[n] = std::exp(log_binomial(N, n) + static_cast<double>(n) * std::log(eta) +
                          static_cast<double>(N - n) * std::log1p(-eta));
      }
      break;
    case NoonLossForm::poisson:
      if (mu == 0.0) {
        p[N] = 1.0;
      } else {
        for (long n = 0; n <= N; ++n) {
          const double lost = static_cast<double>(N - n);
          p[n] = std::exp(lost * std::log(mu) - std::lgamma(lost + 1.0) - mu);
        }
      }
      break;
    case NoonLossForm::gauss: {
      if (mu == 0.0)
        throw std::domain_error("noon_loss_distribution: gauss form needs N(1-eta) > 0");
      const double norm = 1.0 / std::sqrt(2.0 * M_PI * mu);
      const double mean = static_cast<double>(N) * eta;
      for (long n = 0; n <= N; ++n) {
        const double d = static_cast<double>(n) - mean;
        p[n] = norm * std::exp(-d * d / (2.0 * mu));
      }
      break;
    }
  }
  return p;
}

/// Mean remaining particle number of the gaussian form: N eta.
inline double noon_gauss_mean(long N, double eta) {
  return static_cast<double>(N) * eta;
}

/// Width of the gaussian form: 2 sqrt(N (1 - eta)).
inline double noon_gauss_width(long N, double eta) {
  return 2.0 * std::sqrt(static_cast<double>(N) * (1.0 - eta));
}

}  // namespace sjq

#endif  // SJQ_LOSS_MODEL_HPP
