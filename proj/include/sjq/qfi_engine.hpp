#ifndef SJQ_QFI_ENGINE_HPP
#define SJQ_QFI_ENGINE_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sjq/fock_core.hpp"
#include "sjq/loss_model.hpp"
#include "sjq/sjj_model.hpp"

// Quantum Fisher information of a phase-encoded two-mode probe, three ways:
// the pure-state variance formula, the exact mixed-state value via the
// symmetric-logarithmic-derivative double sum over sector eigenpairs, and
// the convexity upper bound over loss branches.
//
// All n^k sums are accumulated on values pre-scaled by N^{-k} with
// compensated summation, then rescaled; naive accumulation loses digits
// once N^{2k} approaches the double range.

namespace sjq {

class capacity_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class QfiMethod { pure, exact, bound, analytic };

inline const char* to_string(QfiMethod m) {
  switch (m) {
    case QfiMethod::pure: return "pure";
    case QfiMethod::exact: return "exact";
    case QfiMethod::bound: return "bound";
    case QfiMethod::analytic: return "analytic";
  }
  return "?";
}

struct QfiEstimate {
  double value{0.0};
  QfiMethod method{QfiMethod::pure};
  double delta_phi_min{std::numeric_limits<double>::infinity()};
  long k{1};
  double eta{1.0};

  static QfiEstimate make(double value, QfiMethod method, long k, double eta) {
    QfiEstimate e;
    e.value = value;
    e.method = method;
    e.k = k;
    e.eta = eta;
    e.delta_phi_min = value > 0.0 ? 1.0 / std::sqrt(value)
                                  : std::numeric_limits<double>::infinity();
    return e;
  }
};

namespace detail {

/// (n/N)^k without pow() drift.
inline double scaled_power(long n, long N, long k) {
  const double r = static_cast<double>(n) / static_cast<double>(N);
  double p = 1.0;
  for (long i = 0; i < k; ++i) p *= r;
  return p;
}

/// N^{2k} as a double.
inline double n_pow_2k(long N, long k) {
  double p = 1.0;
  for (long i = 0; i < 2 * k; ++i) p *= static_cast<double>(N);
  return p;
}

}  // namespace detail

/// F_Q = 4 [ sum n^{2k} |A_n|^2 - (sum n^k |A_n|^2)^2 ] for a pure probe.
inline QfiEstimate pure_qfi(const TwoModeState& state, long k) {
  if (k < 1) throw std::domain_error("pure_qfi: k must be >= 1");
  const long N = state.N;
  // Two-pass variance: the shifted form avoids the catastrophic
  // cancellation of sum(w^2 q) - mean^2 for concentrated probes.
  KahanAccumulator m1;
  for (long n = 0; n <= N; ++n)
    m1.add(detail::scaled_power(n, N, k) * std::norm(state.amplitudes[n]));
  const double mean = m1.sum();
  KahanAccumulator var;
  for (long n = 0; n <= N; ++n) {
    const double d = detail::scaled_power(n, N, k) - mean;
    var.add(d * d * std::norm(state.amplitudes[n]));
  }
  const double value = 4.0 * detail::n_pow_2k(N, k) * std::max(var.sum(), 0.0);
  return QfiEstimate::make(value, QfiMethod::pure, k, 1.0);
}

/// Convexity upper bound over loss branches:
/// F~ = 4 [ sum_n n^{2k} |A_n|^2
///        - sum_{l_a,l_b} ( sum_n n^k |C^n|^2 )^2 / sum_n |C^n|^2 ].
inline QfiEstimate qfi_upper_bound(const TwoModeState& state,
                                   const LossChannel& channel, long k) {
  if (k < 1) throw std::domain_error("qfi_upper_bound: k must be >= 1");
  const long N = state.N;
  std::vector<double> q(N + 1), w(N + 1);
  for (long n = 0; n <= N; ++n) {
    q[n] = std::norm(state.amplitudes[n]);
    w[n] = detail::scaled_power(n, N, k);
  }
  // sum_n w^2 q - sum_br s1^2/s0 == sum_br p_br Var_br(w), evaluated in
  // the per-branch shifted form: each term is non-negative and free of
  // the global cancellation that destroys small eta^N values.
  KahanAccumulator branch_sum;
  std::vector<double> c2(N + 1);
  for (long l_b = 0; l_b <= N; ++l_b) {
    for (long l_a = 0; l_a <= N - l_b; ++l_a) {
      KahanAccumulator s0, s1;
      for (long n = l_b; n <= N - l_a; ++n) {
        c2[n] = q[n] * loss_weight(N, n, l_a, l_b, channel);
        s0.add(c2[n]);
        s1.add(w[n] * c2[n]);
      }
      const double p = s0.sum();
      if (p <= 0.0) continue;
      const double mu = s1.sum() / p;
      KahanAccumulator var;
      for (long n = l_b; n <= N - l_a; ++n) {
        const double d = w[n] - mu;
        var.add(d * d * c2[n]);
      }
      branch_sum.add(var.sum());
    }
  }
  const double value = 4.0 * detail::n_pow_2k(N, k) * std::max(branch_sum.sum(), 0.0);
  return QfiEstimate::make(value, QfiMethod::bound, k, channel.eta_a());
}

struct ExactQfiConfig {
  long max_n{150};                // exact-mode particle cap
  double eigenvalue_floor{1e-12};  // relative to the total trace
};

/// Exact mixed-state QFI via the SLD double sum
///   F_Q = sum_{i,j : l_i + l_j > tau} 2 |<psi_i| drho |psi_j>|^2 / (l_i + l_j)
/// evaluated sector by sector (rho is block diagonal in the remaining
/// total particle number).
inline QfiEstimate qfi_exact(const TwoModeState& state, const LossChannel& channel,
                             long k, double phi = 0.0,
                             const ExactQfiConfig& config = {}) {
  if (k < 1) throw std::domain_error("qfi_exact: k must be >= 1");
  const long N = state.N;
  if (N > config.max_n)
    throw capacity_error("qfi_exact: N=" + std::to_string(N) +
                         " exceeds the exact-mode cap " +
                         std::to_string(config.max_n) +
                         "; use the bound method for large N");

  const auto decomp = decompose(state, channel, k, phi);

  // Assemble rho and drho/dphi per sector.  A branch contributes
  // c c^dag to rho and (dc) c^dag + c (dc)^dag to drho, with
  // dc_m = i (m + l_b)^k c_m.
  std::vector<Eigen::MatrixXcd> rho(N + 1), drho(N + 1);
  for (long M = 0; M <= N; ++M) {
    rho[M] = Eigen::MatrixXcd::Zero(M + 1, M + 1);
    drho[M] = Eigen::MatrixXcd::Zero(M + 1, M + 1);
  }
  for (const auto& branch : decomp.branches) {
    const long M = branch.remaining(N);
    Eigen::VectorXcd c(M + 1), dc(M + 1);
    for (long m = 0; m <= M; ++m) {
      c(m) = branch.amplitudes[m];
      dc(m) = complexd(0.0, 1.0) * phase_power(m + branch.l_b, k) * c(m);
    }
    rho[M].noalias() += c * c.adjoint();
    drho[M].noalias() += dc * c.adjoint() + c * dc.adjoint();
  }

  double trace = 0.0;
  for (long M = 0; M <= N; ++M) trace += rho[M].real().trace();
  const double tau = config.eigenvalue_floor * trace;

  KahanAccumulator fisher;
  for (long M = 0; M <= N; ++M) {
    if (rho[M].squaredNorm() == 0.0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho[M]);
    if (solver.info() != Eigen::Success)
      throw numeric_error("qfi_exact: sector eigendecomposition failed at M=" +
                          std::to_string(M));
    const auto& lambda = solver.eigenvalues();
    const Eigen::MatrixXcd W =
        solver.eigenvectors().adjoint() * drho[M] * solver.eigenvectors();
    const long dim = M + 1;
    for (long i = 0; i < dim; ++i) {
      for (long j = 0; j < dim; ++j) {
        const double denom = lambda(i) + lambda(j);
        if (denom > tau) fisher.add(2.0 * std::norm(W(i, j)) / denom);
      }
    }
  }
  return QfiEstimate::make(std::max(fisher.sum(), 0.0), QfiMethod::exact, k,
                           channel.eta_a());
}

struct CrossoverRow {
  double Lambda;
  double exact;
  double bound;
  double relative_gap;  // (bound - exact) / bound
};

/// Exact-vs-bound QFI gap across the superfluid -> Mott crossover, using
/// SJJ ground states as probes.
inline std::vector<CrossoverRow> crossover_discrepancy(
    long N, const std::vector<double>& Lambda_grid, const LossChannel& channel,
    long k, const ExactQfiConfig& config = {}) {
  std::vector<CrossoverRow> rows;
  rows.reserve(Lambda_grid.size());
  for (double L : Lambda_grid) {
    const auto gs = ground_state(build_hamiltonian(SjjParams(N, L)));
    const double exact = qfi_exact(gs.state, channel, k, 0.0, config).value;
    const double bound = qfi_upper_bound(gs.state, channel, k).value;
    const double gap = bound > 0.0 ? (bound - exact) / bound : 0.0;
    rows.push_back({L, exact, bound, gap});
  }
  return rows;
}

}  // namespace sjq

#endif  // SJQ_QFI_ENGINE_HPP
