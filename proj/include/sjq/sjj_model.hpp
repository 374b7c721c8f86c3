#ifndef SJQ_SJJ_MODEL_HPP
#define SJQ_SJJ_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sjq/fock_core.hpp"
#include "sjq/tridiag.hpp"

// The two-soliton Josephson-junction model: tridiagonal Hamiltonian over
// the two-mode Fock basis |N-n>_a |n>_b, its ground state, and the
// reference probe states (N00N, binomial).

namespace sjq {

using complexd = std::complex<double>;

/// Normalized amplitudes A_0..A_N over the two-mode Fock basis.
/// Index n is the occupation of mode b; mode a holds N - n.
struct TwoModeState {
  long N{0};
  std::vector<complexd> amplitudes;

  TwoModeState() = default;
  TwoModeState(long N_, std::vector<complexd> amps)
      : N(N_), amplitudes(std::move(amps)) {
    if (N < 1) throw std::domain_error("TwoModeState: N must be >= 1");
    if (amplitudes.size() != static_cast<std::size_t>(N + 1))
      throw std::domain_error("TwoModeState: need N+1 amplitudes");
  }

  double norm_sq() const {
    KahanAccumulator acc;
    for (const auto& a : amplitudes) acc.add(std::norm(a));
    return acc.sum();
  }

  void normalize() {
    const double n2 = norm_sq();
    if (!(n2 > 0.0)) throw std::domain_error("TwoModeState: zero norm");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amplitudes) a *= inv;
  }

  /// |A_0|^2 + |A_N|^2, the cat-ness of the state.
  double edge_weight() const {
    return std::norm(amplitudes.front()) + std::norm(amplitudes.back());
  }
};

/// Model parameters; Lambda = u^2 N^2 / (16 kappa) is dimensionless.
struct SjjParams {
  long N{2};
  double Lambda{0.0};

  SjjParams(long N_, double Lambda_) : N(N_), Lambda(Lambda_) {
    if (!(Lambda >= 0.0) || !std::isfinite(Lambda))
      throw std::domain_error("SjjParams: Lambda must be finite and >= 0");
  }
};

/// Symmetric tridiagonal matrix: diagonal alpha_0..alpha_N and
/// off-diagonal beta_0..beta_{N-1}.
struct TridiagonalHamiltonian {
  long N{0};
  std::vector<double> alpha;
  std::vector<double> beta;

  double inf_norm() const {
    double m = 0.0;
    for (long n = 0; n <= N; ++n) {
      double row = std::abs(alpha[n]);
      if (n > 0) row += std::abs(beta[n - 1]);
      if (n < N) row += std::abs(beta[n]);
      m = std::max(m, row);
    }
    return m;
  }
};

/// alpha_n = -(Lambda/2)(2n/N - 1)^2,
/// beta_n  = -(1/N^2) { [1 - 0.21 (2n/N-1)^2] (n+1) sqrt((N-n)(N-n-1))
///                    + [1 - 0.21 (2(n+1)/N-1)^2] (N-n) sqrt(n(n+1)) }.
inline TridiagonalHamiltonian build_hamiltonian(const SjjParams& params) {
  const long N = params.N;
  if (N < 2)
    throw std::domain_error("build_hamiltonian: N must be >= 2 (N=1 is degenerate)");
  const double Nd = static_cast<double>(N);
  TridiagonalHamiltonian H;
  H.N = N;
  H.alpha.resize(N + 1);
  H.beta.resize(N);
  const auto z = [Nd](long n) { return 2.0 * static_cast<double>(n) / Nd - 1.0; };
  for (long n = 0; n <= N; ++n) {
    const double zn = z(n);
    H.alpha[n] = -0.5 * params.Lambda * zn * zn;
  }
  for (long n = 0; n < N; ++n) {
    const double zn = z(n);
    const double zn1 = z(n + 1);
    const double nd = static_cast<double>(n);
    const double t1 = (1.0 - 0.21 * zn * zn) * (nd + 1.0) *
                      std::sqrt((Nd - nd) * (Nd - nd - 1.0));
    const double t2 = (1.0 - 0.21 * zn1 * zn1) * (Nd - nd) *
                      std::sqrt(nd * (nd + 1.0));
    H.beta[n] = -(t1 + t2) / (Nd * Nd);
  }
  return H;
}

struct GroundStateResult {
  TwoModeState state;
  double energy{0.0};
  double residual{0.0};       // ||H A - E A||_2
  double gap{0.0};            // E_1 - E_0
  bool near_degenerate{false};  // gap below 1e-12 * ||H||
};

/// Lowest eigenpair of the SJJ Hamiltonian.  Sign convention: the
/// largest-magnitude amplitude is real positive.
inline GroundStateResult ground_state(const TridiagonalHamiltonian& H,
                                      int max_iterations = 50) {
  auto eig = tridiag::ground_eigenpair(H.alpha, H.beta, max_iterations);
  GroundStateResult result;
  result.energy = eig.eigenvalue;
  result.gap = eig.gap;
  result.near_degenerate = eig.gap <= 1e-12 * H.inf_norm();

  // Above the crossover the ground and first excited state form a cat
  // doublet whose splitting falls below machine precision, and inverse
  // iteration returns an arbitrary mixture.  The Hamiltonian commutes
  // with the mirror n -> N - n and its ground state is the nodeless
  // symmetric member, so project onto the symmetric subspace.
  const long N = H.N;
  std::vector<double> v = eig.eigenvector;
  double sym_norm2 = 0.0;
  for (long n = 0; n <= N; ++n) {
    const double s = 0.5 * (eig.eigenvector[n] + eig.eigenvector[N - n]);
    v[n] = s;
    sym_norm2 += s * s;
  }
  if (sym_norm2 > 1e-8) {
    const double inv = 1.0 / std::sqrt(sym_norm2);
    for (double& x : v) x *= inv;
  } else {
    v = eig.eigenvector;  // start vector is symmetry-biased; never expected
  }
  long imax = 0;
  for (long n = 1; n <= N; ++n)
    if (std::abs(v[n]) > std::abs(v[imax])) imax = n;
  if (v[imax] < 0.0)
    for (double& x : v) x = -x;

  double res2 = 0.0;
  for (long n = 0; n <= N; ++n) {
    double r = (H.alpha[n] - result.energy) * v[n];
    if (n > 0) r += H.beta[n - 1] * v[n - 1];
    if (n < N) r += H.beta[n] * v[n + 1];
    res2 += r * r;
  }
  result.residual = std::sqrt(res2);

  std::vector<complexd> amps(v.begin(), v.end());
  result.state = TwoModeState(N, std::move(amps));
  result.state.normalize();
  return result;
}

/// (|N,0> + |0,N>)/sqrt(2) in the b-occupation indexing.
inline TwoModeState noon_state(long N) {
  if (N < 1) throw std::domain_error("noon_state: N must be >= 1");
  std::vector<complexd> amps(N + 1, 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  amps.front() = r;
  amps.back() = r;
  return TwoModeState(N, std::move(amps));
}

/// A_n = sqrt(C(N,n)/2^N), the coherent-like probe.
inline TwoModeState binomial_state(long N) {
  if (N < 1) throw std::domain_error("binomial_state: N must be >= 1");
  std::vector<complexd> amps(N + 1);
  const double ln2 = std::log(2.0);
  for (long n = 0; n <= N; ++n)
    amps[n] = std::exp(0.5 * (log_binomial(N, n) - static_cast<double>(N) * ln2));
  TwoModeState state(N, std::move(amps));
  state.normalize();  // absorbs the ~1e-16 rounding of the exp sums
  return state;
}

/// Classical Hamilton value of a single bright soliton: -u^2 N^3 / 24.
inline double soliton_hamilton(double u, double N) {
  if (!(u > 0.0) || !(N > 0.0))
    throw std::domain_error("soliton_hamilton: u and N must be positive");
  return -u * u * N * N * N / 24.0;
}

/// Kerr phase-shift coefficient of the soliton medium: phi = -u^2 / 24.
inline double soliton_phase_coefficient(double u) {
  if (!(u > 0.0)) throw std::domain_error("soliton_phase_coefficient: u must be positive");
  return -u * u / 24.0;
}

struct CrossoverScanPoint {
  double Lambda;
  double edge_weight;
};

struct CrossoverScanResult {
  std::vector<CrossoverScanPoint> points;
  double steepest_Lambda{0.0};  // midpoint of the steepest edge-weight rise
};

/// Scan Lambda and report where the cat-ness |A_0|^2+|A_N|^2 of the
/// ground state rises fastest.  This is an empirical crossover locator,
/// not a claim about the model's critical point.
inline CrossoverScanResult crossover_scan(long N,
                                          const std::vector<double>& Lambda_grid) {
  if (Lambda_grid.size() < 2)
    throw std::domain_error("crossover_scan: need at least two grid points");
  CrossoverScanResult result;
  result.points.reserve(Lambda_grid.size());
  for (double L : Lambda_grid) {
    auto gs = ground_state(build_hamiltonian(SjjParams(N, L)));
    result.points.push_back({L, gs.state.edge_weight()});
  }
  double best_slope = -1.0;
  for (std::size_t i = 0; i + 1 < result.points.size(); ++i) {
    const auto& p0 = result.points[i];
    const auto& p1 = result.points[i + 1];
    const double dL = p1.Lambda - p0.Lambda;
    if (!(dL > 0.0)) throw std::domain_error("crossover_scan: grid must be increasing");
    const double slope = (p1.edge_weight - p0.edge_weight) / dL;
    if (slope > best_slope) {
      best_slope = slope;
      result.steepest_Lambda = 0.5 * (p0.Lambda + p1.Lambda);
    }
  }
  return result;
}

}  // namespace sjq

#endif  // SJQ_SJJ_MODEL_HPP
