#ifndef SJQ_TESTS_ORACLES_HPP
#define SJQ_TESTS_ORACLES_HPP

// Independent test oracles.  Nothing here may call into the library
// code paths it is used to check: binomials come from exact big-integer
// arithmetic, ground states from a dense eigensolver, lossy density
// matrices from an explicit-environment beam-splitter simulation, and
// the mixed-state Fisher information from the literal eigen-derivative
// formula with finite differences.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <complex>
#include <map>
#include <random>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "sjq/sjj_model.hpp"

namespace oracles {

using complexd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// ---------------------------------------------------------------- binomials

inline boost::multiprecision::cpp_int exact_binomial(long n, long r) {
  boost::multiprecision::cpp_int c = 1;
  r = std::min(r, n - r);
  for (long i = 0; i < r; ++i) {
    c *= (n - i);
    c /= (i + 1);
  }
  return c;
}

/// ln of a positive big integer via its top bits.
inline double log_of_cpp_int(const boost::multiprecision::cpp_int& v) {
  const long bits = static_cast<long>(boost::multiprecision::msb(v)) + 1;
  const long shift = std::max(0L, bits - 64);
  const auto top = static_cast<std::uint64_t>(v >> shift);
  return (std::log2(static_cast<double>(top)) + static_cast<double>(shift)) *
         std::log(2.0);
}

inline double log_binomial_oracle(long n, long r) {
  return log_of_cpp_int(exact_binomial(n, r));
}

// ------------------------------------------------------- dense ground state

struct DenseEigenResult {
  double eigenvalue;
  VectorXd eigenvector;  // sign: largest-magnitude component positive
};

inline DenseEigenResult dense_ground_state(const sjq::TridiagonalHamiltonian& H) {
  const long n = H.N + 1;
  MatrixXd M = MatrixXd::Zero(n, n);
  for (long i = 0; i < n; ++i) M(i, i) = H.alpha[i];
  for (long i = 0; i + 1 < n; ++i) {
    M(i, i + 1) = H.beta[i];
    M(i + 1, i) = H.beta[i];
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(M);
  DenseEigenResult result;
  result.eigenvalue = solver.eigenvalues()(0);
  result.eigenvector = solver.eigenvectors().col(0);
  // Within a numerically degenerate cat doublet the solver returns an
  // arbitrary mixture; the physical ground state is the mirror-symmetric
  // member, so project onto it (the model Hamiltonian commutes with the
  // mirror n -> N - n).
  for (long i = 0; i < n / 2; ++i) {
    const double s = 0.5 * (result.eigenvector(i) + result.eigenvector(n - 1 - i));
    result.eigenvector(i) = s;
    result.eigenvector(n - 1 - i) = s;
  }
  result.eigenvector.normalize();
  long imax = 0;
  for (long i = 1; i < n; ++i)
    if (std::abs(result.eigenvector(i)) > std::abs(result.eigenvector(imax))) imax = i;
  if (result.eigenvector(imax) < 0.0) result.eigenvector = -result.eigenvector;
  return result;
}

// ------------------------------------- explicit-environment loss simulation

/// Basis of the four-mode space (a, b, env_a, env_b) at fixed total N.
struct FourModeBasis {
  long N;
  std::vector<std::array<long, 4>> kets;  // (na, nb, la, lb)
  std::map<std::array<long, 4>, long> index;

  explicit FourModeBasis(long N_) : N(N_) {
    for (long na = 0; na <= N; ++na)
      for (long nb = 0; nb + na <= N; ++nb)
        for (long la = 0; la + na + nb <= N; ++la) {
          const long lb = N - na - nb - la;
          kets.push_back({na, nb, la, lb});
          index[{na, nb, la, lb}] = static_cast<long>(kets.size()) - 1;
        }
  }
  long dim() const { return static_cast<long>(kets.size()); }
};

/// Beam-splitter unitary exp(theta (a^dag e - e^dag a)) on the chosen
/// (system, environment) mode pair, built by exponentiating the generator.
inline MatrixXcd beam_splitter_unitary(const FourModeBasis& basis, double eta,
                                       bool arm_a) {
  const long dim = basis.dim();
  MatrixXd K = MatrixXd::Zero(dim, dim);
  const int sys = arm_a ? 0 : 1;
  const int env = arm_a ? 2 : 3;
  for (long i = 0; i < dim; ++i) {
    auto ket = basis.kets[i];
    // a^dag e term: raises sys, lowers env.
    if (ket[env] > 0) {
      auto raised = ket;
      raised[sys] += 1;
      raised[env] -= 1;
      const long j = basis.index.at(raised);
      const double amp = std::sqrt(static_cast<double>(ket[sys] + 1) *
                                   static_cast<double>(ket[env]));
      K(j, i) += amp;   // a^dag e
      K(i, j) -= amp;   // -e^dag a (anti-Hermitian partner)
    }
  }
  const double theta = std::acos(std::sqrt(eta));
  // K is real antisymmetric; iK is Hermitian, so U = V e^{-i theta D} V^dag.
  const MatrixXcd A = complexd(0.0, 1.0) * K.cast<complexd>();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(A);
  const VectorXd d = solver.eigenvalues();
  MatrixXcd phases = MatrixXcd::Zero(dim, dim);
  for (long i = 0; i < dim; ++i)
    phases(i, i) = std::polar(1.0, -theta * d(i));
  return solver.eigenvectors() * phases * solver.eigenvectors().adjoint();
}

/// Full post-loss pure state in the four-mode space for a phase-encoded
/// probe, by applying both beam-splitter unitaries to |psi>|0>|0>.
inline VectorXcd purified_output(const FourModeBasis& basis,
                                 const sjq::TwoModeState& state, double eta_a,
                                 double eta_b, long k, double phi) {
  const long N = basis.N;
  VectorXcd psi = VectorXcd::Zero(basis.dim());
  for (long n = 0; n <= N; ++n) {
    double nk = 1.0;
    for (long i = 0; i < k; ++i) nk *= static_cast<double>(n);
    psi(basis.index.at({N - n, n, 0, 0})) =
        state.amplitudes[n] * std::polar(1.0, nk * phi);
  }
  psi = beam_splitter_unitary(basis, eta_a, true) * psi;
  psi = beam_splitter_unitary(basis, eta_b, false) * psi;
  return psi;
}

/// Partial trace over the environment modes, returned as per-M blocks
/// indexed by the remaining b-occupation (matching assemble_sectors).
inline std::vector<MatrixXcd> traced_sector_blocks(const FourModeBasis& basis,
                                                   const VectorXcd& psi) {
  const long N = basis.N;
  std::vector<MatrixXcd> blocks(N + 1);
  for (long M = 0; M <= N; ++M) blocks[M] = MatrixXcd::Zero(M + 1, M + 1);
  for (long i = 0; i < basis.dim(); ++i) {
    const auto& ki = basis.kets[i];
    if (psi(i) == complexd(0.0)) continue;
    const long M = ki[0] + ki[1];
    for (long m2 = 0; m2 <= M; ++m2) {
      const auto it = basis.index.find({M - m2, m2, ki[2], ki[3]});
      if (it == basis.index.end()) continue;
      blocks[M](ki[1], m2) += psi(i) * std::conj(psi(it->second));
    }
  }
  return blocks;
}

/// Full lossy density matrix over the (na, nb) system basis, flattened
/// across sectors (ordered M = 0..N, m = 0..M).
inline MatrixXcd traced_full_density(const FourModeBasis& basis,
                                     const VectorXcd& psi) {
  const long N = basis.N;
  const auto blocks = traced_sector_blocks(basis, psi);
  const long dim = (N + 1) * (N + 2) / 2;
  MatrixXcd rho = MatrixXcd::Zero(dim, dim);
  long offset = 0;
  for (long M = 0; M <= N; ++M) {
    rho.block(offset, offset, M + 1, M + 1) = blocks[M];
    offset += M + 1;
  }
  return rho;
}

inline MatrixXcd lossy_density_at(const sjq::TwoModeState& state, double eta_a,
                                  double eta_b, long k, double phi) {
  FourModeBasis basis(state.N);
  return traced_full_density(basis, purified_output(basis, state, eta_a, eta_b, k, phi));
}

// -------------------------------------------- literal mixed-state QFI (FD)

/// Literal eigen-derivative Fisher information:
///   F = sum_i [ (dlambda_i)^2 / lambda_i + 4 lambda_i <psi_i'|psi_i'>
///             - sum_j 8 lambda_i lambda_j / (lambda_i + lambda_j)
///               |<psi_i|psi_j'>|^2 ],
/// with eigenvector derivatives from gauge-aligned central differences.
inline double literal_qfi(const sjq::TwoModeState& state, double eta, long k,
                          double phi, double delta = 0.0,
                          double rank_floor = 1e-10) {
  // Auto step: the fastest branch phase rotates at N^k, so scale the
  // stencil to keep the truncation error uniform in k.
  if (delta <= 0.0)
    delta = 1e-5 / std::max(1.0, std::pow(static_cast<double>(state.N),
                                          static_cast<double>(k)));
  const auto rho0 = lossy_density_at(state, eta, eta, k, phi);
  const auto rho_p = lossy_density_at(state, eta, eta, k, phi + delta);
  const auto rho_m = lossy_density_at(state, eta, eta, k, phi - delta);
  const long dim = rho0.rows();

  Eigen::SelfAdjointEigenSolver<MatrixXcd> s0(rho0), sp(rho_p), sm(rho_m);

  // Match the +/- eigenvectors to the phi ones by maximal overlap and fix
  // the gauge so <psi_i(phi)|psi_i(phi +/- delta)> is real positive.
  const auto aligned = [&](const Eigen::SelfAdjointEigenSolver<MatrixXcd>& s,
                           long i) -> std::pair<double, VectorXcd> {
    long best = 0;
    double best_ov = -1.0;
    for (long j = 0; j < dim; ++j) {
      const double ov = std::abs(s0.eigenvectors().col(i).dot(s.eigenvectors().col(j)));
      if (ov > best_ov) {
        best_ov = ov;
        best = j;
      }
    }
    VectorXcd v = s.eigenvectors().col(best);
    const complexd ov = s0.eigenvectors().col(i).dot(v);
    if (std::abs(ov) > 0.0) v *= std::conj(ov) / std::abs(ov);
    return {s.eigenvalues()(best), v};
  };

  double fisher = 0.0;
  std::vector<VectorXcd> dpsi(dim);
  std::vector<double> lambda(dim), dlambda(dim);
  for (long i = 0; i < dim; ++i) {
    lambda[i] = s0.eigenvalues()(i);
    const auto [lp, vp] = aligned(sp, i);
    const auto [lm, vm] = aligned(sm, i);
    dlambda[i] = (lp - lm) / (2.0 * delta);
    dpsi[i] = (vp - vm) / (2.0 * delta);
  }
  for (long i = 0; i < dim; ++i) {
    if (lambda[i] <= rank_floor) continue;
    fisher += dlambda[i] * dlambda[i] / lambda[i];
    fisher += 4.0 * lambda[i] * dpsi[i].squaredNorm();
    for (long j = 0; j < dim; ++j) {
      if (lambda[j] <= rank_floor) continue;
      const complexd ov = s0.eigenvectors().col(i).dot(dpsi[j]);
      fisher -= 8.0 * lambda[i] * lambda[j] / (lambda[i] + lambda[j]) * std::norm(ov);
    }
  }
  return fisher;
}

// ------------------------------------------------------------ random probes

inline sjq::TwoModeState random_state(long N, std::uint64_t seed,
                                      bool complex_amps = true) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<complexd> amps(N + 1);
  for (auto& a : amps)
    a = complex_amps ? complexd(normal(rng), normal(rng)) : complexd(normal(rng), 0.0);
  sjq::TwoModeState state(N, std::move(amps));
  state.normalize();
  return state;
}

}  // namespace oracles

#endif  // SJQ_TESTS_ORACLES_HPP
