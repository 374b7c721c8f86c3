#ifndef SJQ_ANALYTIC_LIMITS_HPP
#define SJQ_ANALYTIC_LIMITS_HPP

#include <cmath>
#include <stdexcept>

// Closed-form precision limits and thresholds of the lossy two-mode
// interferometer.  All functions are pure and stateless.

namespace sjq {
namespace limits {

/// Ideal (lossless) limit 1/N^k: Heisenberg at k=1, super-Heisenberg above.
inline double ideal_limit(long N, long k) {
  if (N < 1 || k < 1) throw std::domain_error("ideal_limit: N, k must be >= 1");
  return std::pow(static_cast<double>(N), -static_cast<double>(k));
}

struct NoonLimits {
  double fisher;     // N^{2k} eta^N
  double delta_phi;  // 1 / (sqrt(eta^N) N^k)
};

/// Lossy N00N-probe QFI bound and the matching phase error.
inline NoonLimits noon_limits(long N, long k, double eta) {
  if (N < 1 || k < 1) throw std::domain_error("noon_limits: N, k must be >= 1");
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::domain_error("noon_limits: eta must lie in (0, 1]");
  const double Nd = static_cast<double>(N);
  const double eta_pow = std::pow(eta, Nd);
  const double n2k = std::pow(Nd, 2.0 * static_cast<double>(k));
  NoonLimits out;
  out.fisher = n2k * eta_pow;
  out.delta_phi = 1.0 / std::sqrt(out.fisher);
  return out;
}

/// Particle number maximizing the lossy N00N QFI: -2k / ln(eta).
/// Real-valued; rounding is the caller's choice.
inline double n_min(long k, double eta) {
  if (k < 1) throw std::domain_error("n_min: k must be >= 1");
  if (!(eta > 0.0 && eta < 1.0))
    throw std::domain_error("n_min: eta must lie in (0, 1); unbounded at eta = 1");
  return -2.0 * static_cast<double>(k) / std::log(eta);
}

/// Transmissivity above which the N00N probe stays useful: e^{-2k/N}.
inline double eta_critical(long N, long k) {
  if (N < 1 || k < 1) throw std::domain_error("eta_critical: N, k must be >= 1");
  return std::exp(-2.0 * static_cast<double>(k) / static_cast<double>(N));
}

struct InterferometricLimits {
  double sil;     // 1 / sqrt(eta N)
  double scaled;  // 1 / (sqrt(eta) N^{k - 1/2}); the NIL scaling at k = 3
};

/// Coherent-probe limits under loss.  The SIL prefactor is exact; the
/// generalized k > 1 value is a scaling law with unit prefactor.
inline InterferometricLimits interferometric_limits(long N, long k, double eta) {
  if (N < 1 || k < 1)
    throw std::domain_error("interferometric_limits: N, k must be >= 1");
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::domain_error("interferometric_limits: eta must lie in (0, 1]");
  const double Nd = static_cast<double>(N);
  InterferometricLimits out;
  out.sil = 1.0 / std::sqrt(eta * Nd);
  out.scaled = 1.0 / (std::sqrt(eta) * std::pow(Nd, static_cast<double>(k) - 0.5));
  return out;
}

/// Phase error from number-difference fluctuations:
/// [N (1 + eta (N eta - 1))]^{-1/2}.
inline double variance_delta_phi(long N, double eta) {
  if (N < 1) throw std::domain_error("variance_delta_phi: N must be >= 1");
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::domain_error("variance_delta_phi: eta must lie in [0, 1]");
  const double Nd = static_cast<double>(N);
  return 1.0 / std::sqrt(Nd * (1.0 + eta * (Nd * eta - 1.0)));
}

/// Observation-time ceiling for an N00N-like probe under one-body decay
/// with rate gamma: t_c = 2k / (gamma N), in seconds.
inline double critical_time(long k, double gamma, double N) {
  if (k < 1) throw std::domain_error("critical_time: k must be >= 1");
  if (!(gamma > 0.0) || !(N > 0.0))
    throw std::domain_error("critical_time: gamma and N must be positive");
  return 2.0 * static_cast<double>(k) / (gamma * N);
}

}  // namespace limits
}  // namespace sjq

#endif  // SJQ_ANALYTIC_LIMITS_HPP
