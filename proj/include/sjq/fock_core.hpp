#ifndef SJQ_FOCK_CORE_HPP
#define SJQ_FOCK_CORE_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

// Numerically safe combinatorics and the beam-splitter loss-weight kernel.
// Everything here works in log space: for N in the hundreds the raw
// binomials overflow doubles long before the final weights do.

namespace sjq {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Natural log of a non-negative weight; -inf encodes an exact zero.
struct LogWeight {
  double value{kNegInf};

  static LogWeight zero() { return {kNegInf}; }
  static LogWeight one() { return {0.0}; }

  double exp() const { return std::exp(value); }
  bool is_zero() const { return value == kNegInf; }

  LogWeight operator*(LogWeight other) const {
    if (is_zero() || other.is_zero()) return zero();
    return {value + other.value};
  }
};

/// Transmissivities of the two fictitious beam splitters, one per arm.
class LossChannel {
 public:
  LossChannel(double eta_a, double eta_b) : eta_a_(eta_a), eta_b_(eta_b) {
    if (!(eta_a > 0.0 && eta_a <= 1.0) || !(eta_b > 0.0 && eta_b <= 1.0))
      throw std::domain_error("LossChannel: eta must lie in (0, 1]");
  }
  explicit LossChannel(double eta) : LossChannel(eta, eta) {}

  double eta_a() const { return eta_a_; }
  double eta_b() const { return eta_b_; }
  bool lossless() const { return eta_a_ == 1.0 && eta_b_ == 1.0; }

  LossChannel swapped() const { return LossChannel(eta_b_, eta_a_); }

 private:
  double eta_a_;
  double eta_b_;
};

/// Compensated (Kahan) accumulator for long sums of small terms.
class KahanAccumulator {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double sum() const { return sum_; }

 private:
  double sum_{0.0};
  double carry_{0.0};
};

inline constexpr long kDefaultMaxBinomialN = 10000;

/// ln C(n, r).  Exact to <= 1e-12 relative error for n <= max_n.
/// For small min(r, n-r) a cumulative log sum is used; the lgamma route
/// loses too many digits when the result itself is small.
inline double log_binomial(long n, long r, long max_n = kDefaultMaxBinomialN) {
  if (n < 0 || r < 0) throw std::domain_error("log_binomial: negative argument");
  if (r > n)
    throw std::domain_error("log_binomial: r > n (r=" + std::to_string(r) +
                            ", n=" + std::to_string(n) + ")");
  if (n > max_n)
    throw std::domain_error("log_binomial: n exceeds configured maximum " +
                            std::to_string(max_n));
  const long m = std::min(r, n - r);
  if (m == 0) return 0.0;
  if (m <= 128) {
    KahanAccumulator acc;
    for (long i = 0; i < m; ++i)
      acc.add(std::log(static_cast<double>(n - i) / static_cast<double>(i + 1)));
    return acc.sum();
  }
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(r) + 1.0) -
         std::lgamma(static_cast<double>(n - r) + 1.0);
}

/// ln of the branch weight B^n_{l_a,l_b}: the probability that exactly
/// (l_a, l_b) particles leak out of the arms given occupations (N-n, n).
/// Written as a product of two binomial pmf terms,
///   C(N-n, l_a) eta_a^{N-n-l_a} (1-eta_a)^{l_a} *
///   C(n,   l_b) eta_b^{n-l_b}   (1-eta_b)^{l_b},
/// which is algebraically the eta^{N-n} (eta^{-1}-1)^{l_a} form but never
/// touches eta = 1 singularities.
inline LogWeight log_loss_weight(long N, long n, long l_a, long l_b,
                                 const LossChannel& channel) {
  if (n < 0 || n > N)
    throw std::domain_error("loss_weight: n out of [0, N]");
  if (l_a < 0 || l_a > N - n)
    throw std::domain_error("loss_weight: l_a out of [0, N-n]");
  if (l_b < 0 || l_b > n)
    throw std::domain_error("loss_weight: l_b out of [0, n]");

  const auto arm = [](long m, long l, double eta) -> double {
    // ln [ C(m, l) eta^{m-l} (1-eta)^l ]; -inf when eta == 1 and l > 0.
    if (eta == 1.0) return l == 0 ? 0.0 : kNegInf;
    return log_binomial(m, l) + static_cast<double>(m - l) * std::log(eta) +
           static_cast<double>(l) * std::log1p(-eta);
  };

  const double la = arm(N - n, l_a, channel.eta_a());
  const double lb = arm(n, l_b, channel.eta_b());
  if (la == kNegInf || lb == kNegInf) return LogWeight::zero();
  return {la + lb};
}

/// B^n_{l_a,l_b} exponentiated back to a probability weight in [0, 1].
inline double loss_weight(long N, long n, long l_a, long l_b,
                          const LossChannel& channel) {
  return log_loss_weight(N, n, l_a, l_b, channel).exp();
}

}  // namespace sjq

#endif  // SJQ_FOCK_CORE_HPP
