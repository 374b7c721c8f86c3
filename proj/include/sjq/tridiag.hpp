#ifndef SJQ_TRIDIAG_HPP
#define SJQ_TRIDIAG_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Ground-state solver for real symmetric tridiagonal matrices:
// Sturm-sequence bisection for the k-th smallest eigenvalue, then
// inverse iteration with a partially pivoted tridiagonal LU solve.

namespace sjq {

class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace tridiag {

/// Number of eigenvalues of T strictly below x (Sturm sequence count).
inline int count_below(const std::vector<double>& diag,
                       const std::vector<double>& off, double x) {
  const std::size_t n = diag.size();
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
    d = diag[i] - x - b2 / d;
    if (d == 0.0) d = 1e-300;
    if (d < 0.0) ++count;
  }
  return count;
}

/// Gershgorin enclosure of the whole spectrum.
inline std::pair<double, double> spectrum_bounds(const std::vector<double>& diag,
                                                 const std::vector<double>& off) {
  const std::size_t n = diag.size();
  double lo = diag[0], hi = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < n) r += std::abs(off[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  return {lo, hi};
}

/// k-th smallest eigenvalue (k = 1 is the minimum) by bisection.
inline double eigenvalue_k(const std::vector<double>& diag,
                           const std::vector<double>& off, int k) {
  auto [lo, hi] = spectrum_bounds(diag, off);
  const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
  lo -= 1e-14 * scale;
  hi += 1e-14 * scale;
  for (int iter = 0; iter < 120 && hi - lo > 4e-16 * scale; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(diag, off, mid) >= k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

/// LU factors of (T - sigma I) with partial pivoting (gttrf scheme).
struct ShiftedLU {
  std::vector<double> dl, d, du, du2;
  std::vector<int> pivot_swap;  // 1 if rows i, i+1 were swapped

  ShiftedLU(const std::vector<double>& diag, const std::vector<double>& off,
            double sigma) {
    const std::size_t n = diag.size();
    d.resize(n);
    dl.assign(n > 0 ? n - 1 : 0, 0.0);
    du.assign(n > 0 ? n - 1 : 0, 0.0);
    du2.assign(n > 1 ? n - 2 : 0, 0.0);
    pivot_swap.assign(n > 0 ? n - 1 : 0, 0);
    for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - sigma;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      dl[i] = off[i];
      du[i] = off[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (dl[i] == 0.0) continue;
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        const double fact = dl[i] / d[i];
        dl[i] = fact;
        d[i + 1] -= fact * du[i];
      } else {
        const double fact = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = fact;
        const double temp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = temp - fact * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du2[i];
        }
        pivot_swap[i] = 1;
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (d[i] == 0.0) d[i] = 1e-300;
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (pivot_swap[i]) {
        std::swap(b[i], b[i + 1]);
      }
      b[i + 1] -= dl[i] * b[i];
    }
    b[n - 1] /= d[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;)
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  }
};

struct GroundEigenResult {
  double eigenvalue{0.0};
  std::vector<double> eigenvector;
  double residual{0.0};   // ||T v - lambda v||_2
  double gap{0.0};        // lambda_2 - lambda_1
};

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double residual_norm(const std::vector<double>& diag,
                            const std::vector<double>& off, double lambda,
                            const std::vector<double>& v) {
  const std::size_t n = diag.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = (diag[i] - lambda) * v[i];
    if (i > 0) r += off[i - 1] * v[i - 1];
    if (i + 1 < n) r += off[i] * v[i + 1];
    s += r * r;
  }
  return std::sqrt(s);
}

/// Smallest eigenpair by bisection + inverse iteration.  max_iterations
/// caps the inverse-iteration sweeps per shift refinement.
inline GroundEigenResult ground_eigenpair(const std::vector<double>& diag,
                                          const std::vector<double>& off,
                                          int max_iterations = 50) {
  const std::size_t n = diag.size();
  if (n == 0) throw std::domain_error("ground_eigenpair: empty matrix");
  GroundEigenResult result;
  if (n == 1) {
    result.eigenvalue = diag[0];
    result.eigenvector = {1.0};
    result.gap = 0.0;
    return result;
  }

  const double lambda1 = eigenvalue_k(diag, off, 1);
  const double lambda2 = eigenvalue_k(diag, off, 2);
  result.eigenvalue = lambda1;
  result.gap = lambda2 - lambda1;

  auto [lo, hi] = spectrum_bounds(diag, off);
  const double norm_t = std::max({std::abs(lo), std::abs(hi), 1e-300});

  // Deterministic non-degenerate start vector.
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i + 1) * 2.399963);
  {
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
  }

  const double target = 1e-11 * norm_t;
  double best_res = std::numeric_limits<double>::infinity();
  std::vector<double> best_v = v;
  const std::vector<double> start = v;
  // If the bisected shift lands too close to the eigenvalue the solve
  // overflows; back off by a growing offset and restart.
  for (int attempt = 0; attempt < 6 && best_res > target; ++attempt) {
    double lambda =
        lambda1 - static_cast<double>(attempt) * 4e-14 * norm_t;
    v = start;
    ShiftedLU lu(diag, off, lambda);
    for (int it = 0; it < max_iterations; ++it) {
      lu.solve(v);
      const double nv = norm2(v);
      if (!(nv > 0.0) || !std::isfinite(nv)) break;
      for (double& x : v) x /= nv;
      const double res = residual_norm(diag, off, lambda1, v);
      if (res < best_res) {
        best_res = res;
        best_v = v;
      }
      if (res <= target) break;
      // Rayleigh-quotient polish of the shift if progress stalls.
      if (it >= 2 && it % 3 == 2) {
        double rq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          double r = diag[i] * v[i];
          if (i > 0) r += off[i - 1] * v[i - 1];
          if (i + 1 < n) r += off[i] * v[i + 1];
          rq += v[i] * r;
        }
        // Stay inside the bisection bracket so we cannot drift to lambda2.
        if (std::abs(rq - lambda1) < 0.49 * std::max(result.gap, 1e-300) &&
            rq != lambda) {
          lambda = rq;
          lu = ShiftedLU(diag, off, lambda);
        }
      }
    }
  }
  v = best_v;
  result.residual = residual_norm(diag, off, lambda1, v);
  if (result.residual > 1e-9 * norm_t)
    throw numeric_error("ground_eigenpair: inverse iteration did not converge "
                        "(residual " + std::to_string(result.residual) + ")");

  // Deterministic sign: largest-magnitude component positive.
  std::size_t imax = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0.0)
    for (double& x : v) x = -x;
  result.eigenvector = std::move(v);
  return result;
}

}  // namespace tridiag
}  // namespace sjq

#endif  // SJQ_TRIDIAG_HPP
