#pragma once

// Special functions used by the closed-form outage and capacity expressions:
// factorials, integer-order modified Bessel functions of the second kind, and
// the Gamma distribution with integer shape.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace relaylim::specfun {

/// Precomputed n! for 0 <= n <= Cap, promoted to double.
template <int Cap = 64>
class FactorialTable {
 public:
  static_assert(Cap >= 1 && Cap <= 170, "factorial cap must stay representable");

  static constexpr int cap = Cap;

  constexpr FactorialTable() {
    values_[0] = 1.0;
    for (int n = 1; n <= Cap; ++n) values_[n] = values_[n - 1] * n;
  }

  double factorial(int n) const {
    check(n);
    return values_[n];
  }

  double log_factorial(int n) const {
    check(n);
    return std::log(values_[n]);
  }

 private:
  static void check(int n) {
    if (n < 0 || n > Cap) {
      throw std::domain_error("factorial: argument " + std::to_string(n) +
                              " outside [0, " + std::to_string(Cap) + "]");
    }
  }

  std::array<double, Cap + 1> values_{};
};

inline constexpr FactorialTable<> kFactorials{};
inline constexpr int kMaxShape = FactorialTable<>::cap;

inline double factorial(int n) { return kFactorials.factorial(n); }
inline double log_factorial(int n) { return kFactorials.log_factorial(n); }

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

namespace detail {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Series for K0 and K1 about the origin, valid for 0 < z <= 2.
inline void bessel_k01_series(double z, double& k0, double& k1) {
  const double q = 0.25 * z * z;
  const double log_half_z = std::log(0.5 * z);

  // I0, I1 and the harmonic-number weighted sums share the same term ratios.
  double t0 = 1.0;        // (z^2/4)^k / (k!)^2
  double t1 = 1.0;        // (z^2/4)^k / (k! (k+1)!)
  double harmonic = 0.0;  // H_k
  double i0 = 0.0, i1 = 0.0, s0 = 0.0, s1 = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double h_next = harmonic + 1.0 / (k + 1);
    i0 += t0;
    i1 += t1;
    s0 += harmonic * t0;
    s1 += (harmonic + h_next - 2.0 * kEulerGamma) * t1;
    if (t0 < 1e-18 * i0 && t1 < 1e-18 * i1) break;
    t0 *= q / ((k + 1.0) * (k + 1.0));
    t1 *= q / ((k + 1.0) * (k + 2.0));
    harmonic = h_next;
  }
  i1 *= 0.5 * z;
  k0 = -(log_half_z + kEulerGamma) * i0 + s0;
  k1 = 1.0 / z + log_half_z * i1 - 0.25 * z * s1;
}

// Steed's continued fraction for e^z K0(z) and e^z K1(z), z >= 2.
inline void bessel_k01_scaled_cf(double z, double& k0e, double& k1e) {
  constexpr double eps = 1e-17;
  double b = 2.0 * (1.0 + z);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 10000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < eps) break;
  }
  h *= a1;
  k0e = std::sqrt(std::numbers::pi / (2.0 * z)) / s;
  k1e = k0e * (z + 0.5 - h) / z;
}

inline constexpr double kBesselCrossover = 2.0;

inline void check_bessel_argument(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw std::domain_error("bessel_k: argument must be finite and > 0");
  }
}

}  // namespace detail

/// log K_m(z) for m = 0..max_order, built from K0, K1 and the ratio form of
/// the upward recurrence so that no intermediate value overflows.
inline std::vector<double> log_bessel_k_sequence(int max_order, double z) {
  detail::check_bessel_argument(z);
  if (max_order < 0) throw std::domain_error("bessel_k: negative max order");

  double log_k0 = 0.0;
  double ratio = 0.0;  // K1/K0
  if (z <= detail::kBesselCrossover) {
    double k0 = 0.0, k1 = 0.0;
    detail::bessel_k01_series(z, k0, k1);
    log_k0 = std::log(k0);
    ratio = k1 / k0;
  } else {
    double k0e = 0.0, k1e = 0.0;
    detail::bessel_k01_scaled_cf(z, k0e, k1e);
    log_k0 = std::log(k0e) - z;
    ratio = k1e / k0e;
  }

  std::vector<double> out(static_cast<std::size_t>(max_order) + 1);
  out[0] = log_k0;
  double acc = log_k0;
  for (int m = 1; m <= max_order; ++m) {
    acc += std::log(ratio);
    out[m] = acc;
    ratio = 1.0 / ratio + 2.0 * m / z;  // K_{m+1}/K_m
  }
  return out;
}

inline double log_bessel_k_int(int nu, double z) {
  const int order = nu < 0 ? -nu : nu;
  return log_bessel_k_sequence(order, z).back();
}

/// K_nu(z) for integer nu. Throws std::range_error when the result overflows.
inline double bessel_k_int(int nu, double z) {
  const double lk = log_bessel_k_int(nu, z);
  if (lk > std::log(std::numeric_limits<double>::max())) {
    throw std::range_error("bessel_k: K_" + std::to_string(nu) + "(" + std::to_string(z) +
                           ") overflows double");
  }
  return std::exp(lk);
}

/// e^z K_nu(z) for integer nu.
inline double bessel_k_scaled(int nu, double z) {
  const double lk = log_bessel_k_int(nu, z) + z;
  if (lk > std::log(std::numeric_limits<double>::max())) {
    throw std::range_error("bessel_k_scaled: result overflows double");
  }
  return std::exp(lk);
}

namespace detail {

inline void check_gamma_params(int alpha, double beta) {
  if (alpha < 1 || alpha > kMaxShape) {
    throw std::domain_error("gamma: integer shape must lie in [1, " + std::to_string(kMaxShape) +
                            "], got " + std::to_string(alpha));
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::domain_error("gamma: scale must be finite and > 0");
  }
}

}  // namespace detail

/// Survival function 1 - F(x) = sum_{j<alpha} e^{-x/beta} (x/beta)^j / j!.
inline double gamma_sf_int(double x, int alpha, double beta) {
  detail::check_gamma_params(alpha, beta);
  if (x < 0.0) throw std::domain_error("gamma_sf_int: x must be >= 0");
  const double t = x / beta;
  if (std::isinf(t)) return 0.0;
  double term = std::exp(-t);
  double sum = term;
  for (int j = 1; j < alpha; ++j) {
    term *= t / j;
    sum += term;
  }
  return sum;
}

/// Gamma(alpha, beta) cdf with integer shape.
inline double gamma_cdf_int(double x, int alpha, double beta) {
  detail::check_gamma_params(alpha, beta);
  if (x < 0.0) throw std::domain_error("gamma_cdf_int: x must be >= 0");
  const double t = x / beta;
  if (t == 0.0) return 0.0;
  if (t < alpha) {
    // Lower tail: e^{-t} sum_{j>=alpha} t^j/j!, free of cancellation.
    double term = std::exp(alpha * std::log(t) - t - log_factorial(alpha));
    double sum = term;
    for (int j = alpha + 1; j < alpha + 1000; ++j) {
      term *= t / j;
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::min(sum, 1.0);
  }
  return 1.0 - gamma_sf_int(x, alpha, beta);
}

/// Gamma(alpha, beta) pdf with integer shape.
inline double gamma_pdf_int(double x, int alpha, double beta) {
  detail::check_gamma_params(alpha, beta);
  if (x < 0.0) throw std::domain_error("gamma_pdf_int: x must be >= 0");
  if (x == 0.0) return alpha == 1 ? 1.0 / beta : 0.0;
  const double t = x / beta;
  return std::exp((alpha - 1) * std::log(t) - t - log_factorial(alpha - 1)) / beta;
}

}  // namespace relaylim::specfun
