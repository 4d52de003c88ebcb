#pragma once

// Outage probability P(gamma <= x) for AF and DF relaying with impaired
// hardware: the ratio-cdf identity, quadrature forms valid for any fading law,
// Nakagami-m closed forms, and the Bessel integral identity behind them.

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "relaylim/model.hpp"
#include "relaylim/quadrature.hpp"
#include "relaylim/specfun.hpp"

namespace relaylim::outage {

/// Below this level 1 - S has lost most of its significant digits.
inline constexpr double kPrecisionFloor = 1e-12;

struct OutageValue {
  double value = 0.0;
  // x at or above the SNDR ceiling: outage is certain.
  bool saturated = false;
  // value is below kPrecisionFloor and only meaningful as "tiny".
  bool precision_limited = false;

  operator double() const { return value; }
};

namespace detail {

inline OutageValue finish(double p) {
  p = std::clamp(p, 0.0, 1.0);
  return {p, false, p < kPrecisionFloor};
}

inline OutageValue certain() { return {1.0, true, false}; }

inline void check_threshold(double x) {
  if (!(x >= 0.0) || std::isnan(x)) throw std::domain_error("outage: threshold must be >= 0");
}

// True when x lies at or beyond 1/ceiling_constant (ties saturate).
inline bool beyond_ceiling(double x, double ceiling_constant) {
  return ceiling_constant > 0.0 && (x >= 1.0 / ceiling_constant || 1.0 - ceiling_constant * x <= 0.0);
}

}  // namespace detail

using Cdf = std::function<double(double)>;

/// P(c1 rho / (c2 rho + c3) <= x) for a non-negative rho with cdf F.
inline double ratio_cdf(const Cdf& cdf, double c1, double c2, double c3, double x) {
  if (!(c1 > 0.0) || !(c2 >= 0.0) || !(c3 > 0.0)) {
    throw std::domain_error("ratio_cdf: requires c1 > 0, c2 >= 0, c3 > 0");
  }
  detail::check_threshold(x);
  if (c2 == 0.0) return cdf(c3 * x / c1);
  if (x >= c1 / c2) return 1.0;
  return cdf(c3 * x / (c1 - c2 * x));
}

/// Channel-gain law for the quadrature forms. `scale` is a typical magnitude
/// of the gain (its mean, for instance) used to place quadrature nodes.
struct FadingDistribution {
  Cdf cdf;
  std::function<double(double)> pdf;
  double scale = 1.0;
};

inline FadingDistribution nakagami(int alpha, double beta) {
  return {[=](double x) { return specfun::gamma_cdf_int(x, alpha, beta); },
          [=](double x) { return specfun::gamma_pdf_int(x, alpha, beta); }, alpha * beta};
}

inline FadingDistribution nakagami(const Hop& hop) { return nakagami(hop.alpha(), hop.beta()); }

/// AF outage for arbitrary independent fading by adaptive quadrature over the
/// second-hop gain. Evaluated in complement form
///   P = F2(b1 w) + int_0^inf F1(b2 w + A/z) f2(z + b1 w) dz,
/// w = x/(1-dx), A = b1 b2 w^2 + c w, which is the same integral without the
/// 1 - (1 - P) cancellation.
inline OutageValue outage_af_quadrature(const AfCoefficients& k, const FadingDistribution& rho1,
                                        const FadingDistribution& rho2, double x,
                                        quadrature::Options opts = {}) {
  detail::check_threshold(x);
  if (detail::beyond_ceiling(x, k.d)) return detail::certain();
  if (x == 0.0) return detail::finish(0.0);
  const double w = x / (1.0 - k.d * x);
  const double shift = k.b1 * w;
  const double base = k.b2 * w;
  const double a = k.b1 * k.b2 * w * w + k.c * w;
  auto integrand = [&](double z) {
    const double arg = z > 0.0 ? base + a / z : std::numeric_limits<double>::infinity();
    const double f1 = std::isinf(arg) ? 1.0 : rho1.cdf(arg);
    return f1 * rho2.pdf(z + shift);
  };
  if (opts.abs_tol == 0.0) opts.abs_tol = 1e-15;
  const auto r = quadrature::integrate_semi_infinite(integrand, 0.0, rho2.scale, opts);
  return detail::finish(rho2.cdf(shift) + r.value);
}

inline OutageValue outage_af_quadrature(const Scenario& s, GainMode mode, double x,
                                        quadrature::Options opts = {}) {
  return outage_af_quadrature(af_coefficients(s, mode), nakagami(s.hop(0)), nakagami(s.hop(1)), x,
                              opts);
}

inline OutageValue outage_af_quadrature(const Scenario& s, double x,
                                        quadrature::Options opts = {}) {
  return outage_af_quadrature(s, s.mode(), x, opts);
}

/// AF outage under Nakagami-m fading with integer shapes: closed form as a
/// finite sum of modified Bessel K terms, evaluated in log space.
inline OutageValue outage_af_closed(const AfCoefficients& k, int alpha1, double beta1, int alpha2,
                                    double beta2, double x) {
  specfun::gamma_cdf_int(0.0, alpha1, beta1);  // validates shape and scale
  specfun::gamma_cdf_int(0.0, alpha2, beta2);
  detail::check_threshold(x);
  if (!(k.b1 >= 0.0) || !(k.b2 >= 0.0) || !(k.c >= 0.0) || !(k.d >= 0.0)) {
    throw std::domain_error("outage_af_closed: coefficients must be >= 0");
  }
  if (detail::beyond_ceiling(x, k.d)) return detail::certain();
  if (x == 0.0) return detail::finish(0.0);

  const double w = x / (1.0 - k.d * x);
  const double a = k.b1 * k.b2 * w * w + k.c * w;
  if (!(a > 0.0)) throw std::domain_error("outage_af_closed: degenerate coefficients (b1 b2 = c = 0)");
  const double arg = 2.0 * std::sqrt(a / (beta1 * beta2));
  const double lead = std::log(2.0) - w * (k.b1 / beta2 + k.b2 / beta1);

  if (alpha1 == 1 && alpha2 == 1) {
    // Rayleigh: a single K1 term.
    const double log_term = lead + 0.5 * std::log(a / (beta1 * beta2)) +
                            specfun::log_bessel_k_int(1, arg);
    return detail::finish(1.0 - std::exp(log_term));
  }

  const auto log_k = specfun::log_bessel_k_sequence(std::max(alpha1, alpha2) + 1, arg);
  const double log_b1 = k.b1 > 0.0 ? std::log(k.b1) : 0.0;
  const double log_b2 = k.b2 > 0.0 ? std::log(k.b2) : 0.0;
  const double log_beta1 = std::log(beta1);
  const double log_beta2 = std::log(beta2);
  const double log_w = std::log(w);
  const double log_a = std::log(a);

  double sum = 0.0;
  for (int j = 0; j < alpha1; ++j) {
    for (int n = 0; n < alpha2; ++n) {
      const int b1_power = alpha2 - n - 1;
      // Fixed gain (b1 = 0): only the b1^0 term survives.
      if (b1_power > 0 && k.b1 == 0.0) continue;
      for (int kk = 0; kk <= j; ++kk) {
        const int b2_power = j - kk;
        if (b2_power > 0 && k.b2 == 0.0) continue;
        const int order = std::abs(n - kk + 1);
        const double log_coeff =
            b1_power * log_b1 + b2_power * log_b2 +
            0.5 * (kk - n - 1 - 2 * j) * log_beta1 + 0.5 * (n - kk + 1 - 2 * alpha2) * log_beta2 -
            specfun::log_factorial(kk) - specfun::log_factorial(j - kk) -
            specfun::log_factorial(n) - specfun::log_factorial(b1_power);
        const double log_term = lead + log_coeff + (alpha2 + j - n - kk - 1) * log_w +
                                0.5 * (n + kk + 1) * log_a + log_k[order];
        sum += std::exp(log_term);
      }
    }
  }
  return detail::finish(1.0 - sum);
}

inline OutageValue outage_af_closed(const Scenario& s, GainMode mode, double x) {
  const Hop& h1 = s.hop(0);
  const Hop& h2 = s.hop(1);
  return outage_af_closed(af_coefficients(s, mode), h1.alpha(), h1.beta(), h2.alpha(), h2.beta(),
                          x);
}

inline OutageValue outage_af_closed(const Scenario& s, double x) {
  return outage_af_closed(s, s.mode(), x);
}

/// DF outage for arbitrary independent fading, one cdf per hop:
/// 1 - prod_i (1 - F_i(N_i x / (P_i (1 - k_i^2 x)))).
inline OutageValue outage_df_general(std::span<const Cdf> cdfs, std::span<const Hop> hops,
                                     double x) {
  if (cdfs.size() != hops.size() || hops.empty()) {
    throw UsageError("outage_df_general: one cdf per hop required");
  }
  detail::check_threshold(x);
  double log_success = 0.0;
  for (std::size_t i = 0; i < hops.size(); ++i) {
    const Hop& h = hops[i];
    const double k2 = h.kappa() * h.kappa();
    if (detail::beyond_ceiling(x, k2)) return detail::certain();
    const double f = cdfs[i](h.noise() * x / (h.power() * (1.0 - k2 * x)));
    log_success += std::log1p(-std::min(f, 1.0));
  }
  return detail::finish(-std::expm1(log_success));
}

/// DF outage under Nakagami-m fading, any number of hops.
inline OutageValue outage_df_closed(std::span<const Hop> hops, double x) {
  detail::check_threshold(x);
  double log_success = 0.0;
  for (const Hop& h : hops) {
    const double k2 = h.kappa() * h.kappa();
    if (detail::beyond_ceiling(x, k2)) return detail::certain();
    const double arg = h.noise() * x / (h.power() * (1.0 - k2 * x));
    log_success += std::log1p(-specfun::gamma_cdf_int(arg, h.alpha(), h.beta()));
  }
  return detail::finish(-std::expm1(log_success));
}

inline OutageValue outage_df_closed(const Scenario& s, double x) {
  if (s.is_af()) throw UsageError("outage_df_closed: scenario is not DF");
  return outage_df_closed(s.hops(), x);
}

/// Gamma cdf obtained by integrating the density numerically.
inline double gamma_cdf_by_quadrature(double y, int alpha, double beta,
                                      const quadrature::Options& opts = {}) {
  if (y <= 0.0) return 0.0;
  auto pdf = [&](double t) { return specfun::gamma_pdf_int(t, alpha, beta); };
  if (y <= alpha * beta) return quadrature::integrate(pdf, 0.0, y, opts).value;
  return 1.0 - quadrature::integrate_semi_infinite(pdf, y, beta, opts).value;
}

/// DF outage with each per-hop cdf computed by quadrature of its density.
inline OutageValue outage_df_quadrature(const Scenario& s, double x,
                                        const quadrature::Options& opts = {}) {
  if (s.is_af()) throw UsageError("outage_df_quadrature: scenario is not DF");
  std::vector<Cdf> cdfs;
  for (const Hop& h : s.hops()) {
    cdfs.emplace_back([a = h.alpha(), b = h.beta(), opts](double y) {
      return gamma_cdf_by_quadrature(y, a, b, opts);
    });
  }
  return outage_df_general(cdfs, s.hops(), x);
}

/// Closed form of int_0^inf (z + c1)^p1 (1/z + c2)^p2 exp(-(c3/z + c4 z)) dz:
/// 2 sum_n sum_k C(p1,n) C(p2,k) c1^(p1-n) c2^(p2-k) (c3/c4)^((n-k+1)/2) K_{n-k+1}(2 sqrt(c3 c4)).
inline double bessel_product_integral(int p1, int p2, double c1, double c2, double c3, double c4) {
  if (p1 < 0 || p2 < 0) throw std::domain_error("bessel_product_integral: powers must be >= 0");
  if (!(c3 > 0.0) || !(c4 > 0.0)) {
    throw std::domain_error("bessel_product_integral: c3, c4 must be > 0");
  }
  if (!std::isfinite(c1) || !std::isfinite(c2)) {
    throw std::domain_error("bessel_product_integral: c1, c2 must be finite");
  }
  const double arg = 2.0 * std::sqrt(c3 * c4);
  const auto log_k = specfun::log_bessel_k_sequence(std::max(p1, p2) + 1, arg);
  const double log_ratio = std::log(c3 / c4);
  double sum = 0.0;
  for (int n = 0; n <= p1; ++n) {
    for (int k = 0; k <= p2; ++k) {
      const double coeff = specfun::binomial(p1, n) * specfun::binomial(p2, k) *
                           std::pow(c1, p1 - n) * std::pow(c2, p2 - k);
      if (coeff == 0.0) continue;
      const int order = std::abs(n - k + 1);
      sum += coeff * std::exp(0.5 * (n - k + 1) * log_ratio + log_k[order]);
    }
  }
  return 2.0 * sum;
}

}  // namespace relaylim::outage
