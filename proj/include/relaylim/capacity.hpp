#pragma once

// Ergodic capacity of AF and DF relaying: exact values by quadrature over the
// fading densities, Jensen-type upper bounds, and the closed-form AF
// approximation. Every quantity carries a configurable prelog (default 1/2
// for the two-phase relay protocol).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string_view>

#include "relaylim/model.hpp"
#include "relaylim/outage.hpp"
#include "relaylim/quadrature.hpp"

namespace relaylim::capacity {

inline constexpr double kDefaultPrelog = 0.5;

enum class CapacityKind { exact_quadrature, upper_bound, approximation };

inline std::string_view to_string(CapacityKind k) {
  switch (k) {
    case CapacityKind::exact_quadrature: return "exact-quadrature";
    case CapacityKind::upper_bound: return "upper-bound";
    case CapacityKind::approximation: return "approximation";
  }
  return "?";
}

struct CapacityResult {
  double value = 0.0;  // bits per channel use
  CapacityKind kind = CapacityKind::exact_quadrature;
  double prelog = kDefaultPrelog;
};

namespace detail {

inline void check_prelog(double prelog) {
  if (!(prelog > 0.0) || !std::isfinite(prelog)) {
    throw std::domain_error("capacity: prelog must be finite and > 0");
  }
}

inline void require_af(const Scenario& s) {
  if (!s.is_af()) throw UsageError("capacity: scenario is not AF");
}

inline void require_df(const Scenario& s) {
  if (s.is_af()) throw UsageError("capacity: scenario is not DF");
}

inline quadrature::Options with_tolerance(double rel_tol) {
  quadrature::Options o;
  o.rel_tol = rel_tol;
  o.abs_tol = 1e-15;
  return o;
}

}  // namespace detail

/// (prelog) E{log2(1 + gamma)} for an AF link with arbitrary fading, by
/// iterated two-dimensional quadrature.
inline double af_mean_log(const AfCoefficients& k, const outage::FadingDistribution& rho1,
                          const outage::FadingDistribution& rho2,
                          const quadrature::Options& opts = detail::with_tolerance(1e-7)) {
  auto f = [&](double r1, double r2) {
    const double w = rho1.pdf(r1) * rho2.pdf(r2);
    if (w == 0.0) return 0.0;
    return std::log1p(af_sndr(k, r1, r2)) * w;
  };
  return quadrature::integrate_quadrant(f, rho1.scale, rho2.scale, opts).value /
         std::numbers::ln2;
}

/// E{r1 r2 / (r1 b1 + r2 b2 + c)}, the mean ideal-hardware SNR entering the
/// Jensen bound.
inline double af_jensen_mean(const AfCoefficients& k, const outage::FadingDistribution& rho1,
                             const outage::FadingDistribution& rho2,
                             const quadrature::Options& opts = detail::with_tolerance(1e-8)) {
  auto f = [&](double r1, double r2) {
    const double w = rho1.pdf(r1) * rho2.pdf(r2);
    if (w == 0.0) return 0.0;
    const double den = r1 * k.b1 + r2 * k.b2 + k.c;
    return den > 0.0 ? r1 * r2 / den * w : 0.0;
  };
  return quadrature::integrate_quadrant(f, rho1.scale, rho2.scale, opts).value;
}

inline CapacityResult capacity_af_exact(const Scenario& s, GainMode mode,
                                        double prelog = kDefaultPrelog) {
  detail::require_af(s);
  detail::check_prelog(prelog);
  const double v = af_mean_log(af_coefficients(s, mode), outage::nakagami(s.hop(0)),
                               outage::nakagami(s.hop(1)));
  return {prelog * v, CapacityKind::exact_quadrature, prelog};
}

inline CapacityResult capacity_af_upper(const Scenario& s, GainMode mode,
                                        double prelog = kDefaultPrelog) {
  detail::require_af(s);
  detail::check_prelog(prelog);
  const auto k = af_coefficients(s, mode);
  const double j = af_jensen_mean(k, outage::nakagami(s.hop(0)), outage::nakagami(s.hop(1)));
  return {prelog * std::log2(1.0 + j / (j * k.d + 1.0)), CapacityKind::upper_bound, prelog};
}

/// Closed-form approximation obtained by replacing each gain by its mean.
inline CapacityResult capacity_af_approx(const Scenario& s, GainMode mode,
                                         double prelog = kDefaultPrelog) {
  detail::require_af(s);
  detail::check_prelog(prelog);
  const auto k = af_coefficients(s, mode);
  const double m1 = s.hop(0).mean_gain();
  const double m2 = s.hop(1).mean_gain();
  const double num = m1 * m2;
  const double snr = num / (num * k.d + m1 * k.b1 + m2 * k.b2 + k.c);
  return {prelog * std::log2(1.0 + snr), CapacityKind::approximation, prelog};
}

inline CapacityResult capacity_af_exact(const Scenario& s) { return capacity_af_exact(s, s.mode()); }
inline CapacityResult capacity_af_upper(const Scenario& s) { return capacity_af_upper(s, s.mode()); }
inline CapacityResult capacity_af_approx(const Scenario& s) {
  return capacity_af_approx(s, s.mode());
}

/// (prelog) E{log2(1 + hop SNDR)} of a single hop by 1-D quadrature.
inline double hop_capacity(const Hop& h, double prelog = kDefaultPrelog,
                           const quadrature::Options& opts = detail::with_tolerance(1e-8)) {
  detail::check_prelog(prelog);
  auto f = [&](double r) {
    const double w = specfun::gamma_pdf_int(r, h.alpha(), h.beta());
    return w == 0.0 ? 0.0 : std::log1p(hop_sndr(h, r)) * w;
  };
  const auto res = quadrature::integrate_semi_infinite(f, 0.0, h.mean_gain(), opts);
  return prelog * res.value / std::numbers::ln2;
}

/// Minimum over hops of the per-hop ergodic capacities. This bounds the DF
/// capacity from above and is evaluated exactly, hence the exact kind.
inline CapacityResult capacity_df_upper_exact(const Scenario& s, double prelog = kDefaultPrelog) {
  detail::require_df(s);
  double m = std::numeric_limits<double>::infinity();
  for (const Hop& h : s.hops()) m = std::min(m, hop_capacity(h, prelog));
  return {m, CapacityKind::exact_quadrature, prelog};
}

/// Minimum over hops of prelog log2(1 + SNR_i / (SNR_i k_i^2 + 1)).
inline CapacityResult capacity_df_upper_closed(const Scenario& s,
                                               double prelog = kDefaultPrelog) {
  detail::require_df(s);
  detail::check_prelog(prelog);
  double m = std::numeric_limits<double>::infinity();
  for (const Hop& h : s.hops()) {
    const double snr = h.average_snr();
    const double k2 = h.kappa() * h.kappa();
    m = std::min(m, prelog * std::log2(1.0 + snr / (snr * k2 + 1.0)));
  }
  return {m, CapacityKind::upper_bound, prelog};
}

}  // namespace relaylim::capacity
