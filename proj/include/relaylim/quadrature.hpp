#pragma once

// Globally adaptive Gauss-Kronrod (10/21 point) quadrature on finite and
// semi-infinite intervals, plus iterated two-dimensional integration over
// [0, inf)^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace relaylim::quadrature {

/// Thrown when an integral fails to reach its tolerance within the
/// subdivision budget. Carries the best estimate obtained.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double estimate, double error_estimate)
      : std::runtime_error(what + " (estimate " + std::to_string(estimate) + ", error " +
                           std::to_string(error_estimate) + ")"),
        estimate_(estimate),
        error_estimate_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

struct Options {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int max_subdivisions = 10000;
  // Number of equal pieces the domain is split into before adapting.
  int initial_pieces = 4;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

namespace detail {

// Kronrod abscissae; odd indices are the 10-point Gauss nodes.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208643474262, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod_21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[10];
  double gauss = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double dx = half * kXgk[i];
    const double fsum = f(center - dx) + f(center + dx);
    kronrod += kWgk[i] * fsum;
    if (i % 2 == 1) gauss += kWg[i / 2] * fsum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Adaptive integral of f over [a, b].
template <class F>
Result integrate(F&& f, double a, double b, const Options& opts = {}) {
  if (!(a <= b)) throw std::domain_error("integrate: requires a <= b");
  if (a == b) return {};

  std::priority_queue<detail::Segment> queue;
  double total = 0.0;
  double total_error = 0.0;
  const int pieces = std::max(1, opts.initial_pieces);
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + (b - a) * i / pieces;
    const double hi = i + 1 == pieces ? b : a + (b - a) * (i + 1) / pieces;
    auto seg = detail::gauss_kronrod_21(f, lo, hi);
    total += seg.value;
    total_error += seg.error;
    queue.push(seg);
  }

  int subdivisions = 0;
  auto converged = [&] {
    return total_error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
  };
  while (!converged()) {
    if (!std::isfinite(total)) {
      throw NumericalError("integrate: non-finite integrand", total, total_error);
    }
    if (subdivisions >= opts.max_subdivisions) {
      throw NumericalError("integrate: subdivision limit reached", total, total_error);
    }
    const auto worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    // Interval too narrow to split further: accept what we have.
    if (!(worst.a < mid && mid < worst.b)) break;
    queue.pop();
    const auto left = detail::gauss_kronrod_21(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++subdivisions;
    // Periodically re-sum to stop drift from the running updates.
    if (subdivisions % 64 == 0) {
      auto copy = queue;
      total = 0.0;
      total_error = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_error += copy.top().error;
        copy.pop();
      }
    }
  }
  return {total, total_error, subdivisions};
}

/// Integral of f over [lower, inf) through z = lower + scale * t / (1 - t).
/// `scale` should be a characteristic length of the integrand's decay.
template <class F>
Result integrate_semi_infinite(F&& f, double lower, double scale = 1.0,
                               const Options& opts = {}) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::domain_error("integrate_semi_infinite: scale must be finite and > 0");
  }
  auto mapped = [&](double t) {
    const double one_minus = 1.0 - t;
    if (one_minus <= 0.0) return 0.0;
    const double z = lower + scale * t / one_minus;
    const double jac = scale / (one_minus * one_minus);
    if (!std::isfinite(z) || !std::isfinite(jac)) return 0.0;
    const double v = f(z);
    return v == 0.0 ? 0.0 : v * jac;
  };
  return integrate(mapped, 0.0, 1.0, opts);
}

/// Iterated integral over [0, inf)^2 of f(x, y); the inner integral runs over
/// x with tolerance rel_tol * inner_fraction.
template <class F>
Result integrate_quadrant(F&& f, double scale_x, double scale_y, const Options& opts = {},
                          double inner_fraction = 1e-4) {
  Options inner = opts;
  inner.rel_tol = std::max(opts.rel_tol * inner_fraction, 1e-13);
  inner.abs_tol = opts.abs_tol * inner_fraction;
  double worst_inner = 0.0;
  auto outer = [&](double y) {
    auto row = [&](double x) { return f(x, y); };
    const auto r = integrate_semi_infinite(row, 0.0, scale_x, inner);
    worst_inner = std::max(worst_inner, r.error);
    return r.value;
  };
  auto result = integrate_semi_infinite(outer, 0.0, scale_y, opts);
  result.error += worst_inner;
  return result;
}

}  // namespace relaylim::quadrature
