#pragma once

// High-SNR limits and hardware design rules: SNDR and capacity ceilings,
// equal-EVM allocation under a cost budget, necessary impairment levels for a
// target threshold, and the rate to threshold mapping.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "relaylim/model.hpp"

namespace relaylim::asymptotics {

/// A ceiling that is either a finite value or unbounded (ideal hardware).
class Ceiling {
 public:
  static Ceiling finite(double v) { return Ceiling(false, v); }
  static Ceiling unbounded() { return Ceiling(true, 0.0); }

  bool is_unbounded() const { return unbounded_; }

  double value() const {
    if (unbounded_) throw std::logic_error("Ceiling: value of an unbounded ceiling");
    return value_;
  }

 private:
  Ceiling(bool unbounded, double v) : unbounded_(unbounded), value_(v) {}

  bool unbounded_;
  double value_;
};

namespace detail {

inline void check_kappas(double k1, double k2) {
  if (!(k1 >= 0.0) || !(k2 >= 0.0) || !std::isfinite(k1) || !std::isfinite(k2)) {
    throw std::domain_error("ceiling: kappa values must be finite and >= 0");
  }
}

inline Ceiling from_constant(double c) {
  return c > 0.0 ? Ceiling::finite(1.0 / c) : Ceiling::unbounded();
}

}  // namespace detail

/// Limit of the end-to-end SNDR as both SNRs grow: 1/d (AF) or 1/max k^2 (DF).
inline Ceiling sndr_ceiling(Protocol p, double kappa1, double kappa2) {
  detail::check_kappas(kappa1, kappa2);
  const double a = kappa1 * kappa1;
  const double b = kappa2 * kappa2;
  return detail::from_constant(p == Protocol::amplify_forward ? a + b + a * b : std::max(a, b));
}

inline Ceiling sndr_ceiling(const Scenario& s) {
  return detail::from_constant(s.ceiling_constant());
}

/// prelog log2(1 + gamma*). For DF this is an upper limit.
inline Ceiling capacity_ceiling(Protocol p, double kappa1, double kappa2, double prelog = 0.5) {
  if (!(prelog > 0.0)) throw std::domain_error("capacity_ceiling: prelog must be > 0");
  const Ceiling g = sndr_ceiling(p, kappa1, kappa2);
  if (g.is_unbounded()) return g;
  return Ceiling::finite(prelog * std::log2(1.0 + g.value()));
}

struct CeilingReport {
  Protocol protocol = Protocol::amplify_forward;
  Ceiling sndr = Ceiling::unbounded();
  Ceiling capacity = Ceiling::unbounded();
  double prelog = 0.5;
};

inline CeilingReport ceiling_report(Protocol p, double kappa1, double kappa2, double prelog = 0.5) {
  return {p, sndr_ceiling(p, kappa1, kappa2), capacity_ceiling(p, kappa1, kappa2, prelog), prelog};
}

/// Hardware cost as a strictly monotone function of EVM, with its inverse.
/// Cost is normally decreasing in EVM; the identity cost is also accepted.
class CostModel {
 public:
  using Fn = std::function<double(double)>;

  /// zeta(k) = k on k >= 0.
  static CostModel identity() {
    return CostModel([](double k) { return k; }, [](double t) { return t; }, 0.0,
                     std::numeric_limits<double>::infinity());
  }

  /// Caller-supplied cost and inverse on a finite [lo, hi]. Monotonicity is
  /// checked on a sample grid of the domain.
  static CostModel from_functions(Fn zeta, Fn inverse, double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw std::domain_error("CostModel: EVM domain must be a finite, non-empty interval");
    }
    CostModel m(std::move(zeta), std::move(inverse), lo, hi);
    m.validate_samples();
    return m;
  }

  /// Piecewise-linear cost through (EVM, cost) knots sorted by EVM.
  static CostModel from_table(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw std::domain_error("CostModel: table needs at least 2 knots");
    for (std::size_t i = 1; i < knots.size(); ++i) {
      if (!(knots[i].first > knots[i - 1].first)) {
        throw std::domain_error("CostModel: table EVMs must be strictly increasing");
      }
    }
    const bool dec = knots[1].second < knots[0].second;
    for (std::size_t i = 1; i < knots.size(); ++i) {
      const bool step_dec = knots[i].second < knots[i - 1].second;
      const bool step_inc = knots[i].second > knots[i - 1].second;
      if (!(dec ? step_dec : step_inc)) {
        throw std::domain_error("CostModel: table costs must be strictly monotone");
      }
    }
    auto zeta = [knots](double k) { return interpolate(knots, k, false); };
    auto inverse = [knots](double t) { return interpolate(knots, t, true); };
    return CostModel(zeta, inverse, knots.front().first, knots.back().first);
  }

  double zeta(double kappa) const {
    if (kappa < lo_ || kappa > hi_) throw std::domain_error("CostModel: EVM outside cost domain");
    return zeta_(kappa);
  }

  double inverse(double cost) const {
    const double a = zeta_(lo_);
    // Only the identity model has an unbounded domain.
    const double b = std::isfinite(hi_) ? zeta_(hi_) : std::numeric_limits<double>::infinity();
    if (!(cost >= std::min(a, b) && cost <= std::max(a, b))) {
      throw std::domain_error("CostModel: cost outside the range of zeta");
    }
    return inverse_(cost);
  }

  double lower() const { return lo_; }
  double upper() const { return hi_; }

 private:
  CostModel(Fn zeta, Fn inverse, double lo, double hi)
      : zeta_(std::move(zeta)), inverse_(std::move(inverse)), lo_(lo), hi_(hi) {}

  void validate_samples() const {
    constexpr int n = 257;
    double prev = zeta_(lo_);
    int sign = 0;
    for (int i = 1; i <= n; ++i) {
      const double k = lo_ + (hi_ - lo_) * i / n;
      const double cur = zeta_(k);
      if (!std::isfinite(cur)) throw std::domain_error("CostModel: cost not finite on domain");
      const int s = cur > prev ? 1 : (cur < prev ? -1 : 0);
      if (s == 0 || (sign != 0 && s != sign)) {
        throw std::domain_error("CostModel: cost must be strictly monotone");
      }
      sign = s;
      prev = cur;
    }
  }

  static double interpolate(const std::vector<std::pair<double, double>>& knots, double v,
                            bool inverse) {
    auto key = [inverse](const std::pair<double, double>& p) { return inverse ? p.second : p.first; };
    auto val = [inverse](const std::pair<double, double>& p) { return inverse ? p.first : p.second; };
    for (std::size_t i = 1; i < knots.size(); ++i) {
      const double k0 = key(knots[i - 1]);
      const double k1 = key(knots[i]);
      if ((v >= std::min(k0, k1)) && (v <= std::max(k0, k1))) {
        const double t = (v - k0) / (k1 - k0);
        return val(knots[i - 1]) + t * (val(knots[i]) - val(knots[i - 1]));
      }
    }
    throw std::domain_error("CostModel: value outside table range");
  }

  Fn zeta_;
  Fn inverse_;
  double lo_;
  double hi_;
};

struct EvmAllocation {
  // Transmit/receive EVMs of hop 1 and hop 2.
  double kappa1_t = 0.0;
  double kappa1_r = 0.0;
  double kappa2_t = 0.0;
  double kappa2_r = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  CeilingReport af;
  CeilingReport df;
};

/// Splits a total cost budget equally over the four transceiver EVMs.
inline EvmAllocation evm_allocation(double t_max, const CostModel& cost = CostModel::identity(),
                                    double prelog = 0.5) {
  if (!std::isfinite(t_max)) throw std::domain_error("evm_allocation: budget must be finite");
  const double each = cost.inverse(t_max / 4.0);
  EvmAllocation out;
  out.kappa1_t = out.kappa1_r = out.kappa2_t = out.kappa2_r = each;
  out.kappa1 = out.kappa2 = aggregate_kappa({each, each});
  out.af = ceiling_report(Protocol::amplify_forward, out.kappa1, out.kappa2, prelog);
  out.df = ceiling_report(Protocol::decode_forward, out.kappa1, out.kappa2, prelog);
  return out;
}

/// Largest equal per-hop kappa whose SNDR ceiling still exceeds x. The
/// condition is necessary only; sufficiency holds in the high-SNR limit.
inline double kappa_necessary(Protocol p, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("kappa_necessary: x must be > 0");
  if (p == Protocol::amplify_forward) return std::sqrt(std::sqrt(1.0 / x + 1.0) - 1.0);
  return 1.0 / std::sqrt(x);
}

/// SNDR threshold for a target rate R: 2^(R/prelog) - 1.
inline double rate_to_threshold(double rate, double prelog = 0.5) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::domain_error("rate_to_threshold: rate must be >= 0");
  }
  if (!(prelog > 0.0)) throw std::domain_error("rate_to_threshold: prelog must be > 0");
  return std::exp2(rate / prelog) - 1.0;
}

}  // namespace relaylim::asymptotics
