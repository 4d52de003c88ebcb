#pragma once

// Seeded Monte Carlo oracles: Gamma channel gains, a signal-level simulation
// of the transceiver impairment model, and outage / capacity estimators.
// Work is cut into fixed-size chunks, chunk i drawing from Philox stream i, so
// results depend on (seed, n) only and never on the worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "relaylim/model.hpp"
#include "relaylim/rng.hpp"

namespace relaylim::montecarlo {

inline constexpr std::uint64_t kChunkSize = 65536;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  Interval ci95;
};

namespace detail {

inline constexpr double kZ95 = 1.959963984540054;

inline Estimate mean_estimate(double mean, double se, std::uint64_t n) {
  return {mean, se, n, {mean - kZ95 * se, mean + kZ95 * se}};
}

// Wilson score interval for a binomial proportion.
inline Interval wilson(double p, std::uint64_t n) {
  const double z2 = kZ95 * kZ95;
  const double nn = static_cast<double>(n);
  const double center = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

inline void check_samples(std::uint64_t n) {
  if (n < 1000) throw std::domain_error("montecarlo: at least 1000 samples required");
}

}  // namespace detail

/// Binomial proportion estimate; Wilson interval when either count is below 10.
inline Estimate proportion_estimate(std::uint64_t hits, std::uint64_t n) {
  if (n == 0) throw std::domain_error("proportion_estimate: n must be > 0");
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  const double nn = static_cast<double>(n);
  if (std::min(nn * p, nn * (1.0 - p)) < 10.0) return {p, se, n, detail::wilson(p, n)};
  Estimate e = detail::mean_estimate(p, se, n);
  e.ci95 = {std::max(0.0, e.ci95.lo), std::min(1.0, e.ci95.hi)};
  return e;
}

/// Gamma(alpha, beta) variate with integer alpha: beta times a sum of alpha
/// unit exponentials.
inline double sample_channel_gain(int alpha, double beta, rng::CounterRng& g) {
  if (alpha < 1) throw std::domain_error("sample_channel_gain: alpha must be >= 1");
  if (!(beta > 0.0)) throw std::domain_error("sample_channel_gain: beta must be > 0");
  double s = 0.0;
  for (int j = 0; j < alpha; ++j) s -= std::log(g.uniform());
  return beta * s;
}

/// CN(0, variance) by Box-Muller.
inline std::complex<double> sample_complex_normal(double variance, rng::CounterRng& g) {
  const double r = std::sqrt(-variance * std::log(g.uniform()));
  const double theta = 2.0 * std::numbers::pi * g.uniform();
  return {r * std::cos(theta), r * std::sin(theta)};
}

/// Runs `chunk(count, rng)` over [0, n) in fixed chunks and returns the
/// per-chunk results in chunk order.
template <class R, class F>
std::vector<R> run_chunks(std::uint64_t n, std::uint64_t seed, unsigned workers, F&& chunk) {
  const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<R> out(chunks);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      rng::CounterRng g(seed, c);
      const std::uint64_t first = c * kChunkSize;
      out[c] = chunk(std::min(kChunkSize, n - first), g);
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(chunks)));
  if (workers == 1) {
    work();
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return out;
}

namespace detail {

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

// Pairwise reduction over chunk results in index order.
inline Moments reduce(const std::vector<Moments>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  const Moments a = reduce(parts, lo, mid);
  const Moments b = reduce(parts, mid, hi);
  return {a.sum + b.sum, a.sum_sq + b.sum_sq};
}

inline Estimate from_moments(const std::vector<Moments>& parts, std::uint64_t n) {
  const Moments m = reduce(parts, 0, parts.size());
  const double nn = static_cast<double>(n);
  const double mean = m.sum / nn;
  const double var = std::max(0.0, (m.sum_sq / nn - mean * mean) * nn / (nn - 1.0));
  return mean_estimate(mean, std::sqrt(var / nn), n);
}

template <class F>
Estimate mean_of(std::uint64_t n, std::uint64_t seed, unsigned workers, F&& draw) {
  auto parts = run_chunks<Moments>(n, seed, workers, [&](std::uint64_t count, rng::CounterRng& g) {
    Moments m;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double v = draw(g);
      m.sum += v;
      m.sum_sq += v * v;
    }
    return m;
  });
  return from_moments(parts, n);
}

inline double draw_sndr(const Scenario& s, const AfCoefficients& k,
                        rng::CounterRng& g) {
  if (s.is_af()) {
    const double r1 = sample_channel_gain(s.hop(0).alpha(), s.hop(0).beta(), g);
    const double r2 = sample_channel_gain(s.hop(1).alpha(), s.hop(1).beta(), g);
    return af_sndr(k, r1, r2);
  }
  double m = std::numeric_limits<double>::infinity();
  for (const Hop& h : s.hops()) {
    m = std::min(m, hop_sndr(h, sample_channel_gain(h.alpha(), h.beta(), g)));
  }
  return m;
}

}  // namespace detail

/// Fraction of channel draws with end-to-end SNDR <= x.
inline Estimate estimate_outage(const Scenario& s, GainMode mode, double x, std::uint64_t n,
                                std::uint64_t seed, unsigned workers = 1) {
  detail::check_samples(n);
  if (!(x >= 0.0)) throw std::domain_error("estimate_outage: x must be >= 0");
  const double c = s.ceiling_constant();
  // Every realization sits below the ceiling, so no draw is needed.
  if (c > 0.0 && x >= 1.0 / c) return {1.0, 0.0, n, {1.0, 1.0}};
  const AfCoefficients k = s.is_af() ? af_coefficients(s, mode) : AfCoefficients{};
  auto parts = run_chunks<std::uint64_t>(n, seed, workers,
                                         [&](std::uint64_t count, rng::CounterRng& g) {
                                           std::uint64_t hits = 0;
                                           for (std::uint64_t i = 0; i < count; ++i) {
                                             hits += detail::draw_sndr(s, k, g) <= x;
                                           }
                                           return hits;
                                         });
  std::uint64_t hits = 0;
  for (auto h : parts) hits += h;
  return proportion_estimate(hits, n);
}

inline Estimate estimate_outage(const Scenario& s, double x, std::uint64_t n, std::uint64_t seed,
                                unsigned workers = 1) {
  return estimate_outage(s, s.mode(), x, n, seed, workers);
}

/// Sample mean of prelog log2(1 + gamma).
inline Estimate estimate_capacity(const Scenario& s, GainMode mode, std::uint64_t n,
                                  std::uint64_t seed, unsigned workers = 1, double prelog = 0.5) {
  detail::check_samples(n);
  const AfCoefficients k = s.is_af() ? af_coefficients(s, mode) : AfCoefficients{};
  return detail::mean_of(n, seed, workers, [&](rng::CounterRng& g) {
    return prelog * std::log2(1.0 + detail::draw_sndr(s, k, g));
  });
}

inline Estimate estimate_capacity(const Scenario& s, std::uint64_t n, std::uint64_t seed,
                                  unsigned workers = 1) {
  return estimate_capacity(s, s.mode(), n, seed, workers);
}

/// Sample mean of prelog log2(1 + hop SNDR) for one hop.
inline Estimate estimate_hop_capacity(const Hop& h, std::uint64_t n, std::uint64_t seed,
                                      unsigned workers = 1, double prelog = 0.5) {
  detail::check_samples(n);
  return detail::mean_of(n, seed, workers, [&](rng::CounterRng& g) {
    return prelog * std::log2(1.0 + hop_sndr(h, sample_channel_gain(h.alpha(), h.beta(), g)));
  });
}

/// One use of a single impaired link, y = h (s + eta) + nu.
struct SignalSample {
  std::complex<double> s;
  std::complex<double> h;
  std::complex<double> eta;  // effective distortion referred to the transmitter
  std::complex<double> nu;
  std::complex<double> y;
};

/// Draws one link use. With `aggregate` the distortion is a single
/// CN(0, k^2 P) term with k = sqrt(kt^2 + kr^2); otherwise transmit distortion
/// CN(0, kt^2 P) and receive distortion CN(0, kr^2 P |h|^2) are drawn apart.
inline SignalSample draw_signal_sample(const Hop& hop, const HardwareProfile& hw, bool aggregate,
                                       rng::CounterRng& g) {
  SignalSample out;
  const double p = hop.power();
  const double gain = sample_channel_gain(hop.alpha(), hop.beta(), g);
  out.h = std::polar(std::sqrt(gain), 2.0 * std::numbers::pi * g.uniform());
  out.s = sample_complex_normal(p, g);
  if (aggregate) {
    const double k = aggregate_kappa(hw);
    out.eta = sample_complex_normal(k * k * p, g);
  } else {
    const auto eta_t = sample_complex_normal(hw.kappa_t * hw.kappa_t * p, g);
    const auto eta_r = sample_complex_normal(hw.kappa_r * hw.kappa_r * p * gain, g);
    out.eta = gain > 0.0 ? eta_t + eta_r / out.h : eta_t;
  }
  out.nu = sample_complex_normal(hop.noise(), g);
  out.y = out.h * (out.s + out.eta) + out.nu;
  return out;
}

struct HopSignalStats {
  // |h eta|^2 / (P |h|^2) under the split model; its mean is kt^2 + kr^2.
  Estimate distortion_ratio;
  // The same ratio under the aggregate model.
  Estimate aggregate_distortion_ratio;
  // |y|^2 / (P |h|^2 (1 + k^2) + N): conditional received power, mean 1.
  Estimate split_power;
  Estimate aggregate_power;
  // Second moments of the normalized received power.
  Estimate split_power_sq;
  Estimate aggregate_power_sq;
};

/// Signal-level check of the impairment model for one hop. The hop supplies
/// P, N and the fading law; `hw` supplies the transmit/receive EVMs. The two
/// models draw from independent keys derived from the seed.
inline HopSignalStats simulate_hop_signal(const Hop& hop, const HardwareProfile& hw,
                                          std::uint64_t n, std::uint64_t seed,
                                          unsigned workers = 1) {
  if (n < 2) throw std::domain_error("simulate_hop_signal: n must be >= 2");
  const double k2 = hw.kappa_t * hw.kappa_t + hw.kappa_r * hw.kappa_r;
  HopSignalStats out;
  for (bool aggregate : {false, true}) {
    const std::uint64_t key = aggregate ? seed ^ 0x9E3779B97F4A7C15ull : seed;
    struct Acc {
      detail::Moments ratio, power, power_sq;
    };
    auto parts = run_chunks<Acc>(n, key, workers, [&](std::uint64_t count, rng::CounterRng& g) {
      Acc a;
      for (std::uint64_t i = 0; i < count; ++i) {
        const SignalSample smp = draw_signal_sample(hop, hw, aggregate, g);
        const double gain = std::norm(smp.h);
        const double r = std::norm(smp.h * smp.eta) / (hop.power() * gain);
        const double q = std::norm(smp.y) / (hop.power() * gain * (1.0 + k2) + hop.noise());
        a.ratio.sum += r;
        a.ratio.sum_sq += r * r;
        a.power.sum += q;
        a.power.sum_sq += q * q;
        a.power_sq.sum += q * q;
        a.power_sq.sum_sq += q * q * q * q;
      }
      return a;
    });
    std::vector<detail::Moments> ratio, power, power_sq;
    for (const auto& a : parts) {
      ratio.push_back(a.ratio);
      power.push_back(a.power);
      power_sq.push_back(a.power_sq);
    }
    (aggregate ? out.aggregate_distortion_ratio : out.distortion_ratio) =
        detail::from_moments(ratio, n);
    (aggregate ? out.aggregate_power : out.split_power) = detail::from_moments(power, n);
    (aggregate ? out.aggregate_power_sq : out.split_power_sq) = detail::from_moments(power_sq, n);
  }
  return out;
}

struct ChainSinr {
  double empirical = 0.0;  // ratio estimator mean|S|^2 / mean|I|^2
  double std_error = 0.0;  // delta-method standard error
  double analytic = 0.0;   // end-to-end SNDR for the same channel gains
};

/// Symbol-level AF chain for fixed channel gains (rho1, rho2): relay output
/// G y1 with transmit distortion proportional to its conditional power,
/// destination y2 = h2 (G y1 + eta2) + nu2.
inline ChainSinr simulate_af_chain(const Scenario& s, GainMode mode, double rho1, double rho2,
                                   std::uint64_t n, std::uint64_t seed) {
  if (!s.is_af()) throw UsageError("simulate_af_chain: scenario is not AF");
  if (n < 2) throw std::domain_error("simulate_af_chain: n must be >= 2");
  if (!(rho1 > 0.0) || !(rho2 > 0.0)) throw std::domain_error("simulate_af_chain: gains must be > 0");
  const Hop& h1 = s.hop(0);
  const Hop& h2 = s.hop(1);
  const double g = af_gain(s, mode, rho1);
  const double k1 = h1.kappa();
  const double k2 = h2.kappa();
  const double relay_power = g * g * (h1.power() * rho1 * (1.0 + k1 * k1) + h1.noise());
  const std::complex<double> c1(std::sqrt(rho1), 0.0);
  const std::complex<double> c2(std::sqrt(rho2), 0.0);
  const std::complex<double> through = c2 * g * c1;

  rng::CounterRng r(seed, 0);
  double ss = 0.0, ii = 0.0, ss2 = 0.0, ii2 = 0.0, si = 0.0;
  for (std::uint64_t t = 0; t < n; ++t) {
    const auto sym = sample_complex_normal(h1.power(), r);
    const auto eta1 = sample_complex_normal(k1 * k1 * h1.power(), r);
    const auto nu1 = sample_complex_normal(h1.noise(), r);
    const auto y1 = c1 * (sym + eta1) + nu1;
    const auto eta2 = sample_complex_normal(k2 * k2 * relay_power, r);
    const auto nu2 = sample_complex_normal(h2.noise(), r);
    const auto y2 = c2 * (g * y1 + eta2) + nu2;
    const double sp = std::norm(through * sym);
    const double ip = std::norm(y2 - through * sym);
    ss += sp;
    ii += ip;
    ss2 += sp * sp;
    ii2 += ip * ip;
    si += sp * ip;
  }
  const double nn = static_cast<double>(n);
  const double ms = ss / nn, mi = ii / nn;
  const double vs = ss2 / nn - ms * ms, vi = ii2 / nn - mi * mi, cov = si / nn - ms * mi;
  const double ratio = ms / mi;
  const double var = (vs / (mi * mi) - 2.0 * ms * cov / (mi * mi * mi) +
                      ms * ms * vi / (mi * mi * mi * mi)) / nn;
  return {ratio, std::sqrt(std::max(0.0, var)), instantaneous_sndr(s, mode, rho1, rho2)};
}

}  // namespace relaylim::montecarlo
