#pragma once

// Impaired dual-hop (or multi-hop DF) relay link: hardware profiles, hops,
// scenarios, relay gains and the end-to-end SNDR.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relaylim/specfun.hpp"

namespace relaylim {

/// Raised when a call is structurally wrong (missing argument, wrong protocol).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Transmit and receive EVMs of one link.
struct HardwareProfile {
  double kappa_t = 0.0;
  double kappa_r = 0.0;
};

/// Aggregate impairment level sqrt(kappa_t^2 + kappa_r^2).
inline double aggregate_kappa(const HardwareProfile& profile) {
  if (!(profile.kappa_t >= 0.0) || !(profile.kappa_r >= 0.0)) {
    throw std::domain_error("aggregate_kappa: EVMs must be >= 0");
  }
  return std::hypot(profile.kappa_t, profile.kappa_r);
}

/// One hop: transmit power, receiver noise, Nakagami-m gain Gamma(alpha, beta),
/// and aggregate impairment level.
class Hop {
 public:
  Hop(double power, double noise, int alpha, double beta, double kappa)
      : power_(power), noise_(noise), alpha_(alpha), beta_(beta), kappa_(kappa) {
    if (!(power > 0.0) || !std::isfinite(power)) throw std::domain_error("Hop: power must be > 0");
    if (!(noise > 0.0) || !std::isfinite(noise)) throw std::domain_error("Hop: noise must be > 0");
    if (alpha < 1 || alpha > specfun::kMaxShape) {
      throw std::domain_error("Hop: shape must be an integer in [1, " +
                              std::to_string(specfun::kMaxShape) + "]");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::domain_error("Hop: scale must be > 0");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::domain_error("Hop: kappa must be >= 0");
  }

  double power() const { return power_; }
  double noise() const { return noise_; }
  int alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double kappa() const { return kappa_; }

  double mean_gain() const { return alpha_ * beta_; }
  double average_snr() const { return power_ * mean_gain() / noise_; }

  Hop with_beta(double beta) const { return {power_, noise_, alpha_, beta, kappa_}; }
  Hop with_kappa(double kappa) const { return {power_, noise_, alpha_, beta_, kappa}; }

 private:
  double power_;
  double noise_;
  int alpha_;
  double beta_;
  double kappa_;
};

/// Scale beta giving the requested (linear) average SNR with P, N, alpha held.
inline double beta_for_target_snr(const Hop& hop, double target_snr) {
  if (!(target_snr > 0.0) || !std::isfinite(target_snr)) {
    throw std::domain_error("beta_for_target_snr: target SNR must be > 0");
  }
  return hop.noise() * target_snr / (hop.power() * hop.alpha());
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

enum class Protocol { amplify_forward, decode_forward };
enum class GainMode { fixed, variable };

inline std::string_view to_string(Protocol p) {
  return p == Protocol::amplify_forward ? "af" : "df";
}
inline std::string_view to_string(GainMode m) { return m == GainMode::fixed ? "fixed" : "variable"; }

inline Protocol parse_protocol(std::string_view s) {
  if (s == "af" || s == "AF") return Protocol::amplify_forward;
  if (s == "df" || s == "DF") return Protocol::decode_forward;
  throw UsageError("unknown protocol '" + std::string(s) + "' (expected af or df)");
}

inline GainMode parse_gain_mode(std::string_view s) {
  if (s == "fixed") return GainMode::fixed;
  if (s == "variable") return GainMode::variable;
  throw UsageError("unknown gain mode '" + std::string(s) + "' (expected fixed or variable)");
}

/// Ordered hops plus relaying protocol. AF carries exactly two hops, DF two or more.
class Scenario {
 public:
  Scenario(std::vector<Hop> hops, Protocol protocol, GainMode mode = GainMode::variable)
      : hops_(std::move(hops)), protocol_(protocol), mode_(mode) {
    if (protocol_ == Protocol::amplify_forward && hops_.size() != 2) {
      throw UsageError("Scenario: AF relaying needs exactly 2 hops");
    }
    if (protocol_ == Protocol::decode_forward && hops_.size() < 2) {
      throw UsageError("Scenario: DF relaying needs at least 2 hops");
    }
  }

  static Scenario af(Hop first, Hop second, GainMode mode) {
    return Scenario({std::move(first), std::move(second)}, Protocol::amplify_forward, mode);
  }
  static Scenario df(std::vector<Hop> hops) {
    return Scenario(std::move(hops), Protocol::decode_forward);
  }

  const std::vector<Hop>& hops() const { return hops_; }
  const Hop& hop(std::size_t i) const { return hops_.at(i); }
  Protocol protocol() const { return protocol_; }
  GainMode mode() const { return mode_; }
  bool is_af() const { return protocol_ == Protocol::amplify_forward; }

  Scenario with_hops(std::vector<Hop> hops) const { return {std::move(hops), protocol_, mode_}; }
  Scenario with_mode(GainMode mode) const { return {hops_, protocol_, mode}; }

  /// d = k1^2 + k2^2 + k1^2 k2^2 (first two hops).
  double d() const {
    const double a = hops_[0].kappa() * hops_[0].kappa();
    const double b = hops_[1].kappa() * hops_[1].kappa();
    return a + b + a * b;
  }

  /// delta = max_i k_i^2 over all hops.
  double delta() const {
    double m = 0.0;
    for (const auto& h : hops_) m = std::max(m, h.kappa() * h.kappa());
    return m;
  }

  /// Distortion constant bounding the end-to-end SNDR: d for AF, delta for DF.
  double ceiling_constant() const { return is_af() ? d() : delta(); }

 private:
  std::vector<Hop> hops_;
  Protocol protocol_;
  GainMode mode_;
};

/// sqrt(P2 / (P1 g (1 + k1^2) + N1)) where g is the first-hop gain (variable
/// gain) or its mean (fixed gain).
inline double amplification(double p1, double p2, double n1, double kappa1, double gain1) {
  const double den = p1 * gain1 * (1.0 + kappa1 * kappa1) + n1;
  if (!(den > 0.0)) throw std::domain_error("amplification: relay input power must be > 0");
  return std::sqrt(p2 / den);
}

/// Amplification factor. Variable gain needs the first-hop channel gain.
inline double af_gain(const Scenario& s, GainMode mode, std::optional<double> rho1 = std::nullopt) {
  const Hop& h1 = s.hop(0);
  const Hop& h2 = s.hop(1);
  double gain1 = h1.mean_gain();
  if (mode == GainMode::variable) {
    if (!rho1) throw UsageError("af_gain: variable gain requires the first-hop channel gain");
    if (!(*rho1 >= 0.0)) throw std::domain_error("af_gain: channel gain must be >= 0");
    gain1 = *rho1;
  }
  return amplification(h1.power(), h2.power(), h1.noise(), h1.kappa(), gain1);
}

/// Coefficients of gamma = r1 r2 / (r1 r2 d + r1 b1 + r2 b2 + c).
struct AfCoefficients {
  double b1 = 0.0;
  double b2 = 0.0;
  double c = 0.0;
  double d = 0.0;
};

inline AfCoefficients af_coefficients(const Scenario& s, GainMode mode) {
  if (!s.is_af()) throw UsageError("af_coefficients: scenario is not AF");
  const Hop& h1 = s.hop(0);
  const Hop& h2 = s.hop(1);
  const double k1sq = h1.kappa() * h1.kappa();
  const double k2sq = h2.kappa() * h2.kappa();
  AfCoefficients out;
  out.d = s.d();
  out.b2 = h1.noise() * (1.0 + k2sq) / h1.power();
  if (mode == GainMode::fixed) {
    const double g = af_gain(s, mode);
    out.b1 = 0.0;
    out.c = h2.noise() / (h1.power() * g * g);
  } else {
    out.b1 = h2.noise() * (1.0 + k1sq) / h2.power();
    out.c = h1.noise() * h2.noise() / (h1.power() * h2.power());
  }
  return out;
}

inline AfCoefficients af_coefficients(const Scenario& s) { return af_coefficients(s, s.mode()); }

/// End-to-end SNDR of an AF link described by its coefficients.
inline double af_sndr(const AfCoefficients& k, double rho1, double rho2) {
  const double num = rho1 * rho2;
  return num / (num * k.d + rho1 * k.b1 + rho2 * k.b2 + k.c);
}

/// Per-hop SNDR P rho / (P rho k^2 + N).
inline double hop_sndr(const Hop& h, double rho) {
  const double sig = h.power() * rho;
  return sig / (sig * h.kappa() * h.kappa() + h.noise());
}

/// DF end-to-end SNDR: minimum over hops.
inline double df_sndr(std::span<const Hop> hops, std::span<const double> rho) {
  if (hops.size() != rho.size()) throw UsageError("df_sndr: one channel gain per hop required");
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hops.size(); ++i) m = std::min(m, hop_sndr(hops[i], rho[i]));
  return m;
}

/// End-to-end SNDR for the scenario's protocol and the given gain mode.
inline double instantaneous_sndr(const Scenario& s, GainMode mode, std::span<const double> rho) {
  for (double r : rho) {
    if (!(r >= 0.0)) throw std::domain_error("instantaneous_sndr: channel gains must be >= 0");
  }
  if (s.is_af()) {
    if (rho.size() != 2) throw UsageError("instantaneous_sndr: AF needs two channel gains");
    return af_sndr(af_coefficients(s, mode), rho[0], rho[1]);
  }
  return df_sndr(s.hops(), rho);
}

inline double instantaneous_sndr(const Scenario& s, GainMode mode, double rho1, double rho2) {
  const double rho[2] = {rho1, rho2};
  return instantaneous_sndr(s, mode, std::span<const double>(rho, 2));
}

inline double instantaneous_sndr(const Scenario& s, double rho1, double rho2) {
  return instantaneous_sndr(s, s.mode(), rho1, rho2);
}

}  // namespace relaylim
