#pragma once

// Randomized cross-check of the outage evaluators: closed form against
// quadrature (absolute tolerance) and against Monte Carlo (standard errors).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "relaylim/model.hpp"
#include "relaylim/montecarlo.hpp"
#include "relaylim/outage.hpp"
#include "relaylim/rng.hpp"
#include "relaylim/sweep.hpp"

namespace relaylim::validate {

struct ValidationOptions {
  int n_scenarios = 200;
  std::uint64_t seed = 1;
  std::uint64_t mc_samples = 1000000;
  // Draw thresholds at or above the SNDR ceiling instead of below it.
  bool saturate = false;
  double quadrature_tol = 1e-8;
  double mc_sigmas = 3.0;
  unsigned workers = 1;
};

struct Case {
  Scenario scenario;
  double x = 0.0;
  std::uint64_t mc_seed = 0;
};

struct CaseResult {
  Case input;
  double closed = 0.0;
  double quadrature = 0.0;
  montecarlo::Estimate mc;
  bool saturated = false;
  double quad_deviation = 0.0;
  // |closed - mc| in units of the binomial standard error at the closed value.
  double mc_z = 0.0;
  bool quad_ok = false;
  bool mc_ok = false;
};

struct Report {
  std::vector<CaseResult> cases;
  double max_quad_deviation = 0.0;
  double max_mc_z = 0.0;
  int quad_failures = 0;
  int mc_failures = 0;
  int saturated = 0;

  bool passed() const { return quad_failures == 0 && mc_failures == 0; }
};

namespace detail {

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  const auto v = rng::philox4x32_10(
      {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5eedu, 0u},
      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  return (static_cast<std::uint64_t>(v[1]) << 32) | v[0];
}

}  // namespace detail

/// Case i of the randomized suite. Cases cycle AF fixed, AF variable, DF;
/// alpha in 1..4, SNR in [0, 40] dB, kappa in [0, 0.3] per hop, and x
/// log-uniform in [0.1, 0.9/d] (or [1/c, 10/c] with saturate).
inline Case make_case(std::uint64_t seed, int i, bool saturate) {
  rng::CounterRng g(detail::derive_seed(seed, 0xCA5E), static_cast<std::uint64_t>(i));
  std::vector<Hop> hops;
  for (int h = 0; h < 2; ++h) {
    const int alpha = 1 + static_cast<int>(g.uniform() * 4.0);
    const double snr_db = 40.0 * g.uniform();
    const double kappa = 0.3 * g.uniform();
    Hop hop(1.0, 1.0, alpha, 1.0, kappa);
    hops.push_back(hop.with_beta(beta_for_target_snr(hop, db_to_linear(snr_db))));
  }
  const int kind = i % 3;
  const Protocol p = kind == 2 ? Protocol::decode_forward : Protocol::amplify_forward;
  const GainMode m = kind == 0 ? GainMode::fixed : GainMode::variable;
  Scenario s(std::move(hops), p, m);
  const double u = g.uniform();
  double x = 0.0;
  if (saturate) {
    x = std::exp(u * std::log(10.0)) / s.ceiling_constant();
  } else {
    const double lo = 0.1;
    const double hi = 0.9 / s.d();
    x = std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
  }
  return {std::move(s), x, detail::derive_seed(seed, static_cast<std::uint64_t>(i))};
}

inline CaseResult check_case(const Case& c, const ValidationOptions& o) {
  CaseResult r{c};
  const Scenario& s = c.scenario;
  const auto closed = s.is_af() ? outage::outage_af_closed(s, c.x) : outage::outage_df_closed(s, c.x);
  const auto quad =
      s.is_af() ? outage::outage_af_quadrature(s, c.x) : outage::outage_df_quadrature(s, c.x);
  r.closed = closed.value;
  r.quadrature = quad.value;
  r.saturated = closed.saturated;
  r.mc = montecarlo::estimate_outage(s, c.x, o.mc_samples, c.mc_seed, o.workers);
  r.quad_deviation = std::abs(r.closed - r.quadrature);
  r.quad_ok = r.quad_deviation < o.quadrature_tol;
  const double p = r.closed;
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(o.mc_samples));
  const double diff = std::abs(r.mc.value - p);
  if (se > 0.0) {
    r.mc_z = diff / se;
    r.mc_ok = r.mc_z <= o.mc_sigmas;
  } else {
    // Degenerate reference (exactly 0 or 1): the estimate must match exactly.
    r.mc_z = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    r.mc_ok = diff == 0.0;
  }
  return r;
}

inline Report run_validation(const ValidationOptions& o) {
  if (o.n_scenarios < 1) throw UsageError("validate: number of scenarios must be >= 1");
  Report rep;
  for (int i = 0; i < o.n_scenarios; ++i) {
    auto r = check_case(make_case(o.seed, i, o.saturate), o);
    rep.max_quad_deviation = std::max(rep.max_quad_deviation, r.quad_deviation);
    rep.max_mc_z = std::max(rep.max_mc_z, r.mc_z);
    rep.quad_failures += !r.quad_ok;
    rep.mc_failures += !r.mc_ok;
    rep.saturated += r.saturated;
    rep.cases.push_back(std::move(r));
  }
  return rep;
}

/// CSV listing of every case followed by a summary block.
inline void print_report(const Report& rep, const ValidationOptions& o, std::ostream& out) {
  using sweep::format_number;
  out << "case,protocol,mode,alpha1,alpha2,snr1_db,snr2_db,kappa1,kappa2,x_lin,closed,quadrature,"
         "mc,mc_std_error,saturated,quad_deviation,mc_z,pass\n";
  for (std::size_t i = 0; i < rep.cases.size(); ++i) {
    const auto& r = rep.cases[i];
    const Scenario& s = r.input.scenario;
    out << i << ',' << to_string(s.protocol()) << ','
        << (s.is_af() ? to_string(s.mode()) : std::string_view("-")) << ',' << s.hop(0).alpha()
        << ',' << s.hop(1).alpha() << ',' << format_number(linear_to_db(s.hop(0).average_snr()))
        << ',' << format_number(linear_to_db(s.hop(1).average_snr())) << ','
        << format_number(s.hop(0).kappa()) << ',' << format_number(s.hop(1).kappa()) << ','
        << format_number(r.input.x) << ',' << format_number(r.closed) << ','
        << format_number(r.quadrature) << ',' << format_number(r.mc.value) << ','
        << format_number(r.mc.std_error) << ',' << (r.saturated ? "true" : "false") << ','
        << format_number(r.quad_deviation) << ',' << format_number(r.mc_z) << ','
        << (r.quad_ok && r.mc_ok ? "true" : "false") << '\n';
  }
  out << "# scenarios: " << rep.cases.size() << " seed: " << o.seed
      << " mc_samples: " << o.mc_samples << '\n';
  out << "# saturated: " << rep.saturated << '\n';
  out << "# max |closed - quadrature|: " << format_number(rep.max_quad_deviation)
      << " (tolerance " << format_number(o.quadrature_tol) << ", failures " << rep.quad_failures
      << ")\n";
  out << "# max |closed - mc| / se: " << format_number(rep.max_mc_z) << " (tolerance "
      << format_number(o.mc_sigmas) << ", failures " << rep.mc_failures << ")\n";
  out << "# result: " << (rep.passed() ? "PASS" : "FAIL") << '\n';
}

}  // namespace relaylim::validate
