#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "relaylim/outage.hpp"
#include "relaylim/rng.hpp"

using namespace relaylim;
namespace o = relaylim::outage;
namespace q = relaylim::quadrature;

namespace {

Scenario pair(Protocol p, GainMode m, int a1, int a2, double snr1_db, double snr2_db, double k1,
              double k2) {
  Hop h1(1, 1, a1, 1, k1);
  Hop h2(1, 1, a2, 1, k2);
  h1 = h1.with_beta(beta_for_target_snr(h1, db_to_linear(snr1_db)));
  h2 = h2.with_beta(beta_for_target_snr(h2, db_to_linear(snr2_db)));
  return Scenario({h1, h2}, p, m);
}

// Outage assembled term by term: for each j < alpha1, the conditional
// integral over the second-hop gain is done by plain adaptive quadrature.
// With `use_identity` the same integrals are taken from the Bessel identity.
double outage_by_conditional_terms(const AfCoefficients& k, int a1, double b1, int a2, double b2,
                                   double x, bool use_identity) {
  const double w = x / (1.0 - k.d * x);
  const double a = k.b1 * k.b2 * w * w + k.c * w;
  double sum = 0.0;
  for (int j = 0; j < a1; ++j) {
    const double log_pre = -w * (k.b2 / b1 + k.b1 / b2) + j * std::log(a) - specfun::log_factorial(j) -
                           j * std::log(b1) - a2 * std::log(b2) - specfun::log_factorial(a2 - 1);
    double integral = 0.0;
    if (use_identity) {
      integral = o::bessel_product_integral(a2 - 1, j, k.b1 * w, k.b2 * w / a, a / b1, 1.0 / b2);
    } else {
      auto f = [&](double z) {
        if (z <= 0.0) return 0.0;
        return std::pow(z + k.b1 * w, a2 - 1) * std::pow(1.0 / z + k.b2 * w / a, j) *
               std::exp(-(a / (b1 * z) + z / b2));
      };
      q::Options opt;
      opt.rel_tol = 1e-12;
      integral = q::integrate_semi_infinite(f, 0.0, a2 * b2, opt).value;
    }
    sum += std::exp(log_pre) * integral;
  }
  return 1.0 - sum;
}

}  // namespace

TEST(RatioCdf, Examples) {
  const o::Cdf exp1 = [](double y) { return specfun::gamma_cdf_int(y, 1, 1.0); };
  EXPECT_NEAR(o::ratio_cdf(exp1, 2, 1, 1, 1), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_EQ(o::ratio_cdf(exp1, 2, 1, 1, 2.0), 1.0);
  EXPECT_EQ(o::ratio_cdf(exp1, 2, 1, 1, 5.0), 1.0);
  for (double y = 0.0; y < 10.0; y += 0.37) EXPECT_EQ(o::ratio_cdf(exp1, 1, 0, 1, y), exp1(y));
  EXPECT_THROW(o::ratio_cdf(exp1, 0, 1, 1, 1), std::domain_error);
  EXPECT_THROW(o::ratio_cdf(exp1, 1, -1, 1, 1), std::domain_error);
  EXPECT_THROW(o::ratio_cdf(exp1, 1, 1, 0, 1), std::domain_error);
}

TEST(OutageAf, ZeroThresholdAndCeiling) {
  for (GainMode m : {GainMode::fixed, GainMode::variable}) {
    const auto s = pair(Protocol::amplify_forward, m, 2, 2, 20, 20, 0.1, 0.1);
    EXPECT_EQ(o::outage_af_closed(s, 0.0).value, 0.0);
    EXPECT_EQ(o::outage_af_quadrature(s, 0.0).value, 0.0);
    const double ceiling = 1.0 / s.d();
    EXPECT_EQ(o::outage_af_closed(s, ceiling).value, 1.0);
    EXPECT_TRUE(o::outage_af_closed(s, ceiling).saturated);
    EXPECT_EQ(o::outage_af_closed(s, ceiling * (1 + 1e-12)).value, 1.0);
    EXPECT_EQ(o::outage_af_quadrature(s, ceiling * (1 + 1e-12)).value, 1.0);
    EXPECT_FALSE(o::outage_af_closed(s, ceiling * (1 - 1e-3)).saturated);
  }
}

TEST(OutageAf, GoldenVariableGainPoint) {
  // Recorded from the quadrature form; the closed form and an independent
  // Monte Carlo run (tests/test_montecarlo.cpp) agree with it.
  const auto s = pair(Protocol::amplify_forward, GainMode::variable, 2, 2, 20, 20, 0.1, 0.1);
  const double quad = o::outage_af_quadrature(s, 3.0).value;
  EXPECT_NEAR(quad, 0.00474762644, 1e-10);
  EXPECT_NEAR(o::outage_af_closed(s, 3.0).value, quad, 1e-12);
}

TEST(OutageAf, IdealRayleighReducesToKnownForm) {
  const double om1 = 7.0, om2 = 3.0;
  const auto s = Scenario::af(Hop(1, 1, 1, om1, 0), Hop(1, 1, 1, om2, 0), GainMode::variable);
  const auto k = af_coefficients(s);
  for (double x : {0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0}) {
    // 1 - 2 sqrt((x^2 + x)/(om1 om2)) exp(-x (1/om1 + 1/om2)) K1(2 sqrt((x^2 + x)/(om1 om2)))
    const double a = x * x + x;
    const double ref = 1.0 - 2.0 * std::sqrt(a / (om1 * om2)) * std::exp(-x * (1 / om1 + 1 / om2)) *
                                 std::cyl_bessel_k(1.0, 2.0 * std::sqrt(a / (om1 * om2)));
    EXPECT_NEAR(o::outage_af_closed(k, 1, om1, 1, om2, x).value, ref, 1e-12) << "x=" << x;
  }
}

TEST(OutageAf, RayleighFastPathMatchesGeneralSum) {
  // Shape 1 goes through the single-K1 branch; the triple sum is reached by
  // evaluating with the roles that take the general path and comparing
  // through the conditional-term construction.
  for (GainMode m : {GainMode::fixed, GainMode::variable}) {
    const auto s = pair(Protocol::amplify_forward, m, 1, 1, 12, 17, 0.1, 0.2);
    const auto k = af_coefficients(s);
    for (double x : {0.2, 1.0, 5.0, 15.0}) {
      const double fast = o::outage_af_closed(s, x).value;
      const double general = outage_by_conditional_terms(k, 1, s.hop(0).beta(), 1,
                                                         s.hop(1).beta(), x, true);
      EXPECT_NEAR(fast, general, 1e-12);
    }
  }
}

TEST(OutageAf, MatchesConditionalTermConstruction) {
  rng::CounterRng g(7, 0);
  for (int i = 0; i < 40; ++i) {
    const int a1 = 1 + static_cast<int>(g.uniform() * 4);
    const int a2 = 1 + static_cast<int>(g.uniform() * 4);
    const GainMode m = i % 2 ? GainMode::fixed : GainMode::variable;
    const auto s = pair(Protocol::amplify_forward, m, a1, a2, 30 * g.uniform(), 30 * g.uniform(),
                        0.3 * g.uniform(), 0.3 * g.uniform());
    const auto k = af_coefficients(s);
    const double x = 0.9 * g.uniform() / s.d();
    const double closed = o::outage_af_closed(s, x).value;
    const double by_quadrature =
        outage_by_conditional_terms(k, a1, s.hop(0).beta(), a2, s.hop(1).beta(), x, false);
    const double by_identity =
        outage_by_conditional_terms(k, a1, s.hop(0).beta(), a2, s.hop(1).beta(), x, true);
    EXPECT_NEAR(closed, by_quadrature, 1e-9) << "case " << i;
    EXPECT_NEAR(closed, by_identity, 1e-12) << "case " << i;
  }
}

TEST(OutageAf, ClosedMatchesQuadratureOnGrid) {
  for (GainMode m : {GainMode::fixed, GainMode::variable}) {
    for (double k : {0.0, 0.1}) {
      for (double x : {3.0, 31.0}) {
        for (double snr = 0.0; snr <= 50.0; snr += 2.5) {
          const auto s = pair(Protocol::amplify_forward, m, 2, 2, snr, snr, k, k);
          EXPECT_NEAR(o::outage_af_closed(s, x).value, o::outage_af_quadrature(s, x).value, 1e-8)
              << "snr=" << snr << " k=" << k << " x=" << x;
        }
      }
    }
  }
}

TEST(OutageAf, Monotonicity) {
  const auto s = pair(Protocol::amplify_forward, GainMode::fixed, 3, 2, 15, 20, 0.1, 0.15);
  double prev = 0.0;
  for (double x = 0.0; x < 1.0 / s.d() + 1.0; x += 0.25) {
    const double p = o::outage_af_closed(s, x).value;
    EXPECT_GE(p, prev - 1e-15);
    prev = p;
  }
  prev = 1.0;
  for (double snr = 0.0; snr <= 60.0; snr += 2.0) {
    const double p =
        o::outage_af_closed(pair(Protocol::amplify_forward, GainMode::variable, 2, 2, snr, 25, 0.1,
                                 0.1),
                            10.0)
            .value;
    EXPECT_LE(p, prev + 1e-15);
    prev = p;
  }
}

TEST(OutageAf, PrecisionFlag) {
  const auto s = pair(Protocol::amplify_forward, GainMode::variable, 4, 4, 60, 60, 0, 0);
  const auto v = o::outage_af_closed(s, 0.01);
  EXPECT_TRUE(v.precision_limited);
  EXPECT_GE(v.value, 0.0);
}

TEST(OutageAf, RejectsDegenerateCoefficients) {
  EXPECT_THROW(o::outage_af_closed({0, 1, 0, 0}, 2, 1, 2, 1, 1.0), std::domain_error);
  EXPECT_THROW(o::outage_af_closed({1, 1, 1, 0}, 0, 1, 2, 1, 1.0), std::domain_error);
}

TEST(OutageDf, Examples) {
  // Rayleigh, SNR 10 linear per hop.
  const auto ideal = Scenario::df({Hop(1, 1, 1, 10, 0), Hop(1, 1, 1, 10, 0)});
  EXPECT_NEAR(o::outage_df_closed(ideal, 1.0).value, 1.0 - std::exp(-0.2), 1e-15);
  const auto impaired = Scenario::df({Hop(1, 1, 1, 10, 0.1), Hop(1, 1, 1, 10, 0.1)});
  EXPECT_NEAR(o::outage_df_closed(impaired, 1.0).value, 1.0 - std::exp(-2.0 * (0.1 / 0.99)), 1e-15);
  EXPECT_NEAR(o::outage_df_closed(impaired, 1.0).value, 0.182922, 1e-6);
  const auto asym = Scenario::df({Hop(1, 1, 2, 3, 0.1), Hop(1, 1, 2, 3, 0.2)});
  EXPECT_EQ(o::outage_df_closed(asym, 1.0 / 0.04).value, 1.0);
  EXPECT_TRUE(o::outage_df_closed(asym, 1.0 / 0.04).saturated);
}

TEST(OutageDf, GeneralCdfsReproduceClosedForm) {
  const auto s = Scenario::df({Hop(1.2, 0.8, 2, 30, 0.1), Hop(0.7, 1.1, 3, 20, 0.15),
                               Hop(1.0, 1.0, 1, 50, 0.05)});
  std::vector<o::Cdf> cdfs;
  for (const Hop& h : s.hops()) {
    cdfs.emplace_back([h](double y) { return specfun::gamma_cdf_int(y, h.alpha(), h.beta()); });
  }
  for (int i = 0; i < 50; ++i) {
    const double x = 0.5 * i;
    EXPECT_NEAR(o::outage_df_general(cdfs, s.hops(), x).value, o::outage_df_closed(s, x).value, 1e-12);
  }
}

TEST(OutageDf, SingleHopAndUniformGains) {
  const Hop h(1, 1, 1, 1, 0.1);
  const o::Cdf exp1 = [](double y) { return 1.0 - std::exp(-y); };
  const std::vector<o::Cdf> one{exp1};
  const std::vector<Hop> hops{h};
  EXPECT_NEAR(o::outage_df_general(one, hops, 2.0).value, o::ratio_cdf(exp1, 1, 0.01, 1, 2.0), 1e-15);

  const o::Cdf uniform = [](double y) { return std::min(1.0, std::max(0.0, y)); };
  const std::vector<o::Cdf> two{uniform, uniform};
  const std::vector<Hop> ideal{Hop(1, 1, 1, 1, 0), Hop(1, 1, 1, 1, 0)};
  EXPECT_NEAR(o::outage_df_general(two, ideal, 0.5).value, 0.75, 1e-15);
}

TEST(OutageDf, QuadratureOfDensityAgrees) {
  for (double snr : {0.0, 15.0, 40.0}) {
    const auto s = pair(Protocol::decode_forward, GainMode::variable, 2, 3, snr, snr + 3, 0.1, 0.2);
    for (double x : {0.1, 1.0, 5.0, 20.0}) {
      EXPECT_NEAR(o::outage_df_closed(s, x).value, o::outage_df_quadrature(s, x).value, 1e-10);
    }
  }
}

TEST(BesselProductIntegral, Examples) {
  EXPECT_NEAR(o::bessel_product_integral(0, 0, 0, 0, 1, 1), 2.0 * std::cyl_bessel_k(1.0, 2.0), 1e-14);
  q::Options opt;
  opt.rel_tol = 1e-12;
  auto f = [](double x) { return x <= 0.0 ? 0.0 : std::exp(-(1.0 / x + 4.0 * x)); };
  const double ref = q::integrate_semi_infinite(f, 0.0, 0.5, opt).value;
  EXPECT_NEAR(o::bessel_product_integral(1, 1, 0, 0, 1, 4) / ref, 1.0, 1e-10);
  EXPECT_THROW(o::bessel_product_integral(-1, 0, 0, 0, 1, 1), std::domain_error);
  EXPECT_THROW(o::bessel_product_integral(0, 0, 0, 0, 0, 1), std::domain_error);
}

TEST(BesselProductIntegral, MatchesQuadratureOnRandomParameters) {
  rng::CounterRng g(11, 0);
  q::Options opt;
  opt.rel_tol = 1e-12;
  for (int i = 0; i < 100; ++i) {
    const int p1 = static_cast<int>(g.uniform() * 4);
    const int p2 = static_cast<int>(g.uniform() * 4);
    const double c1 = 0.1 + 4.9 * g.uniform();
    const double c2 = 0.1 + 4.9 * g.uniform();
    const double c3 = 0.1 + 4.9 * g.uniform();
    const double c4 = 0.1 + 4.9 * g.uniform();
    auto f = [&](double x) {
      if (x <= 0.0) return 0.0;
      return std::pow(x + c1, p1) * std::pow(1.0 / x + c2, p2) * std::exp(-(c3 / x + c4 * x));
    };
    const double ref = q::integrate_semi_infinite(f, 0.0, std::sqrt(c3 / c4), opt).value;
    EXPECT_NEAR(o::bessel_product_integral(p1, p2, c1, c2, c3, c4) / ref, 1.0, 1e-8) << "draw " << i;
  }
}
