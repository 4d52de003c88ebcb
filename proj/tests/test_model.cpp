#include <gtest/gtest.h>

#include <cmath>

#include "relaylim/model.hpp"
#include "relaylim/scenario_io.hpp"

using namespace relaylim;

namespace {

Scenario unit_pair(double k1, double k2, GainMode mode = GainMode::variable, double beta = 5.0) {
  return Scenario::af(Hop(1, 1, 2, beta, k1), Hop(1, 1, 2, beta, k2), mode);
}

}  // namespace

TEST(Hardware, AggregateKappa) {
  EXPECT_NEAR(aggregate_kappa({0.1, 0.1}), 0.141421356, 1e-9);
  EXPECT_EQ(aggregate_kappa({0.08, 0.0}), 0.08);
  EXPECT_EQ(aggregate_kappa({0.0, 0.0}), 0.0);
  EXPECT_THROW(aggregate_kappa({-0.1, 0.0}), std::domain_error);
  const double k = aggregate_kappa({0.03, 0.2});
  EXPECT_GE(k, 0.2);
}

TEST(Hop, Validation) {
  EXPECT_THROW(Hop(0, 1, 2, 1, 0), std::domain_error);
  EXPECT_THROW(Hop(1, 0, 2, 1, 0), std::domain_error);
  EXPECT_THROW(Hop(1, 1, 0, 1, 0), std::domain_error);
  EXPECT_THROW(Hop(1, 1, 65, 1, 0), std::domain_error);
  EXPECT_THROW(Hop(1, 1, 2, 0, 0), std::domain_error);
  EXPECT_THROW(Hop(1, 1, 2, 1, -0.1), std::domain_error);
  const Hop h(2.0, 0.5, 3, 4.0, 0.1);
  EXPECT_EQ(h.mean_gain(), 12.0);
  EXPECT_EQ(h.average_snr(), 48.0);
}

TEST(Hop, BetaForTargetSnr) {
  EXPECT_EQ(beta_for_target_snr(Hop(1, 1, 2, 1, 0), 100.0), 50.0);
  EXPECT_NEAR(beta_for_target_snr(Hop(2, 0.5, 1, 1, 0), db_to_linear(10.0)), 2.5, 1e-12);
  const Hop h(1.7, 0.3, 3, 1, 0);
  const Hop g = h.with_beta(beta_for_target_snr(h, 123.0));
  EXPECT_NEAR(g.average_snr(), 123.0, 1e-12);
  EXPECT_THROW(beta_for_target_snr(h, 0.0), std::domain_error);
}

TEST(Hop, DecibelRoundTrip) {
  for (double db = -30.0; db <= 80.0; db += 3.7) {
    EXPECT_NEAR(linear_to_db(db_to_linear(db)), db, 1e-12);
  }
}

TEST(Scenario, ShapeRules) {
  const Hop h(1, 1, 1, 1, 0);
  EXPECT_THROW(Scenario({h}, Protocol::amplify_forward), UsageError);
  EXPECT_THROW(Scenario({h, h, h}, Protocol::amplify_forward), UsageError);
  EXPECT_THROW(Scenario({h}, Protocol::decode_forward), UsageError);
  EXPECT_NO_THROW(Scenario({h, h, h}, Protocol::decode_forward));
}

TEST(Scenario, DistortionConstants) {
  const auto s = unit_pair(0.1, 0.2);
  EXPECT_NEAR(s.d(), 0.01 + 0.04 + 0.0004, 1e-15);
  EXPECT_NEAR(s.delta(), 0.04, 1e-15);
  EXPECT_EQ(s.d(), unit_pair(0.2, 0.1).d());
  EXPECT_LE(s.delta(), s.d());
}

TEST(AfGain, Examples) {
  // Variable gain, no first-hop noise: sqrt(1 / 4).
  EXPECT_EQ(amplification(1, 1, 0, 0, 4), 0.5);
  const auto s = Scenario::af(Hop(1, 1, 2, 5, 0.1), Hop(1, 1, 2, 5, 0.1), GainMode::fixed);
  EXPECT_NEAR(af_gain(s, GainMode::fixed), std::sqrt(1.0 / (10 * 1.01 + 1)), 1e-12);
  EXPECT_NEAR(af_gain(s, GainMode::fixed), 0.300150, 1e-6);
  EXPECT_EQ(af_gain(s, GainMode::variable, 10.0), af_gain(s, GainMode::fixed));
  EXPECT_THROW(af_gain(s, GainMode::variable), UsageError);
}

TEST(AfCoefficients, Examples) {
  auto k = af_coefficients(unit_pair(0, 0), GainMode::variable);
  EXPECT_EQ(k.b1, 1.0);
  EXPECT_EQ(k.b2, 1.0);
  EXPECT_EQ(k.c, 1.0);
  EXPECT_EQ(k.d, 0.0);

  k = af_coefficients(unit_pair(0.1, 0.1), GainMode::variable);
  EXPECT_NEAR(k.b1, 1.01, 1e-15);
  EXPECT_NEAR(k.b2, 1.01, 1e-15);
  EXPECT_EQ(k.c, 1.0);
  EXPECT_NEAR(k.d, 0.0201, 1e-15);

  k = af_coefficients(unit_pair(0.1, 0.1, GainMode::fixed), GainMode::fixed);
  EXPECT_EQ(k.b1, 0.0);
  EXPECT_NEAR(k.b2, 1.01, 1e-15);
  EXPECT_NEAR(k.c, 11.1, 1e-12);
  EXPECT_NEAR(k.d, 0.0201, 1e-15);

  const auto df = Scenario::df({Hop(1, 1, 1, 1, 0), Hop(1, 1, 1, 1, 0)});
  EXPECT_THROW(af_coefficients(df, GainMode::variable), UsageError);
}

TEST(Sndr, Examples) {
  const auto df = Scenario::df({Hop(1, 1, 1, 1, 0.1), Hop(1, 1, 1, 1, 0.1)});
  EXPECT_NEAR(instantaneous_sndr(df, GainMode::variable, 10.0, 20.0),
              std::min(10.0 / 1.1, 20.0 / 1.2), 1e-12);
  EXPECT_NEAR(af_sndr({1, 1, 1, 0}, 1.0, 1.0), 1.0 / 3.0, 1e-15);
}

TEST(Sndr, ApproachesCeilingFromBelow) {
  for (GainMode m : {GainMode::fixed, GainMode::variable}) {
    const auto s = unit_pair(0.1, 0.15, m);
    const double ceiling = 1.0 / s.d();
    double prev = 0.0;
    for (int k = 1; k <= 8; ++k) {
      const double rho = std::pow(10.0, k);
      const double g = instantaneous_sndr(s, m, rho, rho);
      EXPECT_LT(g, ceiling);
      EXPECT_GT(g, prev);
      prev = g;
    }
    EXPECT_NEAR(prev, ceiling, 1e-5 * ceiling);
  }
}

TEST(Sndr, IdealHardwareReducesToClassicalForms) {
  const auto s = Scenario::af(Hop(2, 0.5, 2, 3, 0), Hop(1.5, 0.7, 2, 4, 0), GainMode::variable);
  const double r1 = 2.3, r2 = 0.9;
  const double g1 = 2 * r1 / 0.5, g2 = 1.5 * r2 / 0.7;
  EXPECT_NEAR(instantaneous_sndr(s, r1, r2), g1 * g2 / (g1 + g2 + 1.0), 1e-12);
  const auto f = s.with_mode(GainMode::fixed);
  const double g = af_gain(f, GainMode::fixed);
  const double c_fixed = 0.7 / (2.0 * g * g);
  // Classical fixed gain: rho1 rho2 / (rho2 N1/P1 + N2/(P1 G^2)).
  EXPECT_NEAR(instantaneous_sndr(f, r1, r2), r1 * r2 / (r2 * 0.5 / 2.0 + c_fixed), 1e-12);
}

TEST(Sndr, VariableGainSymmetry) {
  const Hop a(1.3, 0.4, 2, 2.0, 0.12);
  const Hop b(0.8, 0.9, 3, 1.5, 0.05);
  const auto s = Scenario::af(a, b, GainMode::variable);
  const auto t = Scenario::af(b, a, GainMode::variable);
  EXPECT_NEAR(instantaneous_sndr(s, 2.0, 7.0), instantaneous_sndr(t, 7.0, 2.0), 1e-12);
}

TEST(Sndr, HardCeilingOnRandomGains) {
  const auto s = unit_pair(0.2, 0.05);
  const auto df = Scenario::df({Hop(1, 1, 1, 1, 0.2), Hop(1, 1, 1, 1, 0.05)});
  for (double r1 = 1e-3; r1 < 1e9; r1 *= 7.3) {
    for (double r2 = 1e-3; r2 < 1e9; r2 *= 11.1) {
      EXPECT_LT(instantaneous_sndr(s, r1, r2), 1.0 / s.d());
      EXPECT_LT(instantaneous_sndr(df, GainMode::variable, r1, r2), 1.0 / df.delta());
    }
  }
}

TEST(ScenarioIo, ParsesFlatDocument) {
  const auto s = parse_scenario(std::string(R"({
    "protocol": "af", "mode": "fixed",
    "hop1.p_watts": 1, "hop1.n_watts": 1, "hop1.alpha": 2, "hop1.snr_db": 20, "hop1.kappa": 0.1,
    "hop2.p_watts": 2, "hop2.n_watts": 1, "hop2.alpha": 3, "hop2.beta": 4,
    "hop2.kappa_t": 0.1, "hop2.kappa_r": 0.1
  })"));
  EXPECT_TRUE(s.is_af());
  EXPECT_EQ(s.mode(), GainMode::fixed);
  EXPECT_NEAR(s.hop(0).average_snr(), 100.0, 1e-12);
  EXPECT_EQ(s.hop(1).beta(), 4.0);
  EXPECT_NEAR(s.hop(1).kappa(), std::sqrt(0.02), 1e-15);

  const auto back = parse_scenario(to_json(s));
  EXPECT_EQ(back.hop(1).alpha(), 3);
  EXPECT_EQ(back.hop(0).beta(), s.hop(0).beta());
}

TEST(ScenarioIo, ErrorsNameTheKey) {
  const std::string base = R"("protocol": "df", "hop1.p_watts": 1, "hop1.n_watts": 1,
    "hop1.alpha": 1, "hop1.beta": 1, "hop1.kappa": 0,
    "hop2.p_watts": 1, "hop2.n_watts": 1, "hop2.alpha": 1, "hop2.kappa": 0)";
  auto expect_key = [](const std::string& doc, const std::string& key) {
    try {
      parse_scenario(doc);
      FAIL() << "expected UsageError for " << key;
    } catch (const UsageError& e) {
      EXPECT_NE(std::string(e.what()).find(key), std::string::npos) << e.what();
    }
  };
  expect_key("{" + base + "}", "hop2.beta");
  expect_key("{" + base + R"(, "hop2.beta": 1, "hop2.colour": 1})", "hop2.colour");
  expect_key("{" + base + R"(, "hop2.beta": 1, "hop2.snr_db": 3})", "hop2.snr_db");
  expect_key(R"({"protocol": "af", "hop1.p_watts": 1})", "mode");
  EXPECT_THROW(parse_scenario(std::string("{not json")), UsageError);
  EXPECT_NO_THROW(parse_scenario("{" + base + R"(, "hop2.beta": 1})"));
}
