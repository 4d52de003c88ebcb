#include <gtest/gtest.h>

#include <cmath>

#include "relaylim/quadrature.hpp"

namespace q = relaylim::quadrature;

TEST(Quadrature, ExactForLowDegreePolynomials) {
  // A single 21-point Kronrod rule integrates degree 31 exactly.
  q::Options o;
  o.initial_pieces = 1;
  for (int deg = 0; deg <= 31; ++deg) {
    auto f = [deg](double x) { return std::pow(x, deg); };
    const auto r = q::integrate(f, 0.0, 1.0, o);
    EXPECT_NEAR(r.value, 1.0 / (deg + 1), 1e-15) << "degree " << deg;
  }
}

TEST(Quadrature, SemiInfiniteExponential) {
  const auto r = q::integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  const auto s = q::integrate_semi_infinite([](double x) { return std::exp(-x / 1e6); }, 2e6, 1e6);
  EXPECT_NEAR(s.value / 1e6, std::exp(-2.0), 1e-12);
}

TEST(Quadrature, EndpointSingularity) {
  q::Options o;
  o.rel_tol = 1e-10;
  const auto r = q::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, o);
  EXPECT_NEAR(r.value, 2.0, 1e-8);
}

TEST(Quadrature, SubdivisionCapCarriesEstimate) {
  q::Options o;
  o.max_subdivisions = 3;
  o.rel_tol = 1e-14;
  try {
    q::integrate([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, o);
    FAIL() << "expected NumericalError";
  } catch (const q::NumericalError& e) {
    EXPECT_TRUE(std::isfinite(e.estimate()));
    EXPECT_GT(e.error_estimate(), 0.0);
  }
}

TEST(Quadrature, QuadrantProduct) {
  auto f = [](double x, double y) { return std::exp(-x) * y * std::exp(-y / 3.0); };
  const auto r = q::integrate_quadrant(f, 1.0, 3.0);
  EXPECT_NEAR(r.value, 9.0, 1e-8);
}

TEST(Quadrature, RejectsBadInput) {
  EXPECT_THROW(q::integrate([](double) { return 1.0; }, 1.0, 0.0), std::domain_error);
  EXPECT_THROW(q::integrate_semi_infinite([](double) { return 1.0; }, 0.0, 0.0), std::domain_error);
  EXPECT_EQ(q::integrate([](double) { return 1.0; }, 2.0, 2.0).value, 0.0);
}
