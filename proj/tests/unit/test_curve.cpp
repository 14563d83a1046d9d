#include <gtest/gtest.h>

#include <cmath>

#include "kva/curve.hpp"
#include "kva/error.hpp"

using kva::DiscountCurve;

TEST(DiscountCurve, UnitAtZero) {
  EXPECT_DOUBLE_EQ(DiscountCurve::flat(0.03).discount(0.0), 1.0);
  const DiscountCurve c({{1.0, 0.01}, {5.0, 0.03}});
  EXPECT_DOUBLE_EQ(c.discount(0.0), 1.0);
}

TEST(DiscountCurve, FlatClosedForm) {
  EXPECT_NEAR(DiscountCurve::flat(0.02).discount(10.0), std::exp(-0.2), 1e-15);
  EXPECT_NEAR(DiscountCurve::flat(0.02).discount(10.0), 0.818731, 1e-6);
}

TEST(DiscountCurve, TwoPillarAgainstHandQuadrature) {
  const DiscountCurve c({{1.0, 0.01}, {5.0, 0.03}});
  // Piecewise-flat forwards: 1% on [0,1], (0.15 - 0.01)/4 on [1,5].
  auto fwd = [](double s) { return s < 1.0 ? 0.01 : 0.035; };
  const int n = 30000;
  double integral = 0.0;
  for (int i = 0; i < n; ++i) integral += fwd(3.0 * (i + 0.5) / n) * 3.0 / n;
  EXPECT_NEAR(c.discount(3.0), std::exp(-integral), 1e-12);
  EXPECT_NEAR(c.discount(3.0), std::exp(-0.08), 1e-12);
}

TEST(DiscountCurve, FlatExtrapolation) {
  const DiscountCurve c({{1.0, 0.01}, {5.0, 0.03}});
  EXPECT_NEAR(c.zero_rate(20.0), 0.03, 1e-15);
  EXPECT_NEAR(c.zero_rate(0.5), 0.01, 1e-15);
  EXPECT_NEAR(c.forward(7.0), 0.03, 1e-15);
}

TEST(DiscountCurve, ForwardIntegratesToLogDiscount) {
  const DiscountCurve c({{0.5, 0.015}, {2.0, 0.02}, {10.0, 0.028}});
  double s = 0.0;
  // cells of 1e-4 so every pillar falls on a cell edge
  const int n = 120000;
  for (int i = 0; i < n; ++i) s += c.forward(12.0 * (i + 0.5) / n) * 12.0 / n;
  EXPECT_NEAR(s, c.log_discount(12.0), 1e-9);
}

TEST(DiscountCurve, ShiftIsParallelInZeroRates) {
  const DiscountCurve c({{1.0, 0.01}, {5.0, 0.03}});
  const auto up = c.shifted(1e-4);
  for (double t : {0.5, 1.0, 3.0, 5.0, 9.0}) EXPECT_NEAR(up.zero_rate(t) - c.zero_rate(t), 1e-4, 1e-14);
}

TEST(DiscountCurve, RejectsBadInput) {
  EXPECT_THROW(DiscountCurve::flat(0.02).discount(-1.0), kva::InputError);
  EXPECT_THROW(DiscountCurve({}), kva::InputError);
  EXPECT_THROW(DiscountCurve({{2.0, 0.01}, {1.0, 0.02}}), kva::InputError);
  EXPECT_THROW(DiscountCurve({{-1.0, 0.01}}), kva::InputError);
  EXPECT_THROW(DiscountCurve({{1.0, NAN}}), kva::InputError);
}
