#include <gtest/gtest.h>

#include <cmath>

#include "kva/error.hpp"
#include "kva/scenarios.hpp"
#include "kva/xva.hpp"
#include "oracles.hpp"

using namespace kva;

namespace {
constexpr double kRate = 0.03;
constexpr double kEpe = 2.0, kEne = -1.5, kK = 0.8, kMr = 0.3;
constexpr int kSteps = 120;

// Flat short rate: every profile is a constant times e^{-r t}.
struct ConstantBook {
  ExposureProfile ex;
  CapitalProfile cap;
  ConstantBook() {
    std::vector<double> g;
    for (int i = 0; i <= kSteps; ++i) g.push_back(10.0 * i / kSteps);
    ex = ExposureProfile::zeros(g, 1);
    cap = CapitalProfile::zeros(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double d = std::exp(-kRate * g[i]);
      ex.epe[i] = kEpe * d;
      ex.ene[i] = kEne * d;
      ex.discounted_value[i] = (kEpe + kEne) * d;
      cap.ccr.expected[i] = kK;
      cap.ccr.discounted[i] = kK * d;
      cap.ccr.discounted_rate[i] = kRate * kK * d;
      cap.mr.expected[i] = kMr;
      cap.mr.discounted[i] = kMr * d;
      cap.mr.discounted_rate[i] = kRate * kMr * d;
    }
  }
};

CounterpartyProfile bb() { return {"cp", "BB", 0.025, 0.4, 1.0, 0.02}; }
}  // namespace

TEST(Xva, DegenerateIntensities) {
  const ConstantBook b;
  CapitalConfig cfg;
  auto cp = bb();
  cp.cds_spread = 0.0;
  EXPECT_EQ(integrate_xva(b.ex, b.cap, cp, IssuerParams{}, cfg).cva, 0.0);

  IssuerParams flat{};
  flat.funding_spread = 0.0;
  cfg.phi = 1.0;
  const auto r = integrate_xva(b.ex, b.cap, bb(), flat, cfg);
  EXPECT_EQ(r.dva, 0.0);
  EXPECT_EQ(r.fca, 0.0);
  EXPECT_EQ(r.fca_prime, 0.0);
  EXPECT_EQ(r.colva, 0.0);

  cfg.phi = 0.0;
  cfg.cost_of_capital = 0.0;
  const auto z = integrate_xva(b.ex, b.cap, bb(), IssuerParams{}, cfg);
  EXPECT_EQ(z.kva, 0.0);
  EXPECT_EQ(z.kva_prime, 0.0);
}

TEST(Xva, ConstantProfilesClosedForm) {
  const ConstantBook b;
  const IssuerParams iss{};
  const auto cp = bb();
  for (double phi : {0.0, 0.4, 1.0}) {
    CapitalConfig cfg;
    cfg.phi = phi;
    const auto r = integrate_xva(b.ex, b.cap, cp, iss, cfg);
    const double lb = iss.funding_spread / 0.6, lc = cp.cds_spread / 0.6;
    const double k = kRate + lb + lc;
    const double unit = oracle::trapezoid_exp(1.0, k, 10.0, kSteps);
    const double rel = 1e-8;
    auto near = [&](double a, double e) { EXPECT_NEAR(a, e, rel * std::max(1.0, std::abs(e))); };
    near(r.cva, -0.6 * lc * kEpe * unit);
    near(r.dva, -0.6 * lb * kEne * unit);
    near(r.fca_prime, -0.6 * lb * kEpe * unit);
    near(r.kva_ccr, -(0.1 - phi * kRate) * kK * unit);
    near(r.kva_mr, -(0.1 - phi * kRate) * kMr * unit);
    near(r.kva_prime_ccr, -(0.1 - phi * (kRate + 0.6 * lb)) * kK * unit);
    near(r.fca, -0.6 * lb * (kEpe - phi * (kK + kMr)) * unit);
    // the continuous integral is within monthly quadrature error
    const double exact = (1.0 - std::exp(-k * 10.0)) / k;
    EXPECT_NEAR(unit, exact, 1e-5 * exact);
  }
}

TEST(Xva, RegroupingIdentity) {
  const ConstantBook b;
  for (double phi : {0.0, 0.3, 1.0}) {
    CapitalConfig cfg;
    cfg.phi = phi;
    const auto r = integrate_xva(b.ex, b.cap, bb(), IssuerParams{}, cfg);
    EXPECT_NEAR(r.fca + r.kva, r.fca_prime + r.kva_prime, 1e-12 * std::abs(r.fca + r.kva));
    EXPECT_NEAR(r.total(), r.total_prime(), 1e-12 * std::abs(r.total()));
    EXPECT_NEAR(r.kva, r.kva_mr + r.kva_ccr + r.kva_cva, 1e-15);
  }
}

TEST(Xva, KvaPrimeVanishesAtBondRate) {
  const ConstantBook b;
  IssuerParams iss{};
  CapitalConfig cfg;
  cfg.phi = 1.0;
  cfg.cost_of_capital = kRate + iss.funding_spread;  // r_B = r + (1 - R_B) lambda_B
  const auto r = integrate_xva(b.ex, b.cap, bb(), iss, cfg);
  EXPECT_NEAR(r.kva_prime, 0.0, 1e-14);
  EXPECT_LT(r.kva, 0.0);
}

TEST(Xva, AffineInPhi) {
  const ConstantBook b;
  const std::vector<double> phis = {0.0, 0.5, 1.0};
  const auto s = phi_sensitivity(b.ex, b.cap, bb(), IssuerParams{}, CapitalConfig{}, phis);
  ASSERT_EQ(s.breakdowns.size(), 3u);
  EXPECT_NEAR(s.breakdowns[1].kva_prime, 0.5 * (s.breakdowns[0].kva_prime + s.breakdowns[2].kva_prime), 1e-10);
  EXPECT_LT(s.collinearity_error, 1e-12);
  EXPECT_THROW(phi_sensitivity(b.ex, b.cap, bb(), IssuerParams{}, CapitalConfig{}, {phis.data(), 1}), InputError);
}

TEST(Xva, SignsAndZeroNotional) {
  const ConstantBook b;
  const auto r = integrate_xva(b.ex, b.cap, bb(), IssuerParams{}, CapitalConfig{});
  EXPECT_LE(r.cva, 0.0);
  EXPECT_GE(r.dva, 0.0);
  EXPECT_LE(r.fca, 0.0);
  EXPECT_LE(r.kva, 0.0);
  const auto zero = integrate_xva(ExposureProfile::zeros(b.ex.time_grid, 1), CapitalProfile::zeros(b.ex.time_grid),
                                  bb(), IssuerParams{}, CapitalConfig{});
  EXPECT_EQ(zero.total(), 0.0);
}

TEST(Xva, CollateralSpread) {
  const ConstantBook b;
  IssuerParams iss{};
  iss.collateral_spread = 0.002;
  XvaOptions opt;
  opt.discounted_collateral.assign(b.ex.time_grid.size(), 0.0);
  EXPECT_EQ(integrate_xva(b.ex, b.cap, bb(), iss, CapitalConfig{}, opt).colva, 0.0);
  opt.discounted_collateral = b.ex.epe;
  const auto r = integrate_xva(b.ex, b.cap, bb(), iss, CapitalConfig{}, opt);
  const double k = kRate + iss.hazard_rate() + bb().hazard_rate();
  EXPECT_NEAR(r.colva, -0.002 * kEpe * oracle::trapezoid_exp(1.0, k, 10.0, kSteps), 1e-14);
}

TEST(Xva, InputErrors) {
  const ConstantBook b;
  CapitalConfig cfg;
  cfg.phi = 1.2;
  EXPECT_THROW(integrate_xva(b.ex, b.cap, bb(), IssuerParams{}, cfg), InputError);
  auto cap = CapitalProfile::zeros({0.0, 1.0});
  EXPECT_THROW(integrate_xva(b.ex, cap, bb(), IssuerParams{}, CapitalConfig{}), InputError);
  IssuerParams iss{};
  iss.recovery = 1.0;
  EXPECT_THROW(integrate_xva(b.ex, b.cap, bb(), iss, CapitalConfig{}), InputError);
}

TEST(Xva, SpreadInterpretation) {
  IssuerParams iss{};
  EXPECT_NEAR(iss.hazard_rate(), 0.01 / 0.6, 1e-15);
  EXPECT_NEAR((1.0 - iss.recovery) * iss.hazard_rate(), iss.funding_spread, 1e-15);
  iss.spread_is_lambda = true;
  EXPECT_EQ(iss.hazard_rate(), 0.01);
}

TEST(Xva, QuadratureHalvingBelowHalfBasisPoint) {
  const auto curve = DiscountCurve::flat(default_zero_rate());
  const HullWhiteModel m(curve, 0.05, 0.01);
  SwapSpec s;
  s.counterparty_id = "cp";
  s.maturity = 10.0;
  s.fixed_frequency = 2;
  s.float_frequency = 4;
  s.fixed_rate = par_rate(curve, s);
  const NettingSet set{"cp", {s}, false};
  const auto fine = simulation_grid(set.trades, 10.0, 1);
  const auto coarse = simulation_grid(set.trades, 10.0, 2);

  const auto cp = bb();
  auto run = [&](const std::vector<double>& g) {
    const auto ex = build_profile(set, m, fine, g, 4000, 77);
    const auto cap = build_capital_profile(ex, set, cp, CapitalConfig{}, curve);
    return integrate_xva(ex, cap, cp, IssuerParams{}, CapitalConfig{}).scaled(1e4);
  };
  const auto a = run(fine), b = run(coarse);
  const char* names[] = {"cva", "dva", "fca", "kva_mr", "kva_ccr", "kva_cva"};
  const double fa[] = {a.cva, a.dva, a.fca, a.kva_mr, a.kva_ccr, a.kva_cva};
  const double fb[] = {b.cva, b.dva, b.fca, b.kva_mr, b.kva_ccr, b.kva_cva};
  for (int i = 0; i < 6; ++i) EXPECT_LT(std::abs(fa[i] - fb[i]), 0.5) << names[i] << " " << fa[i] << " " << fb[i];
}
