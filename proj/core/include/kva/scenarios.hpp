#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kva/capital_profile.hpp"
#include "kva/curve.hpp"
#include "kva/exposure.hpp"
#include "kva/regcap.hpp"
#include "kva/short_rate.hpp"
#include "kva/xva.hpp"

namespace kva {

// Flat continuously-compounded zero rate at which a 10y semi-annual swap has
// a par rate of 2.7%.
double default_zero_rate();

struct MarketEnvironment {
  DiscountCurve curve = DiscountCurve::flat(default_zero_rate());
  double mean_reversion = 0.05;
  double volatility = 0.01;
  std::uint64_t seed = 20160101;
  IssuerParams issuer;

  HullWhiteModel model() const { return HullWhiteModel(curve, mean_reversion, volatility); }
};

inline constexpr double kBasisPoint = 1e-4;

// ---------------------------------------------------------- Portfolio

struct PricingConfig {
  CapitalConfig capital;
  CapitalOptions capital_options;
  ExposureOptions exposure;
  std::size_t n_paths = 10000;
  int grid_months = 1;
};

struct NettingSetResult {
  NettingSet set;
  ExposureProfile exposure;
  CapitalProfile capital;  // CCR and CVA capital only
  XvaBreakdown xva;
};

struct PortfolioResult {
  std::vector<NettingSetResult> sets;
  CapitalProfile market_risk;   // whole-portfolio ladder
  XvaBreakdown market_risk_xva;  // its KVA, discounted at the issuer hazard only
  XvaBreakdown total;
  double value = 0.0;  // risk-free value today
  std::vector<double> time_grid;
};

// Exposure, capital and adjustments per netting set, with market-risk
// capital computed on the netted portfolio. Every uncollateralized netting
// set needs a counterparty profile.
PortfolioResult price_portfolio(const std::vector<SwapSpec>& trades,
                                const std::map<std::string, CounterpartyProfile>& counterparties,
                                const MarketEnvironment& env, const PricingConfig& cfg);

// Central +-1bp difference of V (+ U when `with_adjustments`) in currency
// per bp. Paths use the same seed on every curve.
double portfolio_ir01(const std::vector<SwapSpec>& trades,
                      const std::map<std::string, CounterpartyProfile>& counterparties,
                      const MarketEnvironment& env, const PricingConfig& cfg, bool with_adjustments);

// ---------------------------------------------------------- Scenarios

enum class ScenarioKind { Naked, BackToBack, Ir01Flat };

ScenarioKind parse_scenario_kind(const std::string& name);
std::string to_string(ScenarioKind kind);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Naked;
  SwapSpec trade;             // direction and counterparty are set per row
  bool par_fixed_rate = true; // replace trade.fixed_rate by the par rate
  std::vector<double> phis = {0.0, 1.0};
  std::vector<SwapDirection> directions = {SwapDirection::PayerFixed, SwapDirection::ReceiverFixed};
  std::vector<CounterpartyProfile> ratings;
  PricingConfig pricing;
  bool adjustments = true;
  double hedge_bracket_lo = 0.0, hedge_bracket_hi = 3.0;
};

void validate(const ScenarioConfig& cfg);

struct ScenarioRow {
  double phi;
  SwapDirection direction;
  std::string rating;
  XvaBreakdown xva;       // bp of notional
  double ir01_bp;         // bp of notional per bp
  double hedge_multiplier = 1.0;
  double hedge_change_pct = 0.0;
};

// Rows ordered by direction, then phi, then rating.
std::vector<ScenarioRow> run_scenario(const ScenarioConfig& cfg, const MarketEnvironment& env);

// Root of total_ir01(m) on [lo, hi]; throws NumericalError without a sign
// change.
double solve_ir01_flat_notional(const std::function<double(double)>& total_ir01, double lo, double hi);

// phi, swap, rating, cva_bp, dva_bp, fca_bp, kva_mr_bp, kva_ccr_bp,
// kva_cva_bp, total_bp, ir01_bp [, hedge_change_pct]. FCA and KVA use the
// grouping with the capital-funding offset inside KVA.
std::string scenario_csv(const std::vector<ScenarioRow>& rows, ScenarioKind kind);

}  // namespace kva
