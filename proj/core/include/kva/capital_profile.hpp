#pragma once

#include <span>
#include <vector>

#include "kva/curve.hpp"
#include "kva/exposure.hpp"
#include "kva/regcap.hpp"

namespace kva {

// Expected capital per component on a time grid. For each component the
// profile holds E[K], E[D K] and E[D r K], which is what the KVA integrals
// need when the short rate is stochastic.
struct CapitalComponent {
  std::vector<double> expected;
  std::vector<double> discounted;
  std::vector<double> discounted_rate;
};

struct CapitalProfile {
  std::vector<double> time_grid;
  CapitalComponent mr, ccr, cva;

  std::vector<double> total() const;
  std::vector<double> discounted_total() const;
  std::vector<double> discounted_rate_total() const;

  static CapitalProfile zeros(std::vector<double> grid);
  // Pointwise sum. Grids must match.
  CapitalProfile& operator+=(const CapitalProfile& other);
};

enum class EadMethod { Cem, Imm };

struct CapitalOptions {
  EadMethod ead = EadMethod::Cem;
  bool include_market_risk = true;
};

// CCR and CVA capital of one netting set from its exposure profile, plus the
// market-risk charge of the set's own trades unless disabled. Market-risk
// capital is deterministic; its discounted moments use the initial curve.
CapitalProfile build_capital_profile(const ExposureProfile& exposure, const NettingSet& set,
                                     const CounterpartyProfile& counterparty, const CapitalConfig& cfg,
                                     const DiscountCurve& curve, const CapitalOptions& options = {});

// Market-risk capital of a whole trade set on `grid`.
CapitalProfile market_risk_profile(std::span<const SwapSpec> trades, std::span<const double> grid,
                                   const DiscountCurve& curve);

// time, kMR, kCCR, kCVA, kTotal
std::string capital_csv(const CapitalProfile& profile);

}  // namespace kva
