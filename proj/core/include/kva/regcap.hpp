#pragma once

#include <span>
#include <string>
#include <vector>

#include "kva/instruments.hpp"

namespace kva {

struct CounterpartyProfile {
  std::string id;
  std::string rating;
  double cds_spread = 0.0;   // 1/yr
  double recovery = 0.4;
  double ccr_weight = 1.0;   // standardized risk weight
  double cva_weight = 0.0;   // omega
  bool domicile_exempt_cva = false;

  // Zero-recovery hazard rate spread / (1 - R).
  double hazard_rate() const { return cds_spread / (1.0 - recovery); }
};

void validate(const CounterpartyProfile& cp);

struct CapitalConfig {
  double capital_ratio = 0.08;
  double cost_of_capital = 0.10;
  double phi = 0.0;
  double horizon = 1.0;
};

void validate(const CapitalConfig& cfg);

// ----------------------------------------------------------------- IRB

inline constexpr double kPdFloor = 0.0003;

double irb_correlation(double pd);
double irb_maturity_slope(double pd);
// Risk weight w (capital per unit EAD before the 12.5 c scaling). PD is
// floored at 0.03%; M is used as given.
double irb_weight(double pd, double lgd, double maturity);

// ------------------------------------------------------ Effective maturity

struct MaturityNotional {
  double maturity;
  double notional;
};

// min(5, max(1, sum m N / sum N))
double effective_maturity_irb(std::span<const MaturityNotional> trades);
// max(1, sum m N / sum N), no upper cap.
double effective_maturity_cva(std::span<const MaturityNotional> trades);

// Live trades at time t with their residual maturities.
std::vector<MaturityNotional> residual_maturities(std::span<const SwapSpec> trades, double t);

// ----------------------------------------------------------------- CCR

// K = c 12.5 w EAD
double ccr_capital(double ead, double weight, const CapitalConfig& cfg = {});

// ------------------------------------------------------------ CVA capital

// (1 - e^{-0.05 M}) / (0.05 M)
double cva_ead_discount(double maturity);

struct CvaCapitalInput {
  double weight;          // omega
  double maturity;        // M
  double ead;             // undiscounted; discounted internally
  double hedge_maturity = 0.0;
  double hedge_notional = 0.0;  // B, already discounted
};

// 2.33 sqrt(h) sqrt[(sum 0.5 w_i x_i)^2 + sum 0.75 w_i^2 x_i^2] with
// x_i = M_i EAD_i^disc - M_i^hedge B_i.
double cva_capital_std_full(std::span<const CvaCapitalInput> counterparties, double horizon = 1.0);

// Per-counterparty approximation (2.33 / 2) sqrt(h) w M EAD^disc.
double cva_capital_std_large_n(double weight, double maturity, double ead, double horizon = 1.0);

// ----------------------------------------------- Regulatory CVA and CS01

// LGD sum max(0, e^{-s_{i-1} t_{i-1}/LGD} - e^{-s_i t_i/LGD}) (EE_{i-1} D_{i-1} + EE_i D_i) / 2
double regulatory_cva(std::span<const double> spreads, std::span<const double> times, double lgd,
                      std::span<const double> ee, std::span<const double> discount);

// 0.0001 t_i e^{-s_i t_i/LGD} (EE_{i-1} D_{i-1} + EE_{i+1} D_{i+1}) / 2 for an
// interior bucket i.
double regulatory_cs01(std::span<const double> spreads, std::span<const double> times, double lgd,
                       std::span<const double> ee, std::span<const double> discount, std::size_t bucket);

}  // namespace kva
