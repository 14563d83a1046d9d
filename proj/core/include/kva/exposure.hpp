#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kva/instruments.hpp"
#include "kva/short_rate.hpp"

namespace kva {

// Trades facing one counterparty under one netting agreement. A perfect-CSA
// netting set (every trade collateralized) carries no exposure or EAD.
struct NettingSet {
  std::string counterparty_id;
  std::vector<SwapSpec> trades;
  bool perfect_csa = false;
};

// Groups trades by counterparty, preserving first-appearance order.
std::vector<NettingSet> group_netting_sets(std::span<const SwapSpec> trades);

// ---------------------------------------------------------------- CEM

struct CemTrade {
  double value;
  double notional;
  double residual_maturity;
};

// Interest-rate add-on factor: 0 up to 1y, 0.5% over 1y to 5y, 1.5% beyond.
double cem_addon_rate(double residual_maturity);

struct CemResult {
  double gross_addon = 0.0;
  double ngr = 1.0;
  double net_addon = 0.0;
  double replacement_cost = 0.0;
  double ead = 0.0;
};

// EAD = RC + A_net with A_net = (0.4 + 0.6 NGR) A_gross and
// NGR = (sum V)^+ / sum V^+. NGR is 1 when the gross replacement cost is
// zero. With floor_replacement_cost the replacement cost is (sum V)^+,
// otherwise sum V. Trades with zero residual maturity are ignored.
CemResult ead_cem(std::span<const CemTrade> trades, bool floor_replacement_cost = true);

// ------------------------------------------------------- Standardized

enum class SpecificRisk { High, LowReferenceCds, Other };

// Supervisory credit conversion factor: 0.6%, 0.3%, 0.2%.
double credit_conversion_factor(SpecificRisk risk);

struct RiskPosition {
  std::string hedging_set;
  double amount;  // long positive, short negative
};

struct StandardizedInputs {
  std::vector<double> transaction_values;
  std::vector<double> collateral_values;
  std::vector<RiskPosition> transaction_risk;
  std::vector<RiskPosition> collateral_risk;
  // CCF by hedging set. Every referenced hedging set must be present.
  std::map<std::string, double> ccf;
};

inline constexpr double kStandardizedBeta = 1.4;

double ead_standardized(const StandardizedInputs& in);

// Interest-rate hedging sets by residual maturity / time to reset.
std::string ir_hedging_set(double maturity);
std::map<std::string, double> default_ir_ccf();

// Risk positions of one swap: the fixed leg (notional x fixed-leg duration)
// and the floating leg (notional x time to next fixing). Receiving a leg is
// a long position.
std::vector<RiskPosition> swap_risk_positions(const SwapPricer& pricer, double t, double fixed_duration);

// ----------------------------------------------------------------- IMM

inline constexpr double kImmAlpha = 1.4;

// Effective EPE over min(1y, maturity): time-weighted average of the
// running maximum of EE. `times` are t_1 < t_2 < ... (t_0 = 0 implied),
// `ee[k]` the expected exposure at times[k].
double effective_epe(std::span<const double> times, std::span<const double> ee, double maturity);

// alpha x Effective EPE
double ead_imm(std::span<const double> times, std::span<const double> ee, double maturity);

// ------------------------------------------------------------- Profile

struct ExposureOptions {
  bool cem_floor = true;
  bool standardized = true;
  std::map<std::string, double> ccf = default_ir_ccf();
};

// Monte Carlo expectations on the profile grid, in currency units. D is the
// bank-account discount, r the short rate.
struct ExposureProfile {
  std::vector<double> time_grid;
  std::size_t n_paths = 0;
  std::vector<double> epe;                 // E[D V^+]
  std::vector<double> ene;                 // E[D V^-]
  std::vector<double> undiscounted_ee;     // E[V^+]
  std::vector<double> discounted_value;    // E[D V]
  std::vector<double> ead_cem;             // E[EAD_CEM]
  std::vector<double> discounted_ead_cem;  // E[D EAD_CEM]
  std::vector<double> discounted_rate_ead_cem;  // E[D r EAD_CEM]
  std::vector<double> ead_std;             // E[EAD_std]
  std::vector<double> ead_imm;             // alpha x Effective EPE of EE on (t, t+1y]
  std::vector<double> epe_stderr;
  std::vector<double> ene_stderr;
  std::vector<double> ead_cem_stderr;

  static ExposureProfile zeros(std::vector<double> grid, std::size_t n_paths);
};

// Simulates `n_paths` paths of `model` on `path_grid` and aggregates the
// netting set on `profile_grid` (a subset of `path_grid`). Deterministic for a
// fixed seed regardless of worker count.
ExposureProfile build_profile(const NettingSet& set, const HullWhiteModel& model,
                              std::span<const double> path_grid, std::span<const double> profile_grid,
                              std::size_t n_paths, std::uint64_t seed, const ExposureOptions& options = {});

// Same aggregation over an existing PathSet.
ExposureProfile build_profile(const NettingSet& set, const HullWhiteModel& model, const PathSet& paths,
                              std::span<const double> profile_grid, const ExposureOptions& options = {});

// Monthly (or `months`-step) grid to `horizon` merged with every floating
// fixing of `trades`, plus a node 1e-6y beside each date where a value or
// capital charge jumps (payments, add-on buckets, ladder band edges).
std::vector<double> simulation_grid(std::span<const SwapSpec> trades, double horizon, int months);

// CSV with columns time, epe, ene, eadCEM, eadStd, eadIMM, epe_stderr,
// ene_stderr, eadCEM_stderr.
std::string profile_csv(const ExposureProfile& profile);

}  // namespace kva
