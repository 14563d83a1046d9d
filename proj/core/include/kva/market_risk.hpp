#pragma once

#include <array>
#include <span>
#include <vector>

#include "kva/instruments.hpp"

namespace kva {

// One interest-rate position on the maturity ladder. Long positions are
// positive (receiving the coupon stream), short negative.
struct LadderPosition {
  double maturity;  // residual maturity or time to next reset, years
  double coupon;    // 1/yr; selects the coupon column of the ladder
  double amount;    // currency units
};

inline constexpr std::size_t kLadderBands = 15;

// Risk weight of every ladder row. Coupons of 3% or more use the first 13
// rows only, with wider bands.
inline constexpr std::array<double, kLadderBands> kLadderWeights = {
    0.0, 0.002, 0.004, 0.007, 0.0125, 0.0175, 0.0225, 0.0275,
    0.0325, 0.0375, 0.045, 0.0525, 0.06, 0.08, 0.125};

// Row of the ladder for a position. Bands are closed below and open above.
std::size_t ladder_band(double maturity, double coupon);
// 0, 1 or 2.
int ladder_zone(std::size_t band);

struct LadderCharge {
  std::array<double, kLadderBands> weighted_long{};
  std::array<double, kLadderBands> weighted_short{};
  double vertical = 0.0;
  double horizontal_within = 0.0;
  double horizontal_between = 0.0;
  double net_open = 0.0;
  double total = 0.0;
};

// Maturity-method charge: 10% vertical disallowance per band, 40%/30%/30%
// within zones 1/2/3, 40% between adjacent zones (1-2 first, then 2-3),
// 100% between zones 1 and 3, plus the net open position.
LadderCharge maturity_method(std::span<const LadderPosition> positions);

// Offsets positions that match exactly before slotting: coupons within 15bp
// and residual maturities within the same day (under one month), 7 days
// (under one year) or 30 days (beyond). Amounts of matched positions are
// summed into the first of them.
std::vector<LadderPosition> offset_matched(std::span<const LadderPosition> positions);

// Ladder positions of a swap at time t: the fixed leg as a bond of the
// residual maturity and the floating leg as a bond maturing at the next
// reset. Empty at or after maturity.
std::vector<LadderPosition> swap_ladder_positions(const SwapPricer& pricer, double t);

// Times in (0, maturity) at which one of the swap's ladder positions moves
// to a lower band.
std::vector<double> ladder_band_changes(const SwapSpec& spec);

// Standardized market-risk capital of a trade set at time t, with exact-match
// offsetting applied first.
double market_risk_std(std::span<const SwapSpec> trades, double t);

}  // namespace kva
