#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "kva/curve.hpp"
#include "kva/short_rate.hpp"

namespace kva {

enum class SwapDirection { PayerFixed, ReceiverFixed };

// +1 for payer-fixed (receives floating), -1 for receiver-fixed.
inline double direction_sign(SwapDirection d) { return d == SwapDirection::PayerFixed ? 1.0 : -1.0; }

struct SwapSpec {
  std::string id;
  std::string counterparty_id;
  double notional = 1.0;
  double fixed_rate = 0.0;
  double maturity = 1.0;     // years from today
  int fixed_frequency = 2;   // payments per year
  int float_frequency = 2;   // resets per year
  SwapDirection direction = SwapDirection::PayerFixed;
  bool collateralized = false;
};

void validate(const SwapSpec& spec);

// The same trade with the opposite direction.
SwapSpec mirror(const SwapSpec& spec);

struct FixedPeriod {
  double start, end, accrual;
};

struct FloatPeriod {
  double fixing, start, end, accrual;
};

// ACT/365F year fractions; periods generated backward from maturity so any
// stub sits at the front.
struct Schedule {
  std::vector<FixedPeriod> fixed;
  std::vector<FloatPeriod> floating;
};

Schedule make_schedule(const SwapSpec& spec);

// Fixed rate that sets today's value of `spec` to zero on `curve`.
double par_rate(const DiscountCurve& curve, const SwapSpec& spec);

// Risk-free swap valuation. Values are from the issuer's side: a payer-fixed
// swap gains when rates rise.
class SwapPricer {
 public:
  explicit SwapPricer(SwapSpec spec);

  const SwapSpec& spec() const { return spec_; }
  const Schedule& schedule() const { return schedule_; }

  double residual_maturity(double t) const { return std::max(0.0, spec_.maturity - t); }

  // Index of the floating period accruing at t (start <= t < end), or -1 at
  // or after maturity.
  int float_period_at(double t) const;
  // Time until the next floating fixing strictly after t, or the residual
  // maturity if no fixing remains.
  double time_to_next_fixing(double t) const;

  // Value at time t given the model state x(t) and P(fixing, end) observed
  // for the floating period accruing at t.
  double value(const HullWhiteModel& model, double t, double x, double fixing_bond) const;
  // Value today on the model's initial curve.
  double value_today(const DiscountCurve& curve) const;
  // Deterministic value at t when the curve's forwards are realised
  // (the sigma = 0 limit).
  double forward_value(const DiscountCurve& curve, double t) const;

  // Continuous-compounding duration of the fixed leg viewed as a bullet bond
  // (coupons plus notional) at state x(t).
  double fixed_leg_duration(const HullWhiteModel& model, double t, double x) const;

 private:
  SwapSpec spec_;
  Schedule schedule_;
};

// Values one trade along simulated paths. Bond coefficients for every grid
// date and remaining payment are precomputed, so per-path work is one
// exponential per cash flow.
class PathValuer {
 public:
  PathValuer(const SwapPricer& pricer, const HullWhiteModel& model, std::span<const double> grid);

  // values[k] = V(t_k) along one path with states x[k]. Every floating fixing
  // before maturity must lie on the grid. If `fixed_duration` is non-empty it
  // receives the fixed-leg bullet-bond duration at each t_k.
  void value_path(std::span<const double> states, std::span<double> values,
                  std::span<double> fixed_duration = {}) const;

  const SwapPricer& pricer() const { return pricer_; }

 private:
  struct Term {
    double weight;  // signed cash amount
    double log_a;   // HullWhiteModel::log_bond_intercept(t, T)
    double b;
    double tenor;   // T - t
    double accrual; // fixed-coupon terms only
  };
  const SwapPricer& pricer_;
  std::vector<double> grid_;
  // For each grid point: fixed-coupon and terminal terms, floating pieces.
  std::vector<std::vector<Term>> fixed_terms_;
  std::vector<Term> terminal_;        // P(t,T)
  std::vector<Term> current_end_;     // P(t, end of current float period)
  std::vector<int> current_period_;   // float period accruing at t_k
  std::vector<int> fixing_period_;    // period whose fixing is at t_k, else -1
};

// Risk-free IR01 of a set of trades: central difference of today's value
// under a +-1bp parallel zero shift, in currency per bp.
double risk_free_ir01(std::span<const SwapSpec> trades, const DiscountCurve& curve);

}  // namespace kva
