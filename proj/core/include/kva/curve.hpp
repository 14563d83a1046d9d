#pragma once

#include <utility>
#include <vector>

namespace kva {

struct CurvePillar {
  double time;       // years
  double zero_rate;  // continuously compounded, 1/yr
};

// Zero curve with log-linear discount factor interpolation (linear in
// zero_rate * time), i.e. piecewise-flat instantaneous forwards. Before the
// first pillar the first zero rate applies; beyond the last pillar the last
// zero rate is held flat.
class DiscountCurve {
 public:
  explicit DiscountCurve(std::vector<CurvePillar> pillars);

  static DiscountCurve flat(double zero_rate);

  double discount(double t) const;
  double zero_rate(double t) const;
  // Instantaneous forward f(0,t), right-continuous at pillars.
  double forward(double t) const;
  // ∫_0^t f(0,s) ds = -ln P(0,t)
  double log_discount(double t) const;

  // Parallel shift of every zero rate by `shift` (1/yr).
  DiscountCurve shifted(double shift) const;

  const std::vector<CurvePillar>& pillars() const { return pillars_; }

 private:
  std::vector<CurvePillar> pillars_;
};

}  // namespace kva
