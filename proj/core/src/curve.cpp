#include "kva/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kva/error.hpp"

namespace kva {

namespace {
constexpr const char* kModule = "curve_model";
}

DiscountCurve::DiscountCurve(std::vector<CurvePillar> pillars) : pillars_(std::move(pillars)) {
  if (pillars_.empty()) throw InputError(kModule, "discount curve needs at least one pillar");
  if (pillars_.front().time < 0.0) throw InputError(kModule, "first pillar time must be >= 0");
  for (std::size_t i = 0; i < pillars_.size(); ++i) {
    if (!std::isfinite(pillars_[i].zero_rate) || !std::isfinite(pillars_[i].time))
      throw InputError(kModule, "non-finite curve pillar at index " + std::to_string(i));
    if (i > 0 && pillars_[i].time <= pillars_[i - 1].time)
      throw InputError(kModule, "pillar times must be strictly increasing");
  }
}

DiscountCurve DiscountCurve::flat(double zero_rate) {
  return DiscountCurve({{1.0, zero_rate}});
}

double DiscountCurve::log_discount(double t) const {
  if (t < 0.0) throw InputError(kModule, "negative time " + std::to_string(t));
  if (t == 0.0) return 0.0;
  const auto& p = pillars_;
  // Before the first pillar: straight line from the origin.
  if (t <= p.front().time) return p.front().zero_rate * t;
  if (t >= p.back().time) return p.back().zero_rate * t;
  auto hi = std::upper_bound(p.begin(), p.end(), t,
                             [](double v, const CurvePillar& c) { return v < c.time; });
  auto lo = hi - 1;
  const double y0 = lo->zero_rate * lo->time;
  const double y1 = hi->zero_rate * hi->time;
  const double w = (t - lo->time) / (hi->time - lo->time);
  return y0 + w * (y1 - y0);
}

double DiscountCurve::discount(double t) const { return std::exp(-log_discount(t)); }

double DiscountCurve::zero_rate(double t) const {
  if (t < 0.0) throw InputError(kModule, "negative time " + std::to_string(t));
  if (t == 0.0) return pillars_.front().zero_rate;
  return log_discount(t) / t;
}

double DiscountCurve::forward(double t) const {
  if (t < 0.0) throw InputError(kModule, "negative time " + std::to_string(t));
  const auto& p = pillars_;
  if (t < p.front().time) return p.front().zero_rate;
  if (t >= p.back().time) return p.back().zero_rate;
  auto hi = std::upper_bound(p.begin(), p.end(), t,
                             [](double v, const CurvePillar& c) { return v < c.time; });
  auto lo = hi - 1;
  return (hi->zero_rate * hi->time - lo->zero_rate * lo->time) / (hi->time - lo->time);
}

DiscountCurve DiscountCurve::shifted(double shift) const {
  std::vector<CurvePillar> out = pillars_;
  for (auto& p : out) p.zero_rate += shift;
  return DiscountCurve(std::move(out));
}

}  // namespace kva
