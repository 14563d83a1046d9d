#include "kva/market_risk.hpp"

#include <algorithm>
#include <cmath>

#include "kva/error.hpp"

namespace kva {

namespace {
constexpr const char* kModule = "regcap";

// Upper band edges in years.
constexpr std::array<double, 14> kLowCouponEdges = {1.0 / 12, 0.25, 0.5, 1.0, 1.9, 2.8, 3.6,
                                                    4.3, 5.7, 7.3, 9.3, 10.6, 12.0, 20.0};
constexpr std::array<double, 12> kHighCouponEdges = {1.0 / 12, 0.25, 0.5, 1.0, 2.0, 3.0,
                                                     4.0, 5.0, 7.0, 10.0, 15.0, 20.0};
constexpr double kEdgeTol = 1e-9;
constexpr double kDay = 1.0 / 365.0;

template <std::size_t N>
std::size_t band_of(double m, const std::array<double, N>& edges) {
  for (std::size_t i = 0; i < N; ++i)
    if (m < edges[i] - kEdgeTol) return i;
  return N;
}

double maturity_tolerance(double m) {
  if (m < 1.0 / 12) return 0.5 * kDay;
  if (m < 1.0) return 7.0 * kDay;
  return 30.0 * kDay;
}

// Offsets long against short and returns {matched, net}.
std::pair<double, double> match(double l, double s) { return {std::min(l, s), l - s}; }
}  // namespace

std::size_t ladder_band(double maturity, double coupon) {
  if (!std::isfinite(maturity) || maturity < 0.0 || !std::isfinite(coupon))
    throw InputError(kModule, "unknown band mapping for maturity " + std::to_string(maturity));
  return coupon >= 0.03 ? band_of(maturity, kHighCouponEdges) : band_of(maturity, kLowCouponEdges);
}

int ladder_zone(std::size_t band) {
  if (band >= kLadderBands) throw InputError(kModule, "unknown band " + std::to_string(band));
  if (band <= 3) return 0;
  if (band <= 6) return 1;
  return 2;
}

LadderCharge maturity_method(std::span<const LadderPosition> positions) {
  LadderCharge c;
  for (const auto& p : positions) {
    const std::size_t b = ladder_band(p.maturity, p.coupon);
    const double w = kLadderWeights[b] * std::abs(p.amount);
    (p.amount >= 0.0 ? c.weighted_long[b] : c.weighted_short[b]) += w;
  }

  std::array<double, 3> zone_long{}, zone_short{};
  for (std::size_t b = 0; b < kLadderBands; ++b) {
    const auto [matched, net] = match(c.weighted_long[b], c.weighted_short[b]);
    c.vertical += 0.10 * matched;
    const int z = ladder_zone(b);
    if (net > 0.0) zone_long[z] += net;
    else zone_short[z] -= net;
  }

  constexpr std::array<double, 3> kWithin = {0.40, 0.30, 0.30};
  std::array<double, 3> zone_net{};
  for (int z = 0; z < 3; ++z) {
    const auto [matched, net] = match(zone_long[z], zone_short[z]);
    c.horizontal_within += kWithin[z] * matched;
    zone_net[z] = net;
  }

  auto between = [&](int a, int b, double rate) {
    if (zone_net[a] * zone_net[b] >= 0.0) return;
    const double matched = std::min(std::abs(zone_net[a]), std::abs(zone_net[b]));
    c.horizontal_between += rate * matched;
    zone_net[a] -= std::copysign(matched, zone_net[a]);
    zone_net[b] -= std::copysign(matched, zone_net[b]);
  };
  between(0, 1, 0.40);
  between(1, 2, 0.40);
  between(0, 2, 1.00);

  c.net_open = std::abs(zone_net[0] + zone_net[1] + zone_net[2]);
  c.total = c.vertical + c.horizontal_within + c.horizontal_between + c.net_open;
  return c;
}

std::vector<LadderPosition> offset_matched(std::span<const LadderPosition> positions) {
  std::vector<LadderPosition> out;
  for (const auto& p : positions) {
    auto it = std::find_if(out.begin(), out.end(), [&](const LadderPosition& q) {
      return std::abs(q.coupon - p.coupon) <= 0.0015 + 1e-12 &&
             std::abs(q.maturity - p.maturity) <= maturity_tolerance(std::min(p.maturity, q.maturity)) + 1e-12;
    });
    if (it == out.end()) out.push_back(p);
    else it->amount += p.amount;
  }
  std::erase_if(out, [](const LadderPosition& p) { return p.amount == 0.0; });
  return out;
}

std::vector<LadderPosition> swap_ladder_positions(const SwapPricer& pricer, double t) {
  const double residual = pricer.residual_maturity(t);
  if (residual <= 0.0) return {};
  const auto& s = pricer.spec();
  const double sign = direction_sign(s.direction);
  return {{residual, s.fixed_rate, -sign * s.notional},
          {pricer.time_to_next_fixing(t), s.fixed_rate, sign * s.notional}};
}

std::vector<double> ladder_band_changes(const SwapSpec& spec) {
  std::vector<double> out;
  auto add_edges = [&](auto const& edges, double end, double span) {
    for (double e : edges)
      if (e < span - kEdgeTol && end - e > kEdgeTol) out.push_back(end - e);
  };
  const bool high = spec.fixed_rate >= 0.03;
  auto both = [&](double end, double span) {
    if (high) add_edges(kHighCouponEdges, end, span);
    else add_edges(kLowCouponEdges, end, span);
  };
  both(spec.maturity, spec.maturity);
  // the floating leg runs down to each reset in turn
  double prev = 0.0;
  for (const auto& p : make_schedule(spec).floating) {
    if (p.fixing > kEdgeTol) {
      both(p.fixing, p.fixing - prev);
      prev = p.fixing;
    }
  }
  both(spec.maturity, spec.maturity - prev);
  std::sort(out.begin(), out.end());
  return out;
}

double market_risk_std(std::span<const SwapSpec> trades, double t) {
  std::vector<LadderPosition> all;
  for (const auto& trade : trades) {
    const auto legs = swap_ladder_positions(SwapPricer(trade), t);
    all.insert(all.end(), legs.begin(), legs.end());
  }
  const auto netted = offset_matched(all);
  return maturity_method(netted).total;
}

}  // namespace kva
