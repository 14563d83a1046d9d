#include "kva/capital_profile.hpp"

#include <cmath>
#include <sstream>

#include "kva/error.hpp"
#include "kva/market_risk.hpp"

namespace kva {

namespace {
constexpr const char* kModule = "regcap";

void resize(CapitalComponent& c, std::size_t m) {
  c.expected.assign(m, 0.0);
  c.discounted.assign(m, 0.0);
  c.discounted_rate.assign(m, 0.0);
}

void add(std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

std::vector<double> sum3(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i] + c[i];
  return out;
}

void fill_market_risk(CapitalComponent& mr, std::span<const SwapSpec> trades, std::span<const double> grid,
                      const DiscountCurve& curve) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k = market_risk_std(trades, grid[i]);
    const double p = curve.discount(grid[i]);
    mr.expected[i] = k;
    mr.discounted[i] = k * p;
    mr.discounted_rate[i] = k * curve.forward(grid[i]) * p;
  }
}
}  // namespace

std::vector<double> CapitalProfile::total() const { return sum3(mr.expected, ccr.expected, cva.expected); }
std::vector<double> CapitalProfile::discounted_total() const {
  return sum3(mr.discounted, ccr.discounted, cva.discounted);
}
std::vector<double> CapitalProfile::discounted_rate_total() const {
  return sum3(mr.discounted_rate, ccr.discounted_rate, cva.discounted_rate);
}

CapitalProfile CapitalProfile::zeros(std::vector<double> grid) {
  CapitalProfile p;
  const std::size_t m = grid.size();
  p.time_grid = std::move(grid);
  for (auto* c : {&p.mr, &p.ccr, &p.cva}) resize(*c, m);
  return p;
}

CapitalProfile& CapitalProfile::operator+=(const CapitalProfile& o) {
  if (o.time_grid.size() != time_grid.size()) throw InputError(kModule, "grid mismatch");
  for (std::size_t i = 0; i < time_grid.size(); ++i)
    if (std::abs(o.time_grid[i] - time_grid[i]) > 1e-9) throw InputError(kModule, "grid mismatch");
  for (auto [a, b] : {std::pair{&mr, &o.mr}, std::pair{&ccr, &o.ccr}, std::pair{&cva, &o.cva}}) {
    add(a->expected, b->expected);
    add(a->discounted, b->discounted);
    add(a->discounted_rate, b->discounted_rate);
  }
  return *this;
}

CapitalProfile build_capital_profile(const ExposureProfile& exposure, const NettingSet& set,
                                     const CounterpartyProfile& cp, const CapitalConfig& cfg,
                                     const DiscountCurve& curve, const CapitalOptions& options) {
  validate(cfg);
  const auto& grid = exposure.time_grid;
  CapitalProfile prof = CapitalProfile::zeros(grid);
  if (options.include_market_risk) fill_market_risk(prof.mr, set.trades, grid, curve);
  if (set.perfect_csa) return prof;

  const double k_per_ead = cfg.capital_ratio * 12.5 * cp.ccr_weight;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto live = residual_maturities(set.trades, grid[i]);
    if (live.empty()) continue;
    double e, de, dre;
    if (options.ead == EadMethod::Cem) {
      e = exposure.ead_cem[i];
      de = exposure.discounted_ead_cem[i];
      dre = exposure.discounted_rate_ead_cem[i];
    } else {
      const double p = curve.discount(grid[i]);
      e = exposure.ead_imm[i];
      de = e * p;
      dre = e * curve.forward(grid[i]) * p;
    }
    prof.ccr.expected[i] = k_per_ead * e;
    prof.ccr.discounted[i] = k_per_ead * de;
    prof.ccr.discounted_rate[i] = k_per_ead * dre;

    if (cp.domicile_exempt_cva) continue;
    const double m = effective_maturity_cva(live);
    // The large-N charge is linear in EAD, so it passes through the expectations.
    const double k_cva = cva_capital_std_large_n(cp.cva_weight, m, 1.0, cfg.horizon);
    prof.cva.expected[i] = k_cva * e;
    prof.cva.discounted[i] = k_cva * de;
    prof.cva.discounted_rate[i] = k_cva * dre;
  }
  return prof;
}

CapitalProfile market_risk_profile(std::span<const SwapSpec> trades, std::span<const double> grid,
                                   const DiscountCurve& curve) {
  CapitalProfile prof = CapitalProfile::zeros(std::vector<double>(grid.begin(), grid.end()));
  fill_market_risk(prof.mr, trades, grid, curve);
  return prof;
}

std::string capital_csv(const CapitalProfile& p) {
  std::ostringstream os;
  os.precision(12);
  os << "time,kMR,kCCR,kCVA,kTotal\n";
  const auto total = p.total();
  for (std::size_t i = 0; i < p.time_grid.size(); ++i)
    os << p.time_grid[i] << ',' << p.mr.expected[i] << ',' << p.ccr.expected[i] << ',' << p.cva.expected[i] << ','
       << total[i] << '\n';
  return os.str();
}

}  // namespace kva
