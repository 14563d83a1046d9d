#include "kva/regcap.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "kva/error.hpp"

namespace kva {

namespace {
constexpr const char* kModule = "regcap";

double weighted_maturity(std::span<const MaturityNotional> trades) {
  if (trades.empty()) throw InputError(kModule, "effective maturity of an empty trade set");
  double mn = 0.0, n = 0.0;
  for (const auto& t : trades) {
    mn += t.maturity * t.notional;
    n += t.notional;
  }
  if (!(n > 0.0)) throw InputError(kModule, "zero total notional");
  return mn / n;
}

void check_grids(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  if (a != b || a != c || a != d) throw InputError(kModule, "mismatched grids");
}
}  // namespace

void validate(const CounterpartyProfile& cp) {
  if (!(cp.cds_spread >= 0.0)) throw InputError(kModule, "counterparty '" + cp.id + "': spread must be >= 0");
  if (!(cp.recovery >= 0.0 && cp.recovery < 1.0))
    throw InputError(kModule, "counterparty '" + cp.id + "': recovery must be in [0,1)");
  if (!(cp.ccr_weight > 0.0) || !(cp.cva_weight > 0.0))
    throw InputError(kModule, "counterparty '" + cp.id + "': weights must be positive");
}

void validate(const CapitalConfig& cfg) {
  if (!(cfg.phi >= 0.0 && cfg.phi <= 1.0)) throw InputError(kModule, "phi must be in [0,1]");
  if (!(cfg.capital_ratio > 0.0)) throw InputError(kModule, "capital ratio must be > 0");
  if (!(cfg.cost_of_capital >= 0.0)) throw InputError(kModule, "cost of capital must be >= 0");
  if (!(cfg.horizon > 0.0)) throw InputError(kModule, "capital horizon must be > 0");
}

double irb_correlation(double pd) {
  pd = std::max(pd, kPdFloor);
  const double f = (1.0 - std::exp(-50.0 * pd)) / (1.0 - std::exp(-50.0));
  return 0.12 * f + 0.24 * (1.0 - f);
}

double irb_maturity_slope(double pd) {
  pd = std::max(pd, kPdFloor);
  const double x = 0.11852 - 0.05478 * std::log(pd);
  return x * x;
}

double irb_weight(double pd, double lgd, double maturity) {
  if (!(lgd >= 0.0 && lgd <= 1.0)) throw InputError(kModule, "LGD must be in [0,1]");
  if (!(pd > 0.0 && pd < 1.0)) throw InputError(kModule, "PD must be in (0,1)");
  pd = std::max(pd, kPdFloor);
  const boost::math::normal n;
  const double rho = irb_correlation(pd);
  const double b = irb_maturity_slope(pd);
  const double z = quantile(n, pd) / std::sqrt(1.0 - rho) + quantile(n, 0.999) * std::sqrt(rho / (1.0 - rho));
  return lgd * (cdf(n, z) - pd) * (1.0 + (maturity - 2.5) * b) / (1.0 - 1.5 * b);
}

double effective_maturity_irb(std::span<const MaturityNotional> trades) {
  return std::min(5.0, std::max(1.0, weighted_maturity(trades)));
}

double effective_maturity_cva(std::span<const MaturityNotional> trades) {
  return std::max(1.0, weighted_maturity(trades));
}

std::vector<MaturityNotional> residual_maturities(std::span<const SwapSpec> trades, double t) {
  std::vector<MaturityNotional> out;
  for (const auto& s : trades)
    if (s.maturity > t) out.push_back({s.maturity - t, s.notional});
  return out;
}

double ccr_capital(double ead, double weight, const CapitalConfig& cfg) {
  if (ead < 0.0) throw InputError(kModule, "EAD must be >= 0");
  return cfg.capital_ratio * 12.5 * weight * ead;
}

double cva_ead_discount(double maturity) {
  if (!(maturity > 0.0)) throw InputError(kModule, "CVA maturity must be > 0");
  const double x = 0.05 * maturity;
  return -std::expm1(-x) / x;
}

double cva_capital_std_full(std::span<const CvaCapitalInput> counterparties, double horizon) {
  if (!(horizon > 0.0)) throw InputError(kModule, "horizon must be > 0");
  double systematic = 0.0, idiosyncratic = 0.0;
  for (const auto& c : counterparties) {
    if (c.ead < 0.0) throw InputError(kModule, "EAD must be >= 0");
    const double x = c.maturity * c.ead * cva_ead_discount(c.maturity) - c.hedge_maturity * c.hedge_notional;
    systematic += 0.5 * c.weight * x;
    idiosyncratic += 0.75 * c.weight * c.weight * x * x;
  }
  return 2.33 * std::sqrt(horizon) * std::sqrt(systematic * systematic + idiosyncratic);
}

double cva_capital_std_large_n(double weight, double maturity, double ead, double horizon) {
  if (ead < 0.0) throw InputError(kModule, "EAD must be >= 0");
  if (!(horizon > 0.0)) throw InputError(kModule, "horizon must be > 0");
  return 0.5 * 2.33 * std::sqrt(horizon) * weight * maturity * ead * cva_ead_discount(maturity);
}

double regulatory_cva(std::span<const double> s, std::span<const double> t, double lgd,
                      std::span<const double> ee, std::span<const double> d) {
  check_grids(s.size(), t.size(), ee.size(), d.size());
  if (!(lgd > 0.0 && lgd <= 1.0)) throw InputError(kModule, "LGD_MKT must be in (0,1]");
  double sum = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double dp = std::exp(-s[i - 1] * t[i - 1] / lgd) - std::exp(-s[i] * t[i] / lgd);
    sum += std::max(0.0, dp) * 0.5 * (ee[i - 1] * d[i - 1] + ee[i] * d[i]);
  }
  return lgd * sum;
}

double regulatory_cs01(std::span<const double> s, std::span<const double> t, double lgd,
                       std::span<const double> ee, std::span<const double> d, std::size_t i) {
  check_grids(s.size(), t.size(), ee.size(), d.size());
  if (!(lgd > 0.0 && lgd <= 1.0)) throw InputError(kModule, "LGD must be in (0,1]");
  if (i == 0 || i + 1 >= t.size()) throw InputError(kModule, "CS01 bucket must be interior");
  return 1e-4 * t[i] * std::exp(-s[i] * t[i] / lgd) * 0.5 * (ee[i - 1] * d[i - 1] + ee[i + 1] * d[i + 1]);
}

}  // namespace kva
