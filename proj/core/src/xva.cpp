#include "kva/xva.hpp"

#include <algorithm>
#include <cmath>

#include "kva/error.hpp"

namespace kva {

namespace {
constexpr const char* kModule = "xva_engine";

void check_grid(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InputError(kModule, "grid mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-9) throw InputError(kModule, "grid mismatch");
}
}  // namespace

void validate(const IssuerParams& issuer) {
  if (!(issuer.funding_spread >= 0.0)) throw InputError(kModule, "issuer funding spread must be >= 0");
  if (!(issuer.recovery >= 0.0 && issuer.recovery < 1.0)) throw InputError(kModule, "issuer recovery must be in [0,1)");
  if (!std::isfinite(issuer.collateral_spread)) throw InputError(kModule, "collateral spread must be finite");
}

XvaBreakdown XvaBreakdown::scaled(double f) const {
  XvaBreakdown b = *this;
  for (double* v : {&b.cva, &b.dva, &b.colva, &b.fca, &b.kva, &b.kva_mr, &b.kva_ccr, &b.kva_cva, &b.fca_prime,
                    &b.kva_prime, &b.kva_prime_mr, &b.kva_prime_ccr, &b.kva_prime_cva})
    *v *= f;
  return b;
}

XvaBreakdown& XvaBreakdown::operator+=(const XvaBreakdown& o) {
  cva += o.cva; dva += o.dva; colva += o.colva;
  fca += o.fca; kva += o.kva; kva_mr += o.kva_mr; kva_ccr += o.kva_ccr; kva_cva += o.kva_cva;
  fca_prime += o.fca_prime; kva_prime += o.kva_prime;
  kva_prime_mr += o.kva_prime_mr; kva_prime_ccr += o.kva_prime_ccr; kva_prime_cva += o.kva_prime_cva;
  return *this;
}

double trapezoid(std::span<const double> t, std::span<const double> f) {
  if (t.size() != f.size()) throw InputError(kModule, "grid mismatch");
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return s;
}

XvaBreakdown integrate_xva(const ExposureProfile& exposure, const CapitalProfile& capital,
                           const CounterpartyProfile& cp, const IssuerParams& issuer, const CapitalConfig& cfg,
                           const XvaOptions& options) {
  validate(issuer);
  validate(cfg);
  check_grid(exposure.time_grid, capital.time_grid);
  const auto& t = exposure.time_grid;
  const std::size_t m = t.size();
  if (!options.discounted_collateral.empty() && options.discounted_collateral.size() != m)
    throw InputError(kModule, "grid mismatch");

  const double lambda_b = issuer.hazard_rate();
  const double lambda_c = options.counterparty_hazard >= 0.0 ? options.counterparty_hazard : cp.hazard_rate();
  const double lgd_b = 1.0 - issuer.recovery;
  const double gamma = cfg.cost_of_capital;
  const double phi = cfg.phi;

  std::vector<double> survival(m);
  for (std::size_t i = 0; i < m; ++i) survival[i] = std::exp(-(lambda_b + lambda_c) * t[i]);

  auto integral = [&](auto&& f) {
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = survival[i] * f(i);
    return trapezoid(t, g);
  };

  XvaBreakdown b;
  b.phi = phi;
  b.cva = -(1.0 - cp.recovery) * lambda_c * integral([&](std::size_t i) { return exposure.epe[i]; });
  b.dva = -lgd_b * lambda_b * integral([&](std::size_t i) { return exposure.ene[i]; });
  b.fca_prime = -lgd_b * lambda_b * integral([&](std::size_t i) { return exposure.epe[i]; });
  if (!options.discounted_collateral.empty())
    b.colva = -issuer.collateral_spread *
              integral([&](std::size_t i) { return options.discounted_collateral[i]; });

  double funding_offset = 0.0;  // (1 - R_B) lambda_B phi int S E[D K]
  auto component = [&](const CapitalComponent& c, double& kva, double& kva_prime) {
    const double dk = integral([&](std::size_t i) { return c.discounted[i]; });
    const double drk = integral([&](std::size_t i) { return c.discounted_rate[i]; });
    kva = -(gamma * dk - phi * drk);
    kva_prime = -(gamma * dk - phi * (drk + lgd_b * lambda_b * dk));
    funding_offset += lgd_b * lambda_b * phi * dk;
  };
  component(capital.mr, b.kva_mr, b.kva_prime_mr);
  component(capital.ccr, b.kva_ccr, b.kva_prime_ccr);
  component(capital.cva, b.kva_cva, b.kva_prime_cva);
  b.kva = b.kva_mr + b.kva_ccr + b.kva_cva;
  b.kva_prime = b.kva_prime_mr + b.kva_prime_ccr + b.kva_prime_cva;
  b.fca = b.fca_prime + funding_offset;
  return b;
}

PhiSensitivity phi_sensitivity(const ExposureProfile& exposure, const CapitalProfile& capital,
                               const CounterpartyProfile& cp, const IssuerParams& issuer, const CapitalConfig& cfg,
                               std::span<const double> phis, const XvaOptions& options) {
  if (phis.size() < 2) throw InputError(kModule, "phi sensitivity needs at least two phi values");
  PhiSensitivity out;
  out.phis.assign(phis.begin(), phis.end());
  for (double phi : phis) {
    CapitalConfig c = cfg;
    c.phi = phi;
    out.breakdowns.push_back(integrate_xva(exposure, capital, cp, issuer, c, options));
  }
  const double p0 = phis.front(), p1 = phis.back();
  const double k0 = out.breakdowns.front().kva_prime, k1 = out.breakdowns.back().kva_prime;
  double scale = 0.0, dev = 0.0;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const double line = p1 == p0 ? k0 : k0 + (k1 - k0) * (phis[i] - p0) / (p1 - p0);
    dev = std::max(dev, std::abs(out.breakdowns[i].kva_prime - line));
    scale = std::max(scale, std::abs(out.breakdowns[i].kva_prime));
  }
  out.collinearity_error = scale > 0.0 ? dev / scale : dev;
  return out;
}

}  // namespace kva
