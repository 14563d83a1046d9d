#pragma once

#include <span>
#include <vector>

#include "kva/capital_profile.hpp"
#include "kva/exposure.hpp"
#include "kva/regcap.hpp"

namespace kva {

struct IssuerParams {
  double funding_spread = 0.01;  // bond spread (1 - R_B) lambda_B, unless spread_is_lambda
  double recovery = 0.4;
  double collateral_spread = 0.0;  // s_X
  bool spread_is_lambda = false;

  double hazard_rate() const { return spread_is_lambda ? funding_spread : funding_spread / (1.0 - recovery); }
};

void validate(const IssuerParams& issuer);

// Adjustments in currency units. Two groupings of the same total: the
// unprimed FCA carries the -phi K funding offset, the primed KVA carries it
// instead, valued at the issuer bond rate r_B = r + (1 - R_B) lambda_B.
struct XvaBreakdown {
  double phi = 0.0;
  double cva = 0.0, dva = 0.0, colva = 0.0;
  double fca = 0.0, kva = 0.0, kva_mr = 0.0, kva_ccr = 0.0, kva_cva = 0.0;
  double fca_prime = 0.0, kva_prime = 0.0, kva_prime_mr = 0.0, kva_prime_ccr = 0.0, kva_prime_cva = 0.0;

  double total() const { return cva + dva + fca + colva + kva; }
  double total_prime() const { return cva + dva + fca_prime + colva + kva_prime; }
  XvaBreakdown scaled(double factor) const;
  XvaBreakdown& operator+=(const XvaBreakdown& other);
};

struct XvaOptions {
  // E[D X] on the profile grid; empty means no collateral.
  std::vector<double> discounted_collateral;
  // Counterparty hazard rate used for survival discounting; negative means
  // take it from the counterparty profile.
  double counterparty_hazard = -1.0;
};

// Trapezoidal quadrature of the adjustment integrals on the common profile
// grid with survival factor e^{-(lambda_B + lambda_C) u}.
XvaBreakdown integrate_xva(const ExposureProfile& exposure, const CapitalProfile& capital,
                           const CounterpartyProfile& counterparty, const IssuerParams& issuer,
                           const CapitalConfig& cfg, const XvaOptions& options = {});

struct PhiSensitivity {
  std::vector<double> phis;
  std::vector<XvaBreakdown> breakdowns;
  // Largest deviation of KVA' from the line through the first and last phi,
  // relative to max |KVA'|.
  double collinearity_error = 0.0;
};

PhiSensitivity phi_sensitivity(const ExposureProfile& exposure, const CapitalProfile& capital,
                               const CounterpartyProfile& counterparty, const IssuerParams& issuer,
                               const CapitalConfig& cfg, std::span<const double> phis,
                               const XvaOptions& options = {});

// Composite trapezoid of f on grid t.
double trapezoid(std::span<const double> t, std::span<const double> f);

}  // namespace kva
