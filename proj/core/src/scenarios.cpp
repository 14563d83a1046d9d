#include "kva/scenarios.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "kva/error.hpp"
#include "kva/instruments.hpp"

namespace kva {

namespace {
constexpr const char* kModule = "scenarios";

std::vector<double> horizon_grid(const std::vector<SwapSpec>& trades, int months) {
  double horizon = 0.0;
  for (const auto& t : trades) horizon = std::max(horizon, t.maturity);
  return simulation_grid(trades, horizon, months);
}

double value_today(std::span<const SwapSpec> trades, const DiscountCurve& curve) {
  double v = 0.0;
  for (const auto& t : trades) v += SwapPricer(t).value_today(curve);
  return v;
}

// Adjustments of a capital-only profile (no exposure).
XvaBreakdown capital_only_xva(const CapitalProfile& capital, std::size_t n_paths, const CounterpartyProfile& cp,
                              const IssuerParams& issuer, const CapitalConfig& cfg, double counterparty_hazard) {
  const auto zero = ExposureProfile::zeros(capital.time_grid, n_paths);
  XvaOptions opts;
  opts.counterparty_hazard = counterparty_hazard;
  return integrate_xva(zero, capital, cp, issuer, cfg, opts);
}

const char* direction_label(SwapDirection d) { return d == SwapDirection::PayerFixed ? "Pay" : "Rec"; }
}  // namespace

double default_zero_rate() { return 2.0 * std::log1p(0.027 / 2.0); }

PortfolioResult price_portfolio(const std::vector<SwapSpec>& trades,
                                const std::map<std::string, CounterpartyProfile>& counterparties,
                                const MarketEnvironment& env, const PricingConfig& cfg) {
  if (trades.empty()) throw InputError(kModule, "portfolio is empty");
  for (const auto& t : trades) validate(t);
  validate(cfg.capital);
  const auto model = env.model();
  const auto grid = horizon_grid(trades, cfg.grid_months);

  PortfolioResult res;
  res.time_grid = grid;
  res.value = value_today(trades, env.curve);
  for (auto& set : group_netting_sets(trades)) {
    NettingSetResult r;
    r.exposure = build_profile(set, model, grid, grid, cfg.n_paths, env.seed, cfg.exposure);
    if (set.perfect_csa) {
      r.capital = CapitalProfile::zeros(grid);
    } else {
      auto it = counterparties.find(set.counterparty_id);
      if (it == counterparties.end())
        throw InputError(kModule, "no counterparty profile for '" + set.counterparty_id + "'");
      validate(it->second);
      CapitalOptions copts = cfg.capital_options;
      copts.include_market_risk = false;
      r.capital = build_capital_profile(r.exposure, set, it->second, cfg.capital, env.curve, copts);
      r.xva = integrate_xva(r.exposure, r.capital, it->second, env.issuer, cfg.capital);
    }
    res.total += r.xva;
    r.set = std::move(set);
    res.sets.push_back(std::move(r));
  }
  res.market_risk = market_risk_profile(trades, grid, env.curve);
  res.market_risk_xva = capital_only_xva(res.market_risk, cfg.n_paths, CounterpartyProfile{}, env.issuer,
                                         cfg.capital, 0.0);
  res.total += res.market_risk_xva;
  return res;
}

double portfolio_ir01(const std::vector<SwapSpec>& trades,
                      const std::map<std::string, CounterpartyProfile>& counterparties,
                      const MarketEnvironment& env, const PricingConfig& cfg, bool with_adjustments) {
  auto bumped = [&](double h) {
    MarketEnvironment e = env;
    e.curve = env.curve.shifted(h);
    if (!with_adjustments) return value_today(trades, e.curve);
    const auto r = price_portfolio(trades, counterparties, e, cfg);
    return r.value + r.total.total();
  };
  return 0.5 * (bumped(kBasisPoint) - bumped(-kBasisPoint));
}

ScenarioKind parse_scenario_kind(const std::string& name) {
  if (name == "naked") return ScenarioKind::Naked;
  if (name == "backToBack") return ScenarioKind::BackToBack;
  if (name == "ir01Flat") return ScenarioKind::Ir01Flat;
  throw InputError(kModule, "unknown scenario '" + name + "' (expected naked, backToBack or ir01Flat)");
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Naked: return "naked";
    case ScenarioKind::BackToBack: return "backToBack";
    case ScenarioKind::Ir01Flat: return "ir01Flat";
  }
  return "naked";
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.phis.empty()) throw InputError(kModule, "no phi values");
  for (double phi : cfg.phis)
    if (!(phi >= 0.0 && phi <= 1.0)) throw InputError(kModule, "phi must be in [0,1]");
  if (cfg.directions.empty()) throw InputError(kModule, "no swap directions");
  if (cfg.ratings.empty()) throw InputError(kModule, "no counterparty ratings");
  for (const auto& cp : cfg.ratings) validate(cp);
  if (cfg.pricing.n_paths < 1) throw InputError(kModule, "nPaths must be >= 1");
  if (!(cfg.hedge_bracket_lo < cfg.hedge_bracket_hi)) throw InputError(kModule, "empty hedge bracket");
}

double solve_ir01_flat_notional(const std::function<double(double)>& f, double lo, double hi) {
  const double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NumericalError(kModule, "IR01 root-solve failure: no sign change in hedge bracket [" +
                                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                        boost::math::tools::eps_tolerance<double>(52), iters);
  if (iters >= 200) throw NumericalError(kModule, "IR01 root-solve failure: no convergence");
  return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

std::vector<ScenarioRow> run_scenario(const ScenarioConfig& cfg, const MarketEnvironment& env) {
  validate(cfg);
  validate(env.issuer);
  const double notional = cfg.trade.notional;
  const double to_bp = 1e4 / notional;
  std::vector<ScenarioRow> rows;

  for (SwapDirection dir : cfg.directions) {
    SwapSpec trade = cfg.trade;
    trade.direction = dir;
    trade.collateralized = false;
    if (cfg.par_fixed_rate) trade.fixed_rate = par_rate(env.curve, trade);
    validate(trade);
    SwapSpec hedge_unit = mirror(trade);
    hedge_unit.id = trade.id + "-hedge";
    hedge_unit.counterparty_id = "hedge";
    hedge_unit.collateralized = true;

    const std::vector<SwapSpec> trade_only{trade};
    const auto grid = horizon_grid(trade_only, cfg.pricing.grid_months);
    const std::array<DiscountCurve, 3> curves = {env.curve, env.curve.shifted(kBasisPoint),
                                                 env.curve.shifted(-kBasisPoint)};
    std::array<double, 3> trade_value{};
    for (int c = 0; c < 3; ++c) trade_value[c] = SwapPricer(trade).value_today(curves[c]);

    // Exposure does not depend on the counterparty, so it is simulated once
    // per curve and direction.
    std::array<ExposureProfile, 3> exposure;
    const NettingSet set{trade.counterparty_id, trade_only, false};
    if (cfg.adjustments)
      for (int c = 0; c < 3; ++c)
        exposure[c] = build_profile(set, HullWhiteModel(curves[c], env.mean_reversion, env.volatility), grid, grid,
                                    cfg.pricing.n_paths, env.seed, cfg.pricing.exposure);

    for (double phi : cfg.phis) {
      CapitalConfig ccfg = cfg.pricing.capital;
      ccfg.phi = phi;
      for (const auto& cp : cfg.ratings) {
        ScenarioRow row{phi, dir, cp.rating, {}, 0.0};
        if (!cfg.adjustments) {
          // U = 0: only the risk-free IR01 of the (possibly hedged) position remains.
          const double ir01_trade = 0.5 * (trade_value[1] - trade_value[2]);
          row.ir01_bp = cfg.kind == ScenarioKind::Naked ? ir01_trade * to_bp : 0.0;
          row.xva.phi = phi;
          rows.push_back(row);
          continue;
        }

        std::array<XvaBreakdown, 3> credit;  // everything except market-risk KVA
        for (int c = 0; c < 3; ++c) {
          CapitalOptions copts = cfg.pricing.capital_options;
          copts.include_market_risk = false;
          const auto cap = build_capital_profile(exposure[c], set, cp, ccfg, curves[c], copts);
          credit[c] = integrate_xva(exposure[c], cap, cp, env.issuer, ccfg);
        }
        // Market-risk KVA of trade + m x hedge on curve c; the ladder itself
        // does not depend on the curve.
        auto market_xva = [&](double m, int c) {
          std::vector<SwapSpec> book = trade_only;
          if (cfg.kind != ScenarioKind::Naked && m > 0.0) {
            SwapSpec h = hedge_unit;
            h.notional = m * trade.notional;
            book.push_back(h);
          }
          const auto mr = market_risk_profile(book, grid, curves[c]);
          auto x = capital_only_xva(mr, cfg.pricing.n_paths, cp, env.issuer, ccfg, cp.hazard_rate());
          if (cfg.kind != ScenarioKind::Naked && env.issuer.collateral_spread != 0.0) {
            // The hedge is collateralized with X = its own value.
            XvaOptions opts;
            opts.discounted_collateral = exposure[c].discounted_value;
            for (double& v : opts.discounted_collateral) v *= -m;
            opts.counterparty_hazard = cp.hazard_rate();
            x.colva += integrate_xva(ExposureProfile::zeros(grid, cfg.pricing.n_paths),
                                     CapitalProfile::zeros(grid), cp, env.issuer, ccfg, opts)
                           .colva;
          }
          return x;
        };
        auto total_value = [&](double m, int c) {
          XvaBreakdown u = credit[c];
          u += market_xva(m, c);
          const double v = cfg.kind == ScenarioKind::Naked ? trade_value[c] : (1.0 - m) * trade_value[c];
          return v + u.total_prime();
        };
        auto ir01 = [&](double m) { return 0.5 * (total_value(m, 1) - total_value(m, 2)); };

        double m = cfg.kind == ScenarioKind::Naked ? 0.0 : 1.0;
        if (cfg.kind == ScenarioKind::Ir01Flat)
          m = solve_ir01_flat_notional(ir01, cfg.hedge_bracket_lo, cfg.hedge_bracket_hi);

        XvaBreakdown u = credit[0];
        u += market_xva(m, 0);
        u.phi = phi;
        row.xva = u.scaled(to_bp);
        row.xva.phi = phi;
        row.ir01_bp = ir01(m) * to_bp;
        row.hedge_multiplier = cfg.kind == ScenarioKind::Naked ? 0.0 : m;
        row.hedge_change_pct = cfg.kind == ScenarioKind::Ir01Flat ? 100.0 * (m - 1.0) : 0.0;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string scenario_csv(const std::vector<ScenarioRow>& rows, ScenarioKind kind) {
  std::ostringstream os;
  os << "phi,swap,rating,cva_bp,dva_bp,fca_bp,kva_mr_bp,kva_ccr_bp,kva_cva_bp,total_bp,ir01_bp";
  if (kind == ScenarioKind::Ir01Flat) os << ",hedge_change_pct";
  os << '\n';
  char buf[64];
  auto num = [&](double v) {
    if (std::abs(v) < 5e-7) v = 0.0;  // no negative zero
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    const auto& x = r.xva;
    os << num(r.phi) << ',' << direction_label(r.direction) << ',' << r.rating << ',' << num(x.cva) << ','
       << num(x.dva) << ',' << num(x.fca_prime) << ',' << num(x.kva_prime_mr) << ',' << num(x.kva_prime_ccr) << ','
       << num(x.kva_prime_cva) << ',' << num(x.total_prime()) << ',' << num(r.ir01_bp);
    if (kind == ScenarioKind::Ir01Flat) os << ',' << num(r.hedge_change_pct);
    os << '\n';
  }
  return os.str();
}

}  // namespace kva
