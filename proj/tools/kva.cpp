// kva: command-line front end for the XVA/KVA library.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kva/capital_profile.hpp"
#include "kva/error.hpp"
#include "kva/exposure.hpp"
#include "kva/io.hpp"
#include "kva/market_risk.hpp"
#include "kva/pde.hpp"
#include "kva/regcap.hpp"
#include "kva/scenarios.hpp"

namespace {

using namespace kva;

struct Common {
  std::string market_file;
  std::string ratings_file;
  std::string output;
  std::size_t paths = 10000;
  int months = 1;
  long long seed = -1;
  double gamma_k = 0.10;
  double capital_ratio = 0.08;
  bool no_cem_floor = false;
  bool spread_is_lambda = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--market", c.market_file, "Market file (JSON)");
  app->add_option("--ratings", c.ratings_file, "Rating table overriding the shipped one (JSON)");
  app->add_option("-o,--output", c.output, "Write CSV here instead of stdout");
  app->add_option("--paths", c.paths, "Monte Carlo paths");
  app->add_option("--months", c.months, "Profile grid step in months");
  app->add_option("--seed", c.seed, "Override the market file seed");
  app->add_option("--gamma-k", c.gamma_k, "Cost of capital (1/yr)");
  app->add_option("--capital-ratio", c.capital_ratio, "Capital ratio c");
  app->add_flag("--no-cem-floor", c.no_cem_floor, "Do not floor the CEM replacement cost at zero");
  app->add_flag("--spread-is-lambda", c.spread_is_lambda, "Treat the issuer spread as the hazard rate");
}

MarketEnvironment market_of(const Common& c) {
  MarketEnvironment env = c.market_file.empty() ? MarketEnvironment{} : load_market(c.market_file);
  if (c.seed >= 0) env.seed = static_cast<std::uint64_t>(c.seed);
  if (c.spread_is_lambda) env.issuer.spread_is_lambda = true;
  return env;
}

std::vector<CounterpartyProfile> ratings_of(const Common& c) {
  return c.ratings_file.empty() ? default_ratings() : load_ratings(c.ratings_file);
}

PricingConfig pricing_of(const Common& c) {
  if (c.months < 1) throw InputError("cli", "--months must be >= 1");
  if (c.paths < 1) throw InputError("cli", "--paths must be >= 1");
  PricingConfig p;
  p.capital.cost_of_capital = c.gamma_k;
  p.capital.capital_ratio = c.capital_ratio;
  p.exposure.cem_floor = !c.no_cem_floor;
  p.n_paths = c.paths;
  p.grid_months = c.months;
  return p;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("cli", "cannot parse number '" + item + "'");
    }
  }
  if (out.empty()) throw InputError("cli", "empty list");
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cli", "cannot write '" + path + "'");
  out << text;
}

std::string fmt(double v) {
  if (std::abs(v) < 5e-7) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// ------------------------------------------------------------ price

struct PriceArgs {
  Common common;
  std::string portfolio;
  double phi = 0.0;
  bool ir01 = false;
  std::string profiles;
};

void run_price(const PriceArgs& a) {
  const auto env = market_of(a.common);
  const auto pf = load_portfolio(a.portfolio, ratings_of(a.common));
  auto cfg = pricing_of(a.common);
  cfg.capital.phi = a.phi;
  validate(cfg.capital);
  const auto res = price_portfolio(pf.trades, pf.counterparties, env, cfg);

  double total_notional = 0.0;
  for (const auto& t : pf.trades) total_notional += t.notional;
  std::ostringstream os;
  os << "netting_set,notional,cva_bp,dva_bp,fca_bp,colva_bp,kva_mr_bp,kva_ccr_bp,kva_cva_bp,total_bp\n";
  auto row = [&](const std::string& name, double notional, const XvaBreakdown& raw) {
    const auto x = raw.scaled(1e4 / notional);
    os << name << ',' << fmt(notional) << ',' << fmt(x.cva) << ',' << fmt(x.dva) << ',' << fmt(x.fca_prime) << ','
       << fmt(x.colva) << ',' << fmt(x.kva_prime_mr) << ',' << fmt(x.kva_prime_ccr) << ',' << fmt(x.kva_prime_cva)
       << ',' << fmt(x.total_prime()) << '\n';
  };
  for (const auto& s : res.sets) {
    double n = 0.0;
    for (const auto& t : s.set.trades) n += t.notional;
    row(s.set.counterparty_id, n, s.xva);
  }
  row("market_risk", total_notional, res.market_risk_xva);
  row("portfolio", total_notional, res.total);
  if (a.ir01) {
    const double ir = portfolio_ir01(pf.trades, pf.counterparties, env, cfg, true);
    os << "# ir01_bp (bp of notional per bp)," << fmt(ir * 1e4 / total_notional) << '\n';
  }
  emit(os.str(), a.common.output);

  if (!a.profiles.empty()) {
    std::ostringstream ps;
    for (const auto& s : res.sets) ps << "# netting set " << s.set.counterparty_id << '\n' << profile_csv(s.exposure);
    ps << "# capital\n";
    auto cap = res.market_risk;
    for (const auto& s : res.sets) cap += s.capital;
    ps << capital_csv(cap);
    emit(ps.str(), a.profiles);
  }
}

// --------------------------------------------------------- scenario

struct ScenarioArgs {
  Common common;
  std::string kind = "naked";
  std::string phis = "0,1";
  std::string portfolio;
  std::string ratings_subset;
  double maturity = 10.0;
  int freq = 2;
  int float_freq = 4;
  bool no_adjustments = false;
};

void run_scenario_cmd(const ScenarioArgs& a) {
  const auto env = market_of(a.common);
  const auto ratings = ratings_of(a.common);
  ScenarioConfig sc;
  sc.kind = parse_scenario_kind(a.kind);
  sc.phis = parse_list(a.phis);
  sc.pricing = pricing_of(a.common);
  if (sc.pricing.n_paths < 1000) throw InputError("cli", "table runs need --paths >= 1000");
  sc.adjustments = !a.no_adjustments;
  if (!a.portfolio.empty()) {
    const auto pf = load_portfolio(a.portfolio, ratings);
    sc.trade = pf.trades.front();
    sc.par_fixed_rate = false;
  } else {
    sc.trade.id = "swap";
    sc.trade.notional = 1.0;
    sc.trade.maturity = a.maturity;
    sc.trade.fixed_frequency = a.freq;
    sc.trade.float_frequency = a.float_freq;
  }
  if (a.ratings_subset.empty()) {
    sc.ratings = ratings;
  } else {
    std::stringstream ss(a.ratings_subset);
    std::string r;
    while (std::getline(ss, r, ',')) sc.ratings.push_back(find_rating(ratings, r));
  }
  const auto rows = run_scenario(sc, env);
  emit(scenario_csv(rows, sc.kind), a.common.output);
}

// -------------------------------------------------------- pde-check

struct PdeArgs {
  std::string phis = "0,1";
  std::size_t grid = 400;
  std::size_t paths = 20000;
  std::size_t steps = 200;
  long long seed = 7;
  double k0 = 5.0;
  std::string output;
};

void run_pde_check(const PdeArgs& a) {
  std::ostringstream os;
  os << "phi,u_pde,u_mc,mc_stderr,abs_diff,tolerance,pass\n";
  bool all = true;
  for (double phi : parse_list(a.phis)) {
    PdeProblem p;
    p.payoff = {OptionKind::Call, 100.0};
    p.spot = 100.0;
    p.maturity = 1.0;
    p.sigma = 0.2;
    p.r = 0.02;
    p.repo = 0.02;
    p.lambda_b = 0.01;
    p.lambda_c = 0.01;
    p.recovery_b = 0.4;
    p.recovery_c = 0.4;
    p.gamma_k = 0.10;
    p.phi = phi;
    const double k0 = a.k0;
    p.capital = [k0](double, double, double, double) { return k0; };
    p.n_space = a.grid;
    p.n_time = a.grid;
    const auto pde = solve_pde(p);
    const auto mc = monte_carlo_adjustment(p, a.paths, a.steps, static_cast<std::uint64_t>(a.seed));
    const double diff = std::abs(pde.u_spot - mc.u);
    const double tol = std::max(1e-3 * std::abs(mc.u), 3.0 * mc.stderr);
    const bool ok = diff <= tol;
    all = all && ok;
    os << fmt(phi) << ',' << fmt(pde.u_spot) << ',' << fmt(mc.u) << ',' << fmt(mc.stderr) << ',' << fmt(diff) << ','
       << fmt(tol) << ',' << (ok ? "yes" : "no") << '\n';
  }
  emit(os.str(), a.output);
  if (!all) throw NumericalError("pde_solver", "PDE and Monte Carlo adjustments disagree");
}

// ---------------------------------------------------------- capital

struct CapitalArgs {
  double pd = 0.01, lgd = 0.45, maturity = 2.5;
  double ead = 0.0, weight = 1.0, capital_ratio = 0.08, horizon = 1.0;
  std::string portfolio;
  double time = 0.0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XVA and capital valuation adjustment pricer"};
  app.require_subcommand(1);

  PriceArgs price;
  auto* price_cmd = app.add_subcommand("price", "Adjustments for a portfolio file");
  add_common(price_cmd, price.common);
  price_cmd->add_option("--portfolio", price.portfolio, "Portfolio file (JSON)")->required();
  price_cmd->add_option("--phi", price.phi, "Fraction of capital used for funding");
  price_cmd->add_flag("--ir01", price.ir01, "Also report IR01 including adjustments");
  price_cmd->add_option("--profiles", price.profiles, "Write exposure and capital profiles to this CSV");

  ScenarioArgs scen;
  auto* scen_cmd = app.add_subcommand("scenario", "Naked, back-to-back or IR01-flat hedging tables");
  add_common(scen_cmd, scen.common);
  scen_cmd->add_option("--scenario", scen.kind, "naked | backToBack | ir01Flat");
  scen_cmd->add_option("--phi", scen.phis, "Comma-separated phi values");
  scen_cmd->add_option("--portfolio", scen.portfolio, "Take the trade template from this portfolio's first trade");
  scen_cmd->add_option("--rating-set", scen.ratings_subset, "Comma-separated subset of ratings");
  scen_cmd->add_option("--maturity", scen.maturity, "Trade maturity in years");
  scen_cmd->add_option("--freq", scen.freq, "Fixed payments per year");
  scen_cmd->add_option("--float-freq", scen.float_freq, "Floating resets per year");
  scen_cmd->add_flag("--no-adjustments", scen.no_adjustments, "Disable all valuation adjustments");

  PdeArgs pde;
  auto* pde_cmd = app.add_subcommand("pde-check", "Cross-check the PDE solver against Monte Carlo quadrature");
  pde_cmd->add_option("--phi", pde.phis, "Comma-separated phi values");
  pde_cmd->add_option("--grid", pde.grid, "Space and time steps");
  pde_cmd->add_option("--paths", pde.paths, "Monte Carlo paths");
  pde_cmd->add_option("--steps", pde.steps, "Monte Carlo time steps");
  pde_cmd->add_option("--seed", pde.seed, "Monte Carlo seed");
  pde_cmd->add_option("--capital", pde.k0, "Constant capital K0");
  pde_cmd->add_option("-o,--output", pde.output, "Write CSV here instead of stdout");

  CapitalArgs cap;
  auto* cap_cmd = app.add_subcommand("capital", "Standalone regulatory capital formulas");
  cap_cmd->require_subcommand(1);
  auto* irb = cap_cmd->add_subcommand("irb", "IRB risk weight");
  irb->add_option("--pd", cap.pd)->required();
  irb->add_option("--lgd", cap.lgd);
  irb->add_option("--maturity", cap.maturity);
  auto* ccr = cap_cmd->add_subcommand("ccr", "CCR capital c 12.5 w EAD");
  ccr->add_option("--ead", cap.ead)->required();
  ccr->add_option("--weight", cap.weight)->required();
  ccr->add_option("--capital-ratio", cap.capital_ratio);
  auto* mr = cap_cmd->add_subcommand("mr", "Maturity-method market-risk charge of a portfolio");
  mr->add_option("--portfolio", cap.portfolio)->required();
  mr->add_option("--time", cap.time, "Evaluation time in years");
  auto* cva = cap_cmd->add_subcommand("cva-std", "Standardized CVA charge for one counterparty");
  cva->add_option("--weight", cap.weight)->required();
  cva->add_option("--maturity", cap.maturity)->required();
  cva->add_option("--ead", cap.ead)->required();
  cva->add_option("--horizon", cap.horizon);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*price_cmd) run_price(price);
    else if (*scen_cmd) run_scenario_cmd(scen);
    else if (*pde_cmd) run_pde_check(pde);
    else if (*irb) std::cout << "irb_weight," << irb_weight(cap.pd, cap.lgd, cap.maturity) << '\n';
    else if (*ccr) {
      CapitalConfig c;
      c.capital_ratio = cap.capital_ratio;
      std::cout << "k_ccr," << ccr_capital(cap.ead, cap.weight, c) << '\n';
    } else if (*mr) {
      const auto pf = load_portfolio(cap.portfolio, default_ratings());
      std::cout << "k_mr," << market_risk_std(pf.trades, cap.time) << '\n';
    } else if (*cva) {
      const CvaCapitalInput in{cap.weight, cap.maturity, cap.ead};
      std::cout << "k_cva_full," << cva_capital_std_full({&in, 1}, cap.horizon) << '\n'
                << "k_cva_large_n," << cva_capital_std_large_n(cap.weight, cap.maturity, cap.ead, cap.horizon) << '\n';
    }
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
