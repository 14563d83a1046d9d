#include "kva/exposure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "kva/error.hpp"
#include "kva/market_risk.hpp"
#include "kva/parallel.hpp"

namespace kva {

namespace {
constexpr const char* kModule = "exposure";
constexpr double kTimeTol = 1e-9;
constexpr double kEventGap = 1e-6;

const char* const kIrSets[3] = {"IR:<=1y", "IR:1y-5y", "IR:>5y"};

int ir_set_index(double maturity) {
  if (maturity <= 1.0 + kTimeTol) return 0;
  if (maturity <= 5.0 + kTimeTol) return 1;
  return 2;
}

std::vector<std::size_t> match_grid(std::span<const double> path_grid, std::span<const double> profile_grid) {
  std::vector<std::size_t> idx;
  idx.reserve(profile_grid.size());
  std::size_t j = 0;
  for (double t : profile_grid) {
    while (j < path_grid.size() && path_grid[j] < t - kTimeTol) ++j;
    if (j == path_grid.size() || std::abs(path_grid[j] - t) > kTimeTol)
      throw InputError(kModule, "grid mismatch: profile time " + std::to_string(t) + " is not on the path grid");
    idx.push_back(j);
  }
  return idx;
}

struct Sums {
  std::vector<double> dvp, dvp2, dvn, dvn2, vp, dv, ead, ead2, dead, dread, estd;
  explicit Sums(std::size_t m = 0)
      : dvp(m), dvp2(m), dvn(m), dvn2(m), vp(m), dv(m), ead(m), ead2(m), dead(m), dread(m), estd(m) {}
  void add(const Sums& o) {
    auto acc = [](std::vector<double>& a, const std::vector<double>& b) {
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    };
    acc(dvp, o.dvp); acc(dvp2, o.dvp2); acc(dvn, o.dvn); acc(dvn2, o.dvn2); acc(vp, o.vp);
    acc(dv, o.dv); acc(ead, o.ead); acc(ead2, o.ead2); acc(dead, o.dead); acc(dread, o.dread);
    acc(estd, o.estd);
  }
};

using PathFill = std::function<void(std::size_t, std::span<double>, std::span<double>, std::span<double>)>;

ExposureProfile aggregate(const NettingSet& set, const HullWhiteModel& model, std::span<const double> path_grid,
                          std::span<const double> profile_grid, std::size_t n_paths, const PathFill& fill,
                          const ExposureOptions& options) {
  if (set.trades.empty()) throw InputError(kModule, "netting set '" + set.counterparty_id + "' is empty");
  if (n_paths == 0) throw InputError(kModule, "nPaths must be >= 1");
  const auto out_idx = match_grid(path_grid, profile_grid);
  std::vector<double> grid(profile_grid.begin(), profile_grid.end());
  if (set.perfect_csa) return ExposureProfile::zeros(grid, n_paths);

  std::vector<SwapPricer> pricers;
  pricers.reserve(set.trades.size());
  for (const auto& t : set.trades) pricers.emplace_back(t);
  std::vector<PathValuer> valuers;
  valuers.reserve(pricers.size());
  for (const auto& p : pricers) valuers.emplace_back(p, model, path_grid);

  double ccf[3];
  for (int s = 0; s < 3; ++s) {
    auto it = options.ccf.find(kIrSets[s]);
    if (it == options.ccf.end())
      throw InputError(kModule, std::string("unknown hedging-set mapping for ") + kIrSets[s]);
    ccf[s] = it->second;
  }

  const std::size_t n = path_grid.size();
  const std::size_t m = out_idx.size();
  const std::size_t nt = valuers.size();
  // Per-trade deterministic data on the output grid.
  std::vector<double> residual(nt * m), next_fix(nt * m), addon(nt * m), sign(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    sign[j] = direction_sign(pricers[j].spec().direction);
    for (std::size_t q = 0; q < m; ++q) {
      const double t = path_grid[out_idx[q]];
      residual[j * m + q] = pricers[j].residual_maturity(t);
      next_fix[j * m + q] = pricers[j].time_to_next_fixing(t);
      addon[j * m + q] = cem_addon_rate(residual[j * m + q]) * pricers[j].spec().notional;
    }
  }

  auto blocks = map_blocks<Sums>(n_paths, [&](std::size_t begin, std::size_t end) {
    Sums s(m);
    std::vector<double> state(n), rate(n), disc(n), values(nt * n), dur(options.standardized ? nt * n : 0);
    for (std::size_t p = begin; p < end; ++p) {
      fill(p, state, rate, disc);
      for (std::size_t j = 0; j < nt; ++j)
        valuers[j].value_path(state, {values.data() + j * n, n},
                              options.standardized ? std::span<double>(dur.data() + j * n, n) : std::span<double>());
      for (std::size_t q = 0; q < m; ++q) {
        const std::size_t k = out_idx[q];
        double v = 0.0, gross_rc = 0.0, gross_addon = 0.0;
        double risk[3] = {0.0, 0.0, 0.0};
        bool live = false;
        for (std::size_t j = 0; j < nt; ++j) {
          if (residual[j * m + q] <= 0.0) continue;
          live = true;
          const double vj = values[j * n + k];
          v += vj;
          gross_rc += std::max(vj, 0.0);
          gross_addon += addon[j * m + q];
          if (options.standardized) {
            const double notional = pricers[j].spec().notional;
            risk[ir_set_index(residual[j * m + q])] -= sign[j] * notional * dur[j * n + k];
            risk[ir_set_index(next_fix[j * m + q])] += sign[j] * notional * next_fix[j * m + q];
          }
        }
        const double d = disc[k];
        const double pos = std::max(v, 0.0), neg = std::min(v, 0.0);
        double ead = 0.0, ead_std = 0.0;
        if (live) {
          const double ngr = gross_rc > 0.0 ? pos / gross_rc : 1.0;
          const double rc = options.cem_floor ? pos : v;
          ead = rc + (0.4 + 0.6 * ngr) * gross_addon;
          if (options.standardized) {
            double hs = 0.0;
            for (int h = 0; h < 3; ++h) hs += std::abs(risk[h]) * ccf[h];
            ead_std = kStandardizedBeta * std::max(v, hs);
          }
        }
        s.dvp[q] += d * pos;
        s.dvp2[q] += d * pos * d * pos;
        s.dvn[q] += d * neg;
        s.dvn2[q] += d * neg * d * neg;
        s.vp[q] += pos;
        s.dv[q] += d * v;
        s.ead[q] += ead;
        s.ead2[q] += ead * ead;
        s.dead[q] += d * ead;
        s.dread[q] += d * rate[k] * ead;
        s.estd[q] += ead_std;
      }
    }
    return s;
  });

  Sums total(m);
  for (const auto& b : blocks) total.add(b);

  ExposureProfile prof = ExposureProfile::zeros(grid, n_paths);
  const double inv = 1.0 / static_cast<double>(n_paths);
  auto stderr_of = [&](double sum, double sum2) {
    if (n_paths < 2) return 0.0;
    const double mean = sum * inv;
    const double var = std::max(0.0, (sum2 * inv - mean * mean) * n_paths / (n_paths - 1.0));
    return std::sqrt(var * inv);
  };
  for (std::size_t q = 0; q < m; ++q) {
    prof.epe[q] = total.dvp[q] * inv;
    prof.ene[q] = total.dvn[q] * inv;
    prof.undiscounted_ee[q] = total.vp[q] * inv;
    prof.discounted_value[q] = total.dv[q] * inv;
    prof.ead_cem[q] = total.ead[q] * inv;
    prof.discounted_ead_cem[q] = total.dead[q] * inv;
    prof.discounted_rate_ead_cem[q] = total.dread[q] * inv;
    prof.ead_std[q] = total.estd[q] * inv;
    prof.epe_stderr[q] = stderr_of(total.dvp[q], total.dvp2[q]);
    prof.ene_stderr[q] = stderr_of(total.dvn[q], total.dvn2[q]);
    prof.ead_cem_stderr[q] = stderr_of(total.ead[q], total.ead2[q]);
  }

  // IMM EAD at each profile time from the time-zero EE profile over the
  // following year (or the remaining life of the netting set).
  double last_maturity = 0.0;
  for (const auto& t : set.trades) last_maturity = std::max(last_maturity, t.maturity);
  for (std::size_t q = 0; q < m; ++q) {
    const double t0 = grid[q];
    const double remaining = last_maturity - t0;
    if (remaining <= kTimeTol) continue;
    const double horizon = std::min(1.0, remaining);
    std::vector<double> times, ee;
    for (std::size_t r = q + 1; r < m && grid[r] <= t0 + horizon + kTimeTol; ++r) {
      times.push_back(grid[r] - t0);
      ee.push_back(prof.undiscounted_ee[r]);
    }
    if (times.empty() && q + 1 < m) {
      times.push_back(horizon);
      ee.push_back(prof.undiscounted_ee[q + 1]);
    }
    if (times.empty()) continue;
    if (times.back() < horizon - kTimeTol) times.back() = horizon;
    prof.ead_imm[q] = ead_imm(times, ee, remaining);
  }
  return prof;
}

}  // namespace

std::vector<NettingSet> group_netting_sets(std::span<const SwapSpec> trades) {
  std::vector<NettingSet> sets;
  for (const auto& t : trades) {
    auto it = std::find_if(sets.begin(), sets.end(),
                           [&](const NettingSet& s) { return s.counterparty_id == t.counterparty_id; });
    if (it == sets.end()) {
      sets.push_back({t.counterparty_id, {t}, t.collateralized});
    } else {
      if (it->perfect_csa != t.collateralized)
        throw InputError(kModule, "netting set '" + t.counterparty_id + "' mixes collateralized and uncollateralized trades");
      it->trades.push_back(t);
    }
  }
  return sets;
}

double cem_addon_rate(double residual_maturity) {
  if (residual_maturity <= 1.0 + kTimeTol) return 0.0;
  if (residual_maturity <= 5.0 + kTimeTol) return 0.005;
  return 0.015;
}

CemResult ead_cem(std::span<const CemTrade> trades, bool floor_replacement_cost) {
  CemResult r;
  double net = 0.0, gross_rc = 0.0;
  for (const auto& t : trades) {
    if (t.residual_maturity <= 0.0) continue;
    net += t.value;
    gross_rc += std::max(t.value, 0.0);
    r.gross_addon += cem_addon_rate(t.residual_maturity) * t.notional;
  }
  r.ngr = gross_rc > 0.0 ? std::max(net, 0.0) / gross_rc : 1.0;
  r.net_addon = 0.4 * r.gross_addon + 0.6 * r.ngr * r.gross_addon;
  r.replacement_cost = floor_replacement_cost ? std::max(net, 0.0) : net;
  r.ead = r.replacement_cost + r.net_addon;
  return r;
}

double credit_conversion_factor(SpecificRisk risk) {
  switch (risk) {
    case SpecificRisk::High: return 0.006;
    case SpecificRisk::LowReferenceCds: return 0.003;
    case SpecificRisk::Other: return 0.002;
  }
  return 0.002;
}

double ead_standardized(const StandardizedInputs& in) {
  double values = 0.0;
  for (double v : in.transaction_values) values += v;
  for (double c : in.collateral_values) values -= c;
  std::map<std::string, double> net;
  for (const auto& p : in.transaction_risk) net[p.hedging_set] += p.amount;
  for (const auto& p : in.collateral_risk) net[p.hedging_set] -= p.amount;
  double risk = 0.0;
  for (const auto& [set, amount] : net) {
    auto it = in.ccf.find(set);
    if (it == in.ccf.end()) throw InputError(kModule, "unknown hedging-set mapping '" + set + "'");
    risk += std::abs(amount) * it->second;
  }
  return kStandardizedBeta * std::max(values, risk);
}

std::string ir_hedging_set(double maturity) { return kIrSets[ir_set_index(maturity)]; }

std::map<std::string, double> default_ir_ccf() {
  const double ccf = credit_conversion_factor(SpecificRisk::Other);
  return {{kIrSets[0], ccf}, {kIrSets[1], ccf}, {kIrSets[2], ccf}};
}

std::vector<RiskPosition> swap_risk_positions(const SwapPricer& pricer, double t, double fixed_duration) {
  const auto& spec = pricer.spec();
  const double residual = pricer.residual_maturity(t);
  if (residual <= 0.0) return {};
  const double s = direction_sign(spec.direction);
  const double to_fix = pricer.time_to_next_fixing(t);
  return {{ir_hedging_set(residual), -s * spec.notional * fixed_duration},
          {ir_hedging_set(to_fix), s * spec.notional * to_fix}};
}

double effective_epe(std::span<const double> times, std::span<const double> ee, double maturity) {
  if (times.size() != ee.size()) throw InputError(kModule, "EE and time grid lengths differ");
  if (times.empty()) throw InputError(kModule, "empty EE grid");
  if (!(maturity > 0.0)) throw InputError(kModule, "maturity must be > 0");
  const double horizon = std::min(1.0, maturity);
  if (times.back() < horizon - kTimeTol)
    throw InputError(kModule, "EE grid ends before min(1y, maturity)");
  double prev_t = 0.0, running = 0.0, sum = 0.0, covered = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] <= prev_t) throw InputError(kModule, "EE grid must be strictly increasing from 0");
    if (times[k] > horizon + kTimeTol) break;
    running = std::max(running, ee[k]);
    const double dt = times[k] - prev_t;
    sum += running * dt;
    covered += dt;
    prev_t = times[k];
  }
  return covered > 0.0 ? sum / covered : 0.0;
}

double ead_imm(std::span<const double> times, std::span<const double> ee, double maturity) {
  return kImmAlpha * effective_epe(times, ee, maturity);
}

ExposureProfile ExposureProfile::zeros(std::vector<double> grid, std::size_t n_paths) {
  ExposureProfile p;
  const std::size_t m = grid.size();
  p.time_grid = std::move(grid);
  p.n_paths = n_paths;
  for (auto* v : {&p.epe, &p.ene, &p.undiscounted_ee, &p.discounted_value, &p.ead_cem, &p.discounted_ead_cem,
                  &p.discounted_rate_ead_cem, &p.ead_std, &p.ead_imm, &p.epe_stderr, &p.ene_stderr,
                  &p.ead_cem_stderr})
    v->assign(m, 0.0);
  return p;
}

ExposureProfile build_profile(const NettingSet& set, const HullWhiteModel& model, std::span<const double> path_grid,
                              std::span<const double> profile_grid, std::size_t n_paths, std::uint64_t seed,
                              const ExposureOptions& options) {
  PathGenerator gen(model, std::vector<double>(path_grid.begin(), path_grid.end()));
  PathFill fill = [&](std::size_t p, std::span<double> x, std::span<double> r, std::span<double> d) {
    gen.generate(seed, p, x, r, d);
  };
  return aggregate(set, model, path_grid, profile_grid, n_paths, fill, options);
}

ExposureProfile build_profile(const NettingSet& set, const HullWhiteModel& model, const PathSet& paths,
                              std::span<const double> profile_grid, const ExposureOptions& options) {
  const auto& g = paths.time_grid;
  PathFill fill = [&](std::size_t p, std::span<double> x, std::span<double> r, std::span<double> d) {
    const auto rates = paths.rates(p);
    const auto discs = paths.discounts(p);
    for (std::size_t k = 0; k < g.size(); ++k) {
      r[k] = rates[k];
      d[k] = discs[k];
      x[k] = model.state_from_rate(g[k], rates[k]);
    }
  };
  return aggregate(set, model, g, profile_grid, paths.n_paths, fill, options);
}

std::vector<double> simulation_grid(std::span<const SwapSpec> trades, double horizon, int months) {
  if (months < 1) throw InputError(kModule, "grid step must be at least one month");
  if (!(horizon > 0.0)) throw InputError(kModule, "grid horizon must be > 0");
  std::set<double> pts;
  const int steps = static_cast<int>(std::ceil(horizon * 12.0 / months - 1e-9));
  for (int i = 0; i <= steps; ++i) pts.insert(std::min(horizon, i * months / 12.0));
  // Values and capital jump at payments, add-on buckets and ladder band
  // edges. A node just on the other side of each jump keeps the trapezoid
  // rule second order.
  auto add = [&](double t) {
    if (t > 0.0 && t <= horizon) pts.insert(t);
  };
  for (const auto& t : trades) {
    const auto sched = make_schedule(t);
    for (const auto& p : sched.floating) {
      add(p.fixing);
      add(p.end - kEventGap);
    }
    for (const auto& p : sched.fixed) add(p.end - kEventGap);
    add(t.maturity);
    for (double m : {1.0, 5.0}) add(t.maturity - m - kEventGap);
    for (double e : ladder_band_changes(t)) add(e + kEventGap);
  }
  std::vector<double> out;
  for (double t : pts)
    if (out.empty() || t - out.back() > kTimeTol) out.push_back(t);
  return out;
}

std::string profile_csv(const ExposureProfile& p) {
  std::ostringstream os;
  os.precision(12);
  os << "time,epe,ene,eadCEM,eadStd,eadIMM,epe_stderr,ene_stderr,eadCEM_stderr\n";
  for (std::size_t i = 0; i < p.time_grid.size(); ++i)
    os << p.time_grid[i] << ',' << p.epe[i] << ',' << p.ene[i] << ',' << p.ead_cem[i] << ',' << p.ead_std[i] << ','
       << p.ead_imm[i] << ',' << p.epe_stderr[i] << ',' << p.ene_stderr[i] << ',' << p.ead_cem_stderr[i] << '\n';
  return os.str();
}

}  // namespace kva
