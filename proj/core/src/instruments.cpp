#include "kva/instruments.hpp"

#include <cmath>
#include <string>

#include "kva/error.hpp"

namespace kva {

namespace {
constexpr const char* kModule = "instruments";
constexpr double kTimeTol = 1e-9;

bool valid_frequency(int f) { return f == 1 || f == 2 || f == 4 || f == 12; }

// End dates generated backward from maturity.
std::vector<double> period_ends(double maturity, int frequency) {
  const double step = 1.0 / frequency;
  const int n = std::max(1, static_cast<int>(std::ceil(maturity * frequency - 1e-9)));
  std::vector<double> ends(n);
  for (int j = 0; j < n; ++j) ends[j] = maturity - (n - 1 - j) * step;
  ends.back() = maturity;
  return ends;
}
}  // namespace

void validate(const SwapSpec& spec) {
  if (!(spec.notional > 0.0)) throw InputError(kModule, "swap '" + spec.id + "': notional must be > 0");
  if (!(spec.maturity > 0.0)) throw InputError(kModule, "swap '" + spec.id + "': maturity must be > 0");
  if (!valid_frequency(spec.fixed_frequency) || !valid_frequency(spec.float_frequency))
    throw InputError(kModule, "swap '" + spec.id + "': frequency must be one of 1, 2, 4, 12");
  if (!std::isfinite(spec.fixed_rate)) throw InputError(kModule, "swap '" + spec.id + "': non-finite fixed rate");
}

SwapSpec mirror(const SwapSpec& spec) {
  SwapSpec m = spec;
  m.direction = spec.direction == SwapDirection::PayerFixed ? SwapDirection::ReceiverFixed
                                                            : SwapDirection::PayerFixed;
  return m;
}

Schedule make_schedule(const SwapSpec& spec) {
  validate(spec);
  Schedule s;
  double prev = 0.0;
  for (double end : period_ends(spec.maturity, spec.fixed_frequency)) {
    s.fixed.push_back({prev, end, end - prev});
    prev = end;
  }
  prev = 0.0;
  for (double end : period_ends(spec.maturity, spec.float_frequency)) {
    s.floating.push_back({prev, prev, end, end - prev});
    prev = end;
  }
  for (const auto& p : s.fixed)
    if (!(p.accrual > 0.0)) throw InputError(kModule, "degenerate fixed period");
  for (const auto& p : s.floating)
    if (!(p.accrual > 0.0)) throw InputError(kModule, "degenerate floating period");
  return s;
}

double par_rate(const DiscountCurve& curve, const SwapSpec& spec) {
  const Schedule s = make_schedule(spec);
  double annuity = 0.0;
  for (const auto& p : s.fixed) annuity += p.accrual * curve.discount(p.end);
  if (!(annuity > 0.0)) throw InputError(kModule, "degenerate schedule: zero annuity");
  const double floating = curve.discount(s.floating.front().start) - curve.discount(spec.maturity);
  return floating / annuity;
}

SwapPricer::SwapPricer(SwapSpec spec) : spec_(std::move(spec)), schedule_(make_schedule(spec_)) {}

int SwapPricer::float_period_at(double t) const {
  if (t >= spec_.maturity - kTimeTol) return -1;
  const auto& fl = schedule_.floating;
  for (std::size_t c = 0; c < fl.size(); ++c)
    if (t >= fl[c].start - kTimeTol && t < fl[c].end - kTimeTol) return static_cast<int>(c);
  return -1;
}

double SwapPricer::time_to_next_fixing(double t) const {
  for (const auto& p : schedule_.floating)
    if (p.fixing > t + kTimeTol) return p.fixing - t;
  return residual_maturity(t);
}

double SwapPricer::value(const HullWhiteModel& model, double t, double x, double fixing_bond) const {
  if (t > spec_.maturity + kTimeTol)
    throw InputError(kModule, "valuation time beyond maturity of '" + spec_.id + "'");
  const int c = float_period_at(t);
  if (c < 0) return 0.0;
  const double n = spec_.notional;
  double fixed = 0.0;
  for (const auto& p : schedule_.fixed)
    if (p.end > t + kTimeTol) fixed += p.accrual * model.bond_from_state(t, p.end, x);
  fixed *= n * spec_.fixed_rate;
  const auto& cur = schedule_.floating[c];
  const double floating =
      n * (model.bond_from_state(t, cur.end, x) / fixing_bond - model.bond_from_state(t, spec_.maturity, x));
  return direction_sign(spec_.direction) * (floating - fixed);
}

double SwapPricer::value_today(const DiscountCurve& curve) const { return forward_value(curve, 0.0); }

double SwapPricer::forward_value(const DiscountCurve& curve, double t) const {
  const int c = float_period_at(t);
  if (c < 0) return 0.0;
  const double dt = curve.discount(t);
  auto fwd_bond = [&](double T) { return curve.discount(T) / dt; };
  double fixed = 0.0;
  for (const auto& p : schedule_.fixed)
    if (p.end > t + kTimeTol) fixed += p.accrual * fwd_bond(p.end);
  fixed *= spec_.notional * spec_.fixed_rate;
  const auto& cur = schedule_.floating[c];
  const double fixing_bond = curve.discount(cur.end) / curve.discount(cur.fixing);
  const double floating = spec_.notional * (fwd_bond(cur.end) / fixing_bond - fwd_bond(spec_.maturity));
  return direction_sign(spec_.direction) * (floating - fixed);
}

double SwapPricer::fixed_leg_duration(const HullWhiteModel& model, double t, double x) const {
  double pv = 0.0;
  double weighted = 0.0;
  for (const auto& p : schedule_.fixed) {
    if (p.end <= t + kTimeTol) continue;
    double cf = spec_.fixed_rate * p.accrual;
    if (&p == &schedule_.fixed.back()) cf += 1.0;
    const double df = model.bond_from_state(t, p.end, x);
    pv += cf * df;
    weighted += (p.end - t) * cf * df;
  }
  return pv > 0.0 ? weighted / pv : 0.0;
}

PathValuer::PathValuer(const SwapPricer& pricer, const HullWhiteModel& model, std::span<const double> grid)
    : pricer_(pricer), grid_(grid.begin(), grid.end()) {
  const auto& spec = pricer.spec();
  const auto& sched = pricer.schedule();
  const double sign = direction_sign(spec.direction);
  const double n = spec.notional;
  const std::size_t m = grid_.size();
  fixed_terms_.resize(m);
  terminal_.resize(m);
  current_end_.resize(m);
  current_period_.assign(m, -1);
  fixing_period_.assign(m, -1);

  auto term = [&](double weight, double t, double T, double accrual = 0.0) {
    const double b = model.bond_b(t, T);
    return Term{weight, model.log_bond_intercept(t, T), b,
                T - t, accrual};
  };

  std::vector<bool> fixing_seen(sched.floating.size(), false);
  for (std::size_t k = 0; k < m; ++k) {
    const double t = grid_[k];
    const int c = pricer.float_period_at(t);
    current_period_[k] = c;
    if (c < 0) continue;
    for (const auto& p : sched.fixed)
      if (p.end > t + kTimeTol) fixed_terms_[k].push_back(term(-sign * n * spec.fixed_rate * p.accrual, t, p.end, p.accrual));
    terminal_[k] = term(-sign * n, t, spec.maturity);
    current_end_[k] = term(sign * n, t, sched.floating[c].end);
    if (std::abs(sched.floating[c].fixing - t) <= kTimeTol) {
      fixing_period_[k] = c;
      fixing_seen[c] = true;
    }
    if (!fixing_seen[c])
      throw InputError(kModule, "floating fixing at t=" + std::to_string(sched.floating[c].fixing) +
                                    " of '" + spec.id + "' is not on the simulation grid");
  }
}

void PathValuer::value_path(std::span<const double> states, std::span<double> values,
                            std::span<double> fixed_duration) const {
  const std::size_t m = grid_.size();
  if (states.size() != m || values.size() != m || (!fixed_duration.empty() && fixed_duration.size() != m))
    throw InputError(kModule, "path buffer size does not match valuation grid");
  const bool with_duration = !fixed_duration.empty();
  const double coupon = pricer_.spec().fixed_rate;
  double fixing_bond = 1.0;
  for (std::size_t k = 0; k < m; ++k) {
    const int c = current_period_[k];
    if (c < 0) {
      values[k] = 0.0;
      if (with_duration) fixed_duration[k] = 0.0;
      continue;
    }
    const double x = states[k];
    const Term& ce = current_end_[k];
    const double p_end = std::exp(ce.log_a - ce.b * x);
    if (fixing_period_[k] >= 0) fixing_bond = p_end;
    double v = ce.weight * p_end / fixing_bond;
    const Term& te = terminal_[k];
    const double p_mat = std::exp(te.log_a - te.b * x);
    v += te.weight * p_mat;
    // Bullet-bond view of the fixed leg: coupon terms plus notional at maturity.
    double bond_pv = p_mat;
    double bond_tw = te.tenor * p_mat;
    for (const Term& ft : fixed_terms_[k]) {
      const double df = std::exp(ft.log_a - ft.b * x);
      v += ft.weight * df;
      if (with_duration) {
        bond_pv += coupon * ft.accrual * df;
        bond_tw += coupon * ft.accrual * ft.tenor * df;
      }
    }
    values[k] = v;
    if (with_duration) fixed_duration[k] = bond_pv > 0.0 ? bond_tw / bond_pv : 0.0;
  }
}

double risk_free_ir01(std::span<const SwapSpec> trades, const DiscountCurve& curve) {
  constexpr double bp = 1e-4;
  const DiscountCurve up = curve.shifted(bp);
  const DiscountCurve down = curve.shifted(-bp);
  double total = 0.0;
  for (const auto& t : trades) {
    SwapPricer p(t);
    total += 0.5 * (p.value_today(up) - p.value_today(down));
  }
  return total;
}

}  // namespace kva
