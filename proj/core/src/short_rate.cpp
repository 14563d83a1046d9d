#include "kva/short_rate.hpp"

#include <cmath>
#include <random>
#include <string>

#include "kva/error.hpp"
#include "kva/parallel.hpp"

namespace kva {

namespace {
constexpr const char* kModule = "curve_model";

void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw InputError(kModule, "empty simulation grid");
  if (grid.front() != 0.0) throw InputError(kModule, "simulation grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw InputError(kModule, "simulation grid must be strictly increasing");
}
}  // namespace

HullWhiteModel::HullWhiteModel(DiscountCurve curve, double mean_reversion, double volatility)
    : curve_(std::move(curve)), a_(mean_reversion), sigma_(volatility) {
  if (!(a_ > 0.0)) throw InputError(kModule, "mean reversion must be > 0");
  if (!(sigma_ >= 0.0)) throw InputError(kModule, "volatility must be >= 0");
}

double HullWhiteModel::bond_b(double t, double T) const {
  return -std::expm1(-a_ * (T - t)) / a_;
}

double HullWhiteModel::state_variance(double t) const {
  return sigma_ * sigma_ * (-std::expm1(-2.0 * a_ * t)) / (2.0 * a_);
}

double HullWhiteModel::integrated_state_variance(double t) const {
  const double b = -std::expm1(-a_ * t) / a_;
  const double c = -std::expm1(-2.0 * a_ * t) / (2.0 * a_);
  return sigma_ * sigma_ / (a_ * a_) * (t - 2.0 * b + c);
}

double HullWhiteModel::alpha(double t) const {
  const double g = -std::expm1(-a_ * t);
  return curve_.forward(t) + sigma_ * sigma_ / (2.0 * a_ * a_) * g * g;
}

double HullWhiteModel::bond_from_state(double t, double T, double x) const {
  if (t < 0.0) throw InputError(kModule, "negative bond observation time");
  if (T < t) throw InputError(kModule, "bond maturity before observation time");
  if (T == t) return 1.0;
  return std::exp(log_bond_intercept(t, T) - bond_b(t, T) * x);
}

double HullWhiteModel::log_bond_intercept(double t, double T) const {
  // 1/2 [V(t,T) - V(0,T) + V(0,t)] with V the variance of ∫x over the interval
  const double b = bond_b(t, T);
  const double g = -std::expm1(-a_ * t);
  return curve_.log_discount(t) - curve_.log_discount(T) - 0.5 * b * b * state_variance(t) -
         b * sigma_ * sigma_ / (2.0 * a_ * a_) * g * g;
}

double HullWhiteModel::zero_coupon_bond(double t, double T, double short_rate) const {
  if (T < t) throw InputError(kModule, "bond maturity before observation time");
  return bond_from_state(t, T, state_from_rate(t, short_rate));
}

std::uint64_t path_seed(std::uint64_t seed, std::size_t path_index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(seed ^ mix(static_cast<std::uint64_t>(path_index) + 1));
}

std::vector<double> uniform_grid(double horizon, int steps) {
  if (steps < 1 || !(horizon > 0.0)) throw InputError(kModule, "invalid uniform grid");
  std::vector<double> g(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) g[i] = horizon * i / steps;
  g.back() = horizon;
  return g;
}

PathGenerator::PathGenerator(const HullWhiteModel& model, std::vector<double> grid)
    : model_(model), grid_(std::move(grid)) {
  validate_grid(grid_);
  const double a = model_.mean_reversion();
  const double s2 = model_.volatility() * model_.volatility();
  steps_.resize(grid_.size());
  for (std::size_t k = 1; k < grid_.size(); ++k) {
    const double dt = grid_[k] - grid_[k - 1];
    Step st{};
    st.decay = std::exp(-a * dt);
    st.b = -std::expm1(-a * dt) / a;
    const double c2 = -std::expm1(-2.0 * a * dt) / (2.0 * a);
    const double var_x = s2 * c2;
    const double var_i = s2 / (a * a) * (dt - 2.0 * st.b + c2);
    const double one_minus = -std::expm1(-a * dt);
    const double cov = s2 / (2.0 * a * a) * one_minus * one_minus;
    if (var_x > 0.0) {
      st.l11 = std::sqrt(var_x);
      st.l21 = cov / st.l11;
      st.l22 = std::sqrt(std::max(0.0, var_i - st.l21 * st.l21));
    }
    steps_[k] = st;
  }
  alpha_.resize(grid_.size());
  log_df_.resize(grid_.size());
  half_var_int_.resize(grid_.size());
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    alpha_[k] = model_.alpha(grid_[k]);
    log_df_[k] = model_.curve().log_discount(grid_[k]);
    half_var_int_[k] = 0.5 * model_.integrated_state_variance(grid_[k]);
  }
}

void PathGenerator::generate(std::uint64_t seed, std::size_t path_index, std::span<double> state,
                             std::span<double> rate, std::span<double> discount) const {
  const std::size_t n = grid_.size();
  if (rate.size() != n || discount.size() != n || (!state.empty() && state.size() != n))
    throw InputError(kModule, "path buffer size does not match grid");
  std::mt19937_64 rng(path_seed(seed, path_index));
  std::normal_distribution<double> normal(0.0, 1.0);
  double x = 0.0;
  double integral = 0.0;
  if (!state.empty()) state[0] = 0.0;
  rate[0] = alpha_[0];
  discount[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    const Step& st = steps_[k];
    const double z1 = normal(rng);
    const double z2 = normal(rng);
    const double x_next = x * st.decay + st.l11 * z1;
    integral += x * st.b + st.l21 * z1 + st.l22 * z2;
    x = x_next;
    if (!state.empty()) state[k] = x;
    rate[k] = x + alpha_[k];
    // D(t) = P(0,t) exp(-∫x - Var/2) is an exact martingale discount.
    discount[k] = std::exp(-log_df_[k] - integral - half_var_int_[k]);
  }
}

PathSet simulate_paths(const HullWhiteModel& model, std::span<const double> grid,
                       std::size_t n_paths, std::uint64_t seed) {
  if (n_paths == 0) throw InputError(kModule, "nPaths must be >= 1");
  PathGenerator gen(model, std::vector<double>(grid.begin(), grid.end()));
  PathSet out;
  out.time_grid = gen.grid();
  out.n_paths = n_paths;
  out.seed = seed;
  const std::size_t n = grid.size();
  out.short_rate.resize(n_paths * n);
  out.bank_account_discount.resize(n_paths * n);
  parallel_for_blocks(n_paths, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      gen.generate(seed, p, {}, {out.short_rate.data() + p * n, n},
                   {out.bank_account_discount.data() + p * n, n});
    }
  });
  return out;
}

}  // namespace kva
