#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kva/curve.hpp"

namespace kva {

// One-factor Hull-White model in shifted form r(t) = x(t) + alpha(t) with
// dx = -a x dt + sigma dW, x(0) = 0. alpha is fitted so that the model
// reproduces the initial curve exactly.
class HullWhiteModel {
 public:
  HullWhiteModel(DiscountCurve curve, double mean_reversion, double volatility);

  const DiscountCurve& curve() const { return curve_; }
  double mean_reversion() const { return a_; }
  double volatility() const { return sigma_; }

  HullWhiteModel with_curve(DiscountCurve curve) const {
    return HullWhiteModel(std::move(curve), a_, sigma_);
  }

  // B(t,T) = (1 - e^{-a(T-t)}) / a
  double bond_b(double t, double T) const;
  // Var[x(t)]
  double state_variance(double t) const;
  // Var[∫_0^t x(s) ds]
  double integrated_state_variance(double t) const;
  // alpha(t) = f(0,t) + sigma^2/(2a^2) (1 - e^{-at})^2
  double alpha(double t) const;

  double short_rate(double t, double x) const { return x + alpha(t); }
  double state_from_rate(double t, double r) const { return r - alpha(t); }

  // ln P(t,T) + B(t,T) x(t): the deterministic part of the affine bond.
  double log_bond_intercept(double t, double T) const;
  // Affine bond price P(t,T) given the state x(t).
  double bond_from_state(double t, double T, double x) const;
  // Affine bond price P(t,T) given the short rate r(t).
  double zero_coupon_bond(double t, double T, double short_rate) const;

 private:
  DiscountCurve curve_;
  double a_;
  double sigma_;
};

// Simulated short-rate paths on a common grid. Row-major: path p, time k at
// index p * grid.size() + k.
struct PathSet {
  std::vector<double> time_grid;
  std::size_t n_paths = 0;
  std::vector<double> short_rate;
  std::vector<double> bank_account_discount;
  std::uint64_t seed = 0;

  std::span<const double> rates(std::size_t path) const {
    return {short_rate.data() + path * time_grid.size(), time_grid.size()};
  }
  std::span<const double> discounts(std::size_t path) const {
    return {bank_account_discount.data() + path * time_grid.size(), time_grid.size()};
  }
};

// Exact joint simulation of (x, ∫x) on a fixed grid. Each path draws from
// its own generator seeded from (seed, path index), so path i does not
// depend on how many paths are requested or how they are scheduled.
class PathGenerator {
 public:
  PathGenerator(const HullWhiteModel& model, std::vector<double> grid);

  const std::vector<double>& grid() const { return grid_; }
  const HullWhiteModel& model() const { return model_; }

  // Fills state x, short rate and bank-account discount for one path. Each
  // span must have grid().size() entries; `state` may be empty.
  void generate(std::uint64_t seed, std::size_t path_index, std::span<double> state,
                std::span<double> rate, std::span<double> discount) const;

 private:
  struct Step {
    double decay;     // e^{-a dt}
    double b;         // (1 - e^{-a dt}) / a
    double l11, l21, l22;  // Cholesky factor of the (x, ∫x) increment covariance
  };
  HullWhiteModel model_;
  std::vector<double> grid_;
  std::vector<Step> steps_;
  std::vector<double> alpha_;
  std::vector<double> log_df_;
  std::vector<double> half_var_int_;
};

PathSet simulate_paths(const HullWhiteModel& model, std::span<const double> grid,
                       std::size_t n_paths, std::uint64_t seed);

// Seed for the generator of one path; a SplitMix64 mix of (seed, index).
std::uint64_t path_seed(std::uint64_t seed, std::size_t path_index);

// Uniform grid 0, step, 2 step, ..., horizon (horizon included).
std::vector<double> uniform_grid(double horizon, int steps);

}  // namespace kva
