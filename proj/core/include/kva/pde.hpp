#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace kva {

enum class OptionKind { Call, Put };

struct Payoff {
  OptionKind kind = OptionKind::Call;
  double strike = 100.0;
  double operator()(double s) const;
};

enum class CloseOutBasis { RiskFree, Economic };

// Capital as a function of (t, S, V, dV/dS) with V the risk-free value.
using CapitalFunctional = std::function<double(double, double, double, double)>;
// Collateral balance X as a function of (t, S, V).
using CollateralFunctional = std::function<double(double, double, double)>;

// Extended semi-replication problem for a European option on a stock with
// repo rate q_S and dividend yield gamma_S (drift q_S - gamma_S).
struct PdeProblem {
  Payoff payoff;
  double spot = 100.0;
  double maturity = 1.0;
  double sigma = 0.2;
  double r = 0.0;
  double repo = 0.0;      // q_S
  double dividend = 0.0;  // gamma_S
  double lambda_b = 0.0, lambda_c = 0.0;
  double recovery_b = 0.0, recovery_c = 0.0;
  double phi = 0.0;
  double gamma_k = 0.0;
  double s_x = 0.0;
  CapitalFunctional capital;      // empty means K = 0
  CollateralFunctional collateral;  // empty means X = 0
  CloseOutBasis closeout = CloseOutBasis::RiskFree;

  std::size_t n_space = 400;
  std::size_t n_time = 400;
  double width = 6.0;          // half-width of the log-spot grid in units of sigma sqrt(T)
  int rannacher_steps = 2;     // initial Crank-Nicolson steps replaced by implicit half-steps
};

void validate(const PdeProblem& p);

struct PdeSolution {
  std::vector<double> spot_grid;
  std::vector<double> v;      // risk-free value at t = 0
  std::vector<double> v_hat;  // adjusted value at t = 0
  double v_spot = 0.0, v_hat_spot = 0.0, u_spot = 0.0;
  int max_picard_sweeps = 0;

  std::vector<double> u() const;
};

// Crank-Nicolson in log-spot with linear-value (V_SS = 0) edges. V and V-hat
// are stepped together; under the economic close-out the source terms are
// resolved by Picard iteration at each step.
PdeSolution solve_pde(const PdeProblem& problem);

// Black-Scholes value and delta with drift q_S - gamma_S.
double black_scholes_value(const Payoff& h, double s, double tau, double r, double drift, double sigma);
double black_scholes_delta(const Payoff& h, double s, double tau, double r, double drift, double sigma);

struct MonteCarloAdjustment {
  double u = 0.0;
  double stderr = 0.0;
  std::size_t n_paths = 0;
};

// U = -int_0^T e^{-(r + lambda_B + lambda_C) u} E[f(u, S_u)] du by pathwise
// trapezoid on `n_steps` intervals, with V and delta in closed form. Only the
// risk-free close-out is supported.
MonteCarloAdjustment monte_carlo_adjustment(const PdeProblem& problem, std::size_t n_paths, std::size_t n_steps,
                                            std::uint64_t seed);

}  // namespace kva
