#include "kva/pde.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <random>

#include "kva/error.hpp"
#include "kva/parallel.hpp"
#include "kva/short_rate.hpp"

namespace kva {

namespace {
constexpr const char* kModule = "pde_solver";

// Close-out amounts and hedging error at close-out value m.
double source_term(const PdeProblem& p, double m, double x, double k) {
  const double net = m - x;
  const double pos = std::max(net, 0.0), neg = std::min(net, 0.0);
  const double g_b = pos + p.recovery_b * neg + x;
  const double g_c = p.recovery_c * pos + neg + x;
  const double eps_h = (1.0 - p.recovery_b) * (pos - p.phi * k);
  return p.lambda_c * g_c + p.lambda_b * g_b - p.lambda_b * eps_h - p.s_x * x - p.gamma_k * k + p.r * p.phi * k;
}

struct Tridiagonal {
  std::vector<double> a, b, c;  // sub, diag, super
  explicit Tridiagonal(std::size_t n) : a(n), b(n), c(n) {}

  void solve(std::vector<double>& d) const {
    const std::size_t n = b.size();
    std::vector<double> cp(n);
    double beta = b[0];
    d[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
      cp[i - 1] = c[i - 1] / beta;
      beta = b[i] - a[i] * cp[i - 1];
      if (beta == 0.0) throw NumericalError(kModule, "singular tridiagonal system");
      d[i] = (d[i] - a[i] * d[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= cp[i] * d[i + 1];
  }
};

// Spatial operator L in log-spot on interior nodes:
// (L v)_j = lo v_{j-1} + mid v_j + hi v_{j+1}.
struct Operator {
  double lo, mid, hi;
};

Operator make_operator(double sigma, double drift, double kill, double dx) {
  const double diff = 0.5 * sigma * sigma / (dx * dx);
  const double conv = (drift - 0.5 * sigma * sigma) / (2.0 * dx);
  return {diff - conv, -2.0 * diff - kill, diff + conv};
}

// One theta step backward: (I - theta dt L) v_new = (I + (1-theta) dt L) v_old
// + dt [theta src_new + (1-theta) src_old] on interior nodes, with the edge
// rows enforcing linearity in S.
class Stepper {
 public:
  Stepper(const Operator& op, const std::vector<double>& s) : op_(op) {
    const std::size_t n = s.size();
    rho_lo_ = (s[0] - s[1]) / (s[1] - s[2]);
    rho_hi_ = (s[n - 1] - s[n - 2]) / (s[n - 2] - s[n - 3]);
  }

  void step(std::vector<double>& v, const std::vector<double>& src_new, const std::vector<double>& src_old,
            double dt, double theta) const {
    const std::size_t n = v.size();
    Tridiagonal m(n);
    std::vector<double> rhs(n, 0.0);
    const double e = (1.0 - theta) * dt;
    for (std::size_t j = 1; j + 1 < n; ++j) {
      m.a[j] = -theta * dt * op_.lo;
      m.b[j] = 1.0 - theta * dt * op_.mid;
      m.c[j] = -theta * dt * op_.hi;
      rhs[j] = v[j] + e * (op_.lo * v[j - 1] + op_.mid * v[j] + op_.hi * v[j + 1]) +
               dt * (theta * src_new[j] + (1.0 - theta) * src_old[j]);
    }
    // Edge rows v_0 - (1 + rho) v_1 + rho v_2 = 0; the v_2 (v_{n-3}) entry is
    // eliminated with the adjacent interior row.
    {
      const double rho = rho_lo_;
      const double f = rho / m.c[1];
      m.b[0] = 1.0 - f * m.a[1];
      m.c[0] = -(1.0 + rho) - f * m.b[1];
      rhs[0] = -f * rhs[1];
    }
    {
      const double rho = rho_hi_;
      const double f = rho / m.a[n - 2];
      m.b[n - 1] = 1.0 - f * m.c[n - 2];
      m.a[n - 1] = -(1.0 + rho) - f * m.b[n - 2];
      rhs[n - 1] = -f * rhs[n - 2];
    }
    m.solve(rhs);
    v.swap(rhs);
  }

 private:
  Operator op_;
  double rho_lo_, rho_hi_;
};

std::vector<double> delta_of(const std::vector<double>& v, const std::vector<double>& s) {
  const std::size_t n = v.size();
  std::vector<double> d(n);
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (v[j + 1] - v[j - 1]) / (s[j + 1] - s[j - 1]);
  d[0] = (v[1] - v[0]) / (s[1] - s[0]);
  d[n - 1] = (v[n - 1] - v[n - 2]) / (s[n - 1] - s[n - 2]);
  return d;
}

}  // namespace

double Payoff::operator()(double s) const {
  return kind == OptionKind::Call ? std::max(s - strike, 0.0) : std::max(strike - s, 0.0);
}

void validate(const PdeProblem& p) {
  if (!(p.sigma > 0.0)) throw InputError(kModule, "sigma must be > 0");
  if (!(p.maturity > 0.0)) throw InputError(kModule, "maturity must be > 0");
  if (!(p.spot > 0.0) || !(p.payoff.strike > 0.0)) throw InputError(kModule, "spot and strike must be > 0");
  if (p.n_space < 5 || p.n_time < 1) throw InputError(kModule, "grid too small");
  if (!(p.width > 0.0)) throw InputError(kModule, "grid width must be > 0");
  if (!(p.phi >= 0.0 && p.phi <= 1.0)) throw InputError(kModule, "phi must be in [0,1]");
  if (p.lambda_b < 0.0 || p.lambda_c < 0.0) throw InputError(kModule, "intensities must be >= 0");
  if (p.rannacher_steps < 0) throw InputError(kModule, "rannacher steps must be >= 0");
}

std::vector<double> PdeSolution::u() const {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v_hat[i] - v[i];
  return out;
}

PdeSolution solve_pde(const PdeProblem& p) {
  validate(p);
  const std::size_t n = p.n_space | 1;  // odd, so the spot is the centre node
  const std::size_t centre = (n - 1) / 2;
  const double half = p.width * p.sigma * std::sqrt(p.maturity);
  const double dx = 2.0 * half / static_cast<double>(n - 1);
  const double x0 = std::log(p.spot);

  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = std::exp(x0 + (static_cast<double>(j) - centre) * dx);

  const double drift = p.repo - p.dividend;
  const Stepper risk_free(make_operator(p.sigma, drift, p.r, dx), s);
  const Stepper adjusted(make_operator(p.sigma, drift, p.r + p.lambda_b + p.lambda_c, dx), s);

  std::vector<double> v(n), vh(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = vh[j] = p.payoff(s[j]);

  auto sources = [&](double t, const std::vector<double>& vv, const std::vector<double>& mm) {
    const auto dv = delta_of(vv, s);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double k = p.capital ? p.capital(t, s[j], vv[j], dv[j]) : 0.0;
      const double x = p.collateral ? p.collateral(t, s[j], vv[j]) : 0.0;
      out[j] = source_term(p, mm[j], x, k);
    }
    return out;
  };
  const bool economic = p.closeout == CloseOutBasis::Economic;

  // Step schedule: optional implicit half-steps first, then Crank-Nicolson.
  struct Sub { double dt; double theta; };
  std::vector<Sub> schedule;
  const double dt = p.maturity / static_cast<double>(p.n_time);
  const std::size_t smoothed = std::min<std::size_t>(p.rannacher_steps, p.n_time);
  for (std::size_t i = 0; i < smoothed; ++i) schedule.insert(schedule.end(), 2, Sub{0.5 * dt, 1.0});
  for (std::size_t i = smoothed; i < p.n_time; ++i) schedule.push_back({dt, 0.5});

  PdeSolution sol;
  double t = p.maturity;
  for (const auto& st : schedule) {
    const double t_new = std::max(0.0, t - st.dt);
    const auto v_old = v;
    const auto src_old = sources(t, v_old, economic ? vh : v_old);
    risk_free.step(v, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), st.dt, st.theta);

    const auto vh_old = vh;
    if (!economic) {
      adjusted.step(vh, sources(t_new, v, v), src_old, st.dt, st.theta);
    } else {
      std::vector<double> guess = vh_old;
      int sweep = 0;
      for (;; ++sweep) {
        if (sweep >= 20) throw NumericalError(kModule, "Picard iteration did not converge in 20 sweeps");
        std::vector<double> next = vh_old;
        adjusted.step(next, sources(t_new, v, guess), src_old, st.dt, st.theta);
        double change = 0.0, scale = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
          change = std::max(change, std::abs(next[j] - guess[j]));
          scale = std::max(scale, std::abs(next[j]));
        }
        guess.swap(next);
        if (change <= 1e-10 * scale) break;
      }
      sol.max_picard_sweeps = std::max(sol.max_picard_sweeps, sweep + 1);
      vh.swap(guess);
    }
    t = t_new;
  }

  sol.spot_grid = s;
  sol.v = v;
  sol.v_hat = vh;
  sol.v_spot = v[centre];
  sol.v_hat_spot = vh[centre];
  sol.u_spot = vh[centre] - v[centre];
  return sol;
}

double black_scholes_value(const Payoff& h, double s, double tau, double r, double drift, double sigma) {
  if (tau <= 0.0) return h(s);
  const boost::math::normal n;
  const double sq = sigma * std::sqrt(tau);
  const double d1 = (std::log(s / h.strike) + (drift + 0.5 * sigma * sigma) * tau) / sq;
  const double d2 = d1 - sq;
  const double fwd = s * std::exp((drift - r) * tau);
  const double df = std::exp(-r * tau);
  if (h.kind == OptionKind::Call) return fwd * cdf(n, d1) - h.strike * df * cdf(n, d2);
  return h.strike * df * cdf(n, -d2) - fwd * cdf(n, -d1);
}

double black_scholes_delta(const Payoff& h, double s, double tau, double r, double drift, double sigma) {
  if (tau <= 0.0) {
    if (h.kind == OptionKind::Call) return s > h.strike ? 1.0 : 0.0;
    return s < h.strike ? -1.0 : 0.0;
  }
  const boost::math::normal n;
  const double d1 = (std::log(s / h.strike) + (drift + 0.5 * sigma * sigma) * tau) / (sigma * std::sqrt(tau));
  const double carry = std::exp((drift - r) * tau);
  return h.kind == OptionKind::Call ? carry * cdf(n, d1) : carry * (cdf(n, d1) - 1.0);
}

MonteCarloAdjustment monte_carlo_adjustment(const PdeProblem& p, std::size_t n_paths, std::size_t n_steps,
                                            std::uint64_t seed) {
  validate(p);
  if (p.closeout != CloseOutBasis::RiskFree)
    throw InputError(kModule, "Monte Carlo adjustment supports the risk-free close-out only");
  if (n_paths < 2 || n_steps < 1) throw InputError(kModule, "need at least 2 paths and 1 step");

  const double drift = p.repo - p.dividend;
  const double dt = p.maturity / static_cast<double>(n_steps);
  const double kill = p.r + p.lambda_b + p.lambda_c;
  const double step_mean = (drift - 0.5 * p.sigma * p.sigma) * dt;
  const double step_sd = p.sigma * std::sqrt(dt);

  // Source of the U equation: U_t + L U - kill U = f.
  auto f = [&](double t, double s) {
    const double tau = p.maturity - t;
    const double v = black_scholes_value(p.payoff, s, tau, p.r, drift, p.sigma);
    const double k = p.capital ? p.capital(t, s, v, black_scholes_delta(p.payoff, s, tau, p.r, drift, p.sigma)) : 0.0;
    const double x = p.collateral ? p.collateral(t, s, v) : 0.0;
    return kill * v - p.r * v - source_term(p, v, x, k);
  };

  struct Moments { double sum = 0.0, sum2 = 0.0; };
  auto blocks = map_blocks<Moments>(n_paths, [&](std::size_t begin, std::size_t end) {
    Moments mo;
    std::normal_distribution<double> z;
    for (std::size_t i = begin; i < end; ++i) {
      std::mt19937_64 rng(path_seed(seed, i));
      double x = std::log(p.spot);
      double acc = 0.5 * f(0.0, p.spot);
      for (std::size_t k = 1; k <= n_steps; ++k) {
        x += step_mean + step_sd * z(rng);
        const double t = k * dt;
        const double w = k == n_steps ? 0.5 : 1.0;
        acc += w * std::exp(-kill * t) * f(t, std::exp(x));
      }
      const double u = -acc * dt;
      mo.sum += u;
      mo.sum2 += u * u;
    }
    return mo;
  });
  double sum = 0.0, sum2 = 0.0;
  for (const auto& b : blocks) {
    sum += b.sum;
    sum2 += b.sum2;
  }
  const double nn = static_cast<double>(n_paths);
  const double mean = sum / nn;
  const double var = std::max(0.0, (sum2 / nn - mean * mean) * nn / (nn - 1.0));
  return {mean, std::sqrt(var / nn), n_paths};
}

}  // namespace kva
