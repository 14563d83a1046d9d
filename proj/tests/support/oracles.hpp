#pragma once

// Reference evaluations written directly from the published formulas, with no
// calls into the library. Used as oracles by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Inverse normal CDF by bisection; slow but unambiguous.
inline double norm_inv(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (norm_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Spreadsheet-style IRB weight, transcribed term by term.
inline double irb_weight(double pd_in, double lgd, double m) {
  const double pd = pd_in < 0.0003 ? 0.0003 : pd_in;
  const double e50 = std::exp(-50.0);
  const double epd = std::exp(-50.0 * pd);
  const double rho = 0.12 * (1.0 - epd) / (1.0 - e50) + 0.24 * (1.0 - (1.0 - epd) / (1.0 - e50));
  const double lnpd = std::log(pd);
  const double b = (0.11852 - 0.05478 * lnpd) * (0.11852 - 0.05478 * lnpd);
  const double g = norm_inv(pd) / std::sqrt(1.0 - rho) + norm_inv(0.999) * std::sqrt(rho / (1.0 - rho));
  const double ma = (1.0 + (m - 2.5) * b) / (1.0 - 1.5 * b);
  return lgd * (norm_cdf(g) - pd) * ma;
}

struct CemLeg {
  double value, notional, residual;
};

inline double cem_ead(const std::vector<CemLeg>& legs, bool floor_rc = true) {
  double net = 0.0, gross_pos = 0.0, gross_addon = 0.0;
  for (const auto& l : legs) {
    if (l.residual <= 0.0) continue;
    net += l.value;
    if (l.value > 0.0) gross_pos += l.value;
    double f = 0.0;
    if (l.residual > 5.0) f = 0.015;
    else if (l.residual > 1.0) f = 0.005;
    gross_addon += f * l.notional;
  }
  const double ngr = gross_pos == 0.0 ? 1.0 : (net > 0.0 ? net : 0.0) / gross_pos;
  const double rc = floor_rc ? (net > 0.0 ? net : 0.0) : net;
  return rc + 0.4 * gross_addon + 0.6 * ngr * gross_addon;
}

struct CvaName {
  double w, m, ead, mh, b;
};

inline double cva_std_full(const std::vector<CvaName>& names, double h) {
  double s1 = 0.0, s2 = 0.0;
  for (const auto& n : names) {
    const double disc = (1.0 - std::exp(-0.05 * n.m)) / (0.05 * n.m);
    const double x = n.m * n.ead * disc - n.mh * n.b;
    s1 += 0.5 * n.w * x;
    s2 += 0.75 * n.w * n.w * x * x;
  }
  return 2.33 * std::sqrt(h) * std::sqrt(s1 * s1 + s2);
}

inline double cva_std_large_n(double w, double m, double ead, double h) {
  return 2.33 / 2.0 * std::sqrt(h) * w * m * ead * (1.0 - std::exp(-0.05 * m)) / (0.05 * m);
}

inline double regulatory_cva(const std::vector<double>& s, const std::vector<double>& t, double lgd,
                             const std::vector<double>& ee, const std::vector<double>& d) {
  double total = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    double dp = std::exp(-s[i - 1] * t[i - 1] / lgd) - std::exp(-s[i] * t[i] / lgd);
    if (dp < 0.0) dp = 0.0;
    total += dp * (ee[i - 1] * d[i - 1] + ee[i] * d[i]) / 2.0;
  }
  return lgd * total;
}

inline double regulatory_cs01(const std::vector<double>& s, const std::vector<double>& t, double lgd,
                              const std::vector<double>& ee, const std::vector<double>& d, std::size_t i) {
  return 0.0001 * t[i] * std::exp(-s[i] * t[i] / lgd) * (ee[i - 1] * d[i - 1] + ee[i + 1] * d[i + 1]) / 2.0;
}

// Hull-White bond in short-rate form with a flat initial curve z:
// P(t,T) = A e^{-B r}, ln A = -z(T-t) + B z - sigma^2/(4a) (1 - e^{-2at}) B^2.
inline double hw_bond_flat(double z, double a, double sigma, double t, double big_t, double r) {
  const double b = (1.0 - std::exp(-a * (big_t - t))) / a;
  const double ln_a = -z * (big_t - t) + b * z - sigma * sigma / (4.0 * a) * (1.0 - std::exp(-2.0 * a * t)) * b * b;
  return std::exp(ln_a - b * r);
}

// Black-Scholes call with continuous carry.
inline double bs_call(double s, double k, double tau, double r, double q, double sigma) {
  const double d1 = (std::log(s / k) + (r - q + 0.5 * sigma * sigma) * tau) / (sigma * std::sqrt(tau));
  const double d2 = d1 - sigma * std::sqrt(tau);
  return s * std::exp(-q * tau) * norm_cdf(d1) - k * std::exp(-r * tau) * norm_cdf(d2);
}

// Trapezoid of c e^{-k u} on n equal steps over [0, T], in closed form via
// the geometric series.
inline double trapezoid_exp(double c, double k, double big_t, int n) {
  const double dt = big_t / n;
  const double q = std::exp(-k * dt);
  const double qn = std::exp(-k * big_t);
  const double sum = (1.0 - qn) / (1.0 - q);  // q^0 + ... + q^{n-1}
  return c * dt * (sum - 0.5 + 0.5 * qn);
}

// Maturity ladder, hand-coded for the tests' simple positions: returns the
// charge for one long and one short weighted position in different zones.
inline double two_zone_charge(double weighted_long, double weighted_short, bool zones_one_and_three) {
  const double matched = std::min(weighted_long, weighted_short);
  const double rate = zones_one_and_three ? 1.0 : 0.4;
  return rate * matched + std::abs(weighted_long - weighted_short);
}

// Brute-force Hull-White simulation: Euler on x with a fine step, with its
// own generator and normal sampler, bank account by trapezoid of r.
struct BruteForcePaths {
  std::vector<double> times;           // coarse output times
  std::vector<std::vector<double>> r;  // [path][output]
  std::vector<std::vector<double>> d;  // [path][output]
};

inline BruteForcePaths simulate_hw_flat(double z, double a, double sigma, const std::vector<double>& out_times,
                                        int steps_per_year, std::size_t n_paths, std::uint32_t seed) {
  BruteForcePaths res;
  res.times = out_times;
  std::minstd_rand gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto gauss = [&] {
    // Box-Muller
    double u1 = u(gen);
    while (u1 <= 1e-300) u1 = u(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u(gen));
  };
  const double dt = 1.0 / steps_per_year;
  auto alpha = [&](double t) {
    const double e = 1.0 - std::exp(-a * t);
    return z + sigma * sigma / (2.0 * a * a) * e * e;
  };
  for (std::size_t p = 0; p < n_paths; ++p) {
    std::vector<double> rp, dp;
    double x = 0.0, t = 0.0, integral = 0.0;
    double r_prev = alpha(0.0);
    std::size_t next = 0;
    while (next < out_times.size() && out_times[next] <= 1e-12) {
      rp.push_back(r_prev);
      dp.push_back(1.0);
      ++next;
    }
    while (next < out_times.size()) {
      x += -a * x * dt + sigma * std::sqrt(dt) * gauss();
      t += dt;
      const double r_now = x + alpha(t);
      integral += 0.5 * dt * (r_prev + r_now);
      r_prev = r_now;
      if (std::abs(t - out_times[next]) < 0.5 * dt) {
        rp.push_back(r_now);
        dp.push_back(std::exp(-integral));
        ++next;
      }
    }
    res.r.push_back(std::move(rp));
    res.d.push_back(std::move(dp));
  }
  return res;
}

}  // namespace oracle
