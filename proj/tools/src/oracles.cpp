#include "vlcqos/validation/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace vlcqos::oracle {

namespace {

using real = long double;

struct DirectPhy {
  double m;
  double k;   // (mu alpha P (m+1) A L dv^{m+1} g)^2 / (2 pi sigma_n varsigma)^2
  double dv;
  double dc;
  double t_b;  // T * B
};

DirectPhy direct(const phy::PhyConfig& c) {
  const double deg = std::numbers::pi / 180.0;
  const double m = std::log(2.0) / -std::log(std::cos(c.half_intensity_angle_deg * deg));
  const double g = std::pow(c.refractive_index / std::sin(c.fov_deg * deg), 2);
  const double sigma = std::sqrt(c.noise_psd_a2_per_hz * c.bandwidth_hz);
  const double num = c.intensity_constant * c.responsivity_a_per_w * c.avg_power_w *
                     (m + 1.0) * c.pd_area_m2 * c.filter_gain *
                     std::pow(c.vertical_distance_m, m + 1.0) * g;
  const double den = 2.0 * std::numbers::pi * sigma * c.opt_elec_ratio;
  return {m, (num / den) * (num / den), c.vertical_distance_m, c.cell_radius_m,
          c.frame_duration_s * c.bandwidth_hz};
}

// R(d_h) = (TB/2) log2(1 + K / (dv^2 + d_h^2)^{m+3}).
double direct_rate(const DirectPhy& p, double dh) {
  const double snr = p.k / std::pow(p.dv * p.dv + dh * dh, p.m + 3.0);
  return 0.5 * p.t_b * std::log2(1.0 + snr);
}

double direct_on_probability(const DirectPhy& p, double rho) {
  const double x = std::pow(p.k / (std::pow(2.0, 2.0 * rho / p.t_b) - 1.0), 1.0 / (p.m + 3.0));
  const double delta2 = x - p.dv * p.dv;
  return std::clamp(delta2 / (p.dc * p.dc), 0.0, 1.0);
}

}  // namespace

double direct_service_log_mgf(double p_on, double rho, double theta) {
  const real v = std::exp(-static_cast<real>(theta) * rho);
  return static_cast<double>(std::log(p_on * v + (1.0L - p_on)));
}

double log_spectral_radius(double gamma, double beta, double lambda, double theta) {
  // Matrix divided by e^{x}: [[1-g, g], [b v, (1-b) v]].
  const real x = static_cast<real>(theta) * lambda;
  const real v = std::exp(-x);
  const real a11 = 1.0L - gamma, a12 = gamma;
  const real a21 = beta * v, a22 = (1.0L - beta) * v;
  const real tr = a11 + a22;
  const real det = a11 * a22 - a12 * a21;
  const real lmax = tr / 2.0L + std::sqrt(tr * tr / 4.0L - det);
  return static_cast<double>(x + std::log(lmax));
}

double path_enumeration_log_mgf(double gamma, double beta, double lambda, double theta,
                                int t) {
  if (t < 1 || t > 20) throw std::invalid_argument("path enumeration needs 1 <= t <= 20");
  const real p_on = beta / (gamma + beta);
  real total = 0.0L;
  for (std::uint32_t path = 0; path < (1u << t); ++path) {
    real prob = 1.0L;
    int ons = 0;
    for (int i = 0; i < t; ++i) {
      const bool on = (path >> i) & 1u;
      if (i == 0) {
        prob *= on ? p_on : 1.0L - p_on;
      } else {
        const bool prev = (path >> (i - 1)) & 1u;
        if (prev) prob *= on ? 1.0L - gamma : static_cast<real>(gamma);
        else prob *= on ? static_cast<real>(beta) : 1.0L - beta;
      }
      ons += on ? 1 : 0;
    }
    total += prob * std::exp(static_cast<real>(theta) * lambda * ons);
  }
  return static_cast<double>(std::log(total) / t);
}

double bisection_max_arrival_rate(double gamma, double beta, double log_d, double theta) {
  const double target = -log_d;
  auto f = [&](double lambda) {
    return log_spectral_radius(gamma, beta, lambda, theta) - target;
  };
  double lo = 0.0;
  double hi = std::max(1.0, 2.0 * (target - std::log1p(-std::min(gamma, 0.999999))) / theta);
  while (f(hi) < 0.0) hi *= 2.0;
  for (int i = 0; i < 400 && hi - lo > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return beta / (gamma + beta) * 0.5 * (lo + hi);
}

GridMax dense_log_grid_max(const std::function<double(double)>& f, double lo, double hi,
                           std::int64_t n) {
  GridMax best{lo, -std::numeric_limits<double>::infinity()};
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(n - 1);
  for (std::int64_t i = 0; i < n; ++i) {
    const double x = std::exp(a + step * static_cast<double>(i));
    const double v = f(x);
    if (v > best.value) best = {x, v};
  }
  return best;
}

GridMax grid_min_fixed_rate(const phy::PhyConfig& cfg, double theta, std::int64_t n) {
  const auto p = direct(cfg);
  const double rho_min = direct_rate(p, p.dc);
  const double rho_max = direct_rate(p, 0.0);
  GridMax best{rho_min, std::numeric_limits<double>::infinity()};
  for (std::int64_t i = 0; i < n; ++i) {
    const double rho = rho_min + (rho_max - rho_min) * static_cast<double>(i) /
                                     static_cast<double>(n);
    const real pon = rho <= rho_min ? 1.0L : direct_on_probability(p, rho);
    const double v = static_cast<double>(
        std::log(pon * std::exp(-static_cast<real>(theta) * rho) + (1.0L - pon)));
    if (v < best.value) best = {rho, v};
  }
  return best;
}

MonteCarloMean monte_carlo_reference_factor(const phy::PhyConfig& cfg, double theta,
                                            std::int64_t samples, std::uint64_t seed) {
  const auto p = direct(cfg);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  real sum = 0.0L, sum_sq = 0.0L;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double dh = p.dc * std::sqrt(u(rng));
    const real v = std::exp(-static_cast<real>(theta) * direct_rate(p, dh));
    sum += v;
    sum_sq += v * v;
  }
  const real n = static_cast<real>(samples);
  const real mean = sum / n;
  const real var = std::max(sum_sq / n - mean * mean, 0.0L);
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(var / n))};
}

double dense_grid_qc(double p_on, double rho, double eps, double c, std::int64_t n) {
  auto obj = [&](double theta) {
    const real lm = std::log(p_on * std::exp(-static_cast<real>(theta) * rho) + (1.0L - p_on));
    const real arg = -static_cast<real>(eps) * (lm + static_cast<real>(theta) * c);
    if (!(arg > 0.0L)) return -std::numeric_limits<double>::infinity();
    return static_cast<double>(std::log(arg) / theta);
  };
  const auto best = dense_log_grid_max(obj, 1e-12 / c, 1e3 / c, n);
  return std::max(0.0, -best.value);
}

double dense_grid_qa(double gamma, double beta, double lambda, double eps, double c,
                     std::int64_t t_max, std::int64_t n) {
  const real p_on = beta / (gamma + beta);
  auto sup_t = [&](double theta) {
    const real u = std::exp(static_cast<real>(theta) * lambda);
    real best = log_spectral_radius(gamma, beta, lambda, theta);
    // Forward recursion on the unnormalised row vector, rescaled every step.
    real r0 = p_on, r1 = 1.0L - p_on, log_scale = 0.0L;
    for (std::int64_t t = 1; t <= t_max; ++t) {
      best = std::max(best, (log_scale + std::log(r0 * u + r1)) / t);
      const real n0 = r0 * (1.0L - gamma) * u + r1 * beta;
      const real n1 = r0 * gamma * u + r1 * (1.0L - beta);
      const real s = n0 + n1;
      r0 = n0 / s;
      r1 = n1 / s;
      log_scale += std::log(s);
    }
    return best;
  };
  auto obj = [&](double theta) {
    const real arg = static_cast<real>(eps) * (static_cast<real>(theta) * c - sup_t(theta));
    if (!(arg > 0.0L)) return -std::numeric_limits<double>::infinity();
    return static_cast<double>(std::log(arg) / theta);
  };
  const auto best = dense_log_grid_max(obj, 1e-9 / c, 10.0 / lambda, n);
  return std::max(0.0, -best.value);
}

}  // namespace vlcqos::oracle
