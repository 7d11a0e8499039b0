#include "vlcqos/markov_onoff.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "vlcqos/numeric.hpp"

namespace vlcqos::markov {

namespace {

void require_theta(double theta, const char* where) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::domain_error(std::string(where) + ": theta must be finite and > 0");
  }
}

// 2x2 matrix with an explicit natural-log scale: value = e^{log_scale} * m.
struct ScaledMat2 {
  std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};  // row-major
  double log_scale = 0.0;

  void renormalize() {
    double big = 0.0;
    for (double v : m) big = std::max(big, std::abs(v));
    if (big > 0.0) {
      for (double& v : m) v /= big;
      log_scale += std::log(big);
    }
  }
};

ScaledMat2 multiply(const ScaledMat2& a, const ScaledMat2& b) {
  ScaledMat2 r;
  r.m = {a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
         a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]};
  r.log_scale = a.log_scale + b.log_scale;
  r.renormalize();
  return r;
}

// Tilted matrix [[(1-g)u, g u], [b, 1-b]] with u = e^{theta*lambda}, stored
// divided by u so entries stay bounded.
ScaledMat2 tilted(const OnOffChain& c, double theta) {
  const double x = theta * c.rate_on;
  const double v = std::exp(-x);
  ScaledMat2 t;
  t.m = {1.0 - c.gamma, c.gamma, c.beta * v, (1.0 - c.beta) * v};
  t.log_scale = x;
  t.renormalize();
  return t;
}

}  // namespace

void OnOffChain::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("OnOffChain.gamma must be in [0, 1]");
  }
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("OnOffChain.beta must be in (0, 1]");
  }
  if (!(rate_on >= 0.0) || !std::isfinite(rate_on)) {
    throw std::invalid_argument("OnOffChain.rate_on must be finite and >= 0");
  }
}

void ServiceAbstraction::validate() const {
  if (!(p_on >= 0.0 && p_on <= 1.0)) {
    throw std::invalid_argument("ServiceAbstraction.p_on must be in [0, 1]");
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("ServiceAbstraction.rho must be finite and > 0");
  }
}

SteadyState steady_state(const OnOffChain& chain) {
  if (!(chain.gamma + chain.beta > 0.0)) {
    throw std::invalid_argument("steady_state: degenerate chain (gamma = beta = 0)");
  }
  chain.validate();
  const double p_on = chain.beta / (chain.gamma + chain.beta);
  return {p_on, chain.gamma / (chain.gamma + chain.beta)};
}

double source_avg_rate(const OnOffChain& chain) {
  return chain.rate_on * steady_state(chain).p_on;
}

double service_log_mgf(const ServiceAbstraction& svc, double theta) {
  require_theta(theta, "service_log_mgf");
  svc.validate();
  return numeric::log_mix_exp(svc.p_on, theta * svc.rho);
}

double source_log_mgf(const OnOffChain& chain, double theta) {
  require_theta(theta, "source_log_mgf");
  chain.validate();
  const double g = chain.gamma;
  const double b = chain.beta;
  const double x = theta * chain.rate_on;
  if (x < 1.0) {
    // Largest eigenvalue minus one, written without the (gamma + beta)
    // cancellation that appears as theta -> 0.
    const double w = std::expm1(x);
    const double disc = (b - g + (1.0 - g) * w) * (b - g + (1.0 - g) * w) +
                        4.0 * g * b * (1.0 + w);
    const double excess =
        w * (2.0 * (b - g) * (1.0 - g) + 4.0 * g * b + (1.0 - g) * (1.0 - g) * w) /
        (std::sqrt(disc) + g + b);
    return std::log1p(0.5 * ((1.0 - g) * w + excess));
  }
  const double v = std::exp(-x);
  const double a = (1.0 - b) * v + (1.0 - g);
  const double d = (1.0 - g) - (1.0 - b) * v;
  const double disc = d * d + 4.0 * g * b * v;
  return x + std::log(0.5 * (a + std::sqrt(disc)));
}

double arrival_log_mgf_finite(const OnOffChain& chain, double theta, std::int64_t t) {
  require_theta(theta, "arrival_log_mgf_finite");
  if (t < 1) throw std::domain_error("arrival_log_mgf_finite: t must be >= 1");
  const auto ss = steady_state(chain);

  ScaledMat2 power;  // identity
  ScaledMat2 base = tilted(chain, theta);
  for (std::int64_t e = t - 1; e > 0; e >>= 1) {
    if (e & 1) power = multiply(power, base);
    if (e > 1) base = multiply(base, base);
  }
  // [p_on p_off] * power * [u, 1]^T, with [u, 1] = u * [1, v].
  const double x = theta * chain.rate_on;
  const double v = std::exp(-x);
  const auto& m = power.m;
  const double inner = ss.p_on * (m[0] + m[1] * v) + ss.p_off * (m[2] + m[3] * v);
  return (power.log_scale + x + std::log(inner)) / static_cast<double>(t);
}

double arrival_log_mgf_sup(const OnOffChain& chain, double theta, std::int64_t t_max) {
  require_theta(theta, "arrival_log_mgf_sup");
  if (t_max < 1) throw std::domain_error("arrival_log_mgf_sup: t_max must be >= 1");
  const auto ss = steady_state(chain);
  const double x = theta * chain.rate_on;
  const double v = std::exp(-x);
  const double g = chain.gamma;
  const double b = chain.beta;

  double best = source_log_mgf(chain, theta);
  // Row vector r (normalised to sum 1) with log scale; value at t is
  // (log_scale + x + ln(r0 + r1 v)) / t.
  double r0 = ss.p_on;
  double r1 = ss.p_off;
  double log_scale = 0.0;
  for (std::int64_t t = 1; t <= t_max; ++t) {
    const double tail = x + std::log(r0 + r1 * v);
    best = std::max(best, (log_scale + tail) / static_cast<double>(t));
    if (t == t_max) break;

    double n0 = r0 * (1.0 - g) + r1 * b * v;
    double n1 = r0 * g + r1 * (1.0 - b) * v;
    const double s = n0 + n1;
    n0 /= s;
    n1 /= s;
    const double step = x + std::log(s);
    const bool settled = std::abs(n0 - r0) <= 1e-15 && std::abs(n1 - r1) <= 1e-15;
    r0 = n0;
    r1 = n1;
    log_scale += step;
    if (settled) {
      // From here on value(t') = (A + step * t') / t', monotone in t'.
      const double next = static_cast<double>(t + 1);
      const double a = log_scale + x + std::log(r0 + r1 * v) - step * next;
      const double at_max = (a + step * static_cast<double>(t_max)) /
                            static_cast<double>(t_max);
      const double at_next = (a + step * next) / next;
      return std::max({best, at_max, at_next});
    }
  }
  return best;
}

}  // namespace vlcqos::markov
