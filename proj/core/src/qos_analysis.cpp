#include "vlcqos/qos_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vlcqos/numeric.hpp"

namespace vlcqos::qos {

namespace {

constexpr std::size_t kRateGridPoints = 2048;
constexpr double kRateTolerance = 1e-6;    // relative to rho_max
constexpr double kRateUpperGuard = 1e-9;   // rho < rho_max * (1 - guard)
constexpr int kEdgeSegments = 40;  // innermost edge piece is d_c^2 * 2^-40 wide
constexpr double kQuadratureTolerance = 1e-9;
constexpr double kQuadratureFloor = 1e-14;

void require_theta(double theta, const char* where) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::domain_error(std::string(where) + ": theta must be finite and > 0");
  }
}

}  // namespace

QosTarget::QosTarget(double theta) : theta_(theta) {
  require_theta(theta, "QosTarget");
}

ArrivalRate max_avg_arrival_rate_log(const markov::OnOffChain& source,
                                     double log_d, double theta) {
  require_theta(theta, "max_avg_arrival_rate");
  const auto ss = markov::steady_state(source);
  if (std::isnan(log_d) || log_d == -std::numeric_limits<double>::infinity()) {
    return ArrivalRate::infeasible();
  }
  const double g = source.gamma;
  const double b = source.beta;
  // With E = 1 - D the log argument
  //   [1 - (1-b) D] / [(1-g) D - (1-g-b) D^2]
  // factors as (b + (1-b) E) / (D (b + (1-g-b) E)).
  const double e = -std::expm1(log_d);
  const double numer = b + (1.0 - b) * e;
  const double denom_tail = b + (1.0 - g - b) * e;
  if (!(numer > 0.0) || !(denom_tail > 0.0)) return ArrivalRate::infeasible();
  const double log_arg = std::log1p(g * e / denom_tail) - log_d;
  if (!std::isfinite(log_arg)) return ArrivalRate::infeasible();
  return {true, ss.p_on * log_arg / theta};
}

ArrivalRate max_avg_arrival_rate(const markov::OnOffChain& source, double d,
                                 double theta) {
  if (!(d > 0.0 && d < 1.0)) {
    throw std::domain_error("max_avg_arrival_rate: D must lie in (0, 1)");
  }
  return max_avg_arrival_rate_log(source, std::log(d), theta);
}

ArrivalRate max_avg_arrival_rate(const markov::OnOffChain& source,
                                 const markov::ServiceAbstraction& svc,
                                 double theta) {
  return max_avg_arrival_rate_log(source, markov::service_log_mgf(svc, theta), theta);
}

double effective_capacity(const markov::ServiceAbstraction& svc, double theta) {
  return -markov::service_log_mgf(svc, theta) / theta;
}

RateOptimum optimize_fixed_rate(const phy::PhyConfig& cfg, double theta_t) {
  require_theta(theta_t, "optimize_fixed_rate");
  const auto interval = phy::rate_interval(cfg);
  const double upper = interval.rho_max * (1.0 - kRateUpperGuard);
  const double lower = std::min(interval.rho_min, upper);

  auto objective = [&cfg, theta_t](double rho) {
    return numeric::log_mix_exp(phy::on_probability(cfg, rho), theta_t * rho);
  };

  if (!(upper > lower)) {
    return {lower, phy::on_probability(cfg, lower), objective(lower)};
  }
  const auto grid = numeric::linspace(lower, upper, kRateGridPoints);
  const auto best =
      numeric::grid_refine_min(objective, grid, kRateTolerance * interval.rho_max);
  const double rho = std::clamp(best.x, lower, upper);
  return {rho, phy::on_probability(cfg, rho), objective(rho)};
}

double reference_log_mgf(const phy::PhyConfig& cfg, double theta) {
  require_theta(theta, "reference_log_mgf");
  cfg.validate();
  const double dc2 = cfg.cell_radius_m * cfg.cell_radius_m;
  const double rate_edge = phy::rate_at_distance(cfg, cfg.cell_radius_m);
  // With u = d_h^2 the user position is uniform on [0, d_c^2]; s = d_c^2 - u
  // measures the distance from the cell edge, where the mass concentrates
  // for strict exponents.
  auto integrand = [&](double s) {
    const double u = std::clamp(dc2 - s, 0.0, dc2);
    const double r = phy::achievable_rate(cfg, phy::channel_gain_sq(cfg, u));
    return std::exp(-theta * (r - rate_edge)) / dc2;
  };
  // Geometric pieces [s_k, 2 s_k] keep every piece smooth at its own scale.
  // The integrand decreases in s, so each piece is normalised by its left-end
  // value before integration (the quadrature error floor is absolute).
  double total = 0.0;
  double error = 0.0;
  double lo = 0.0;
  double hi = dc2 * std::ldexp(1.0, -kEdgeSegments);
  for (int k = 0; k <= kEdgeSegments; ++k) {
    const double scale = integrand(lo);
    if (!(scale > 0.0)) break;
    const double width = hi - lo;
    const auto piece = numeric::integrate_estimate(
        [&](double t) { return integrand(lo + width * t) / scale; }, 0.0, 1.0,
        kQuadratureTolerance);
    total += scale * width * piece.value;
    error += scale * width * piece.error;
    lo = hi;
    hi = (k + 1 < kEdgeSegments) ? 2.0 * lo : dc2;
  }
  if (!(total > 0.0) || !std::isfinite(total) ||
      error > kQuadratureTolerance * total + kQuadratureFloor) {
    throw std::runtime_error("reference_log_mgf: quadrature did not converge");
  }
  return -theta * rate_edge + std::log(total);
}

double reference_log_mgf_factor(const phy::PhyConfig& cfg, double theta) {
  return std::exp(reference_log_mgf(cfg, theta));
}

ArrivalRate reference_max_arrival_rate(const markov::OnOffChain& source,
                                       const phy::PhyConfig& cfg, double theta) {
  return max_avg_arrival_rate_log(source, reference_log_mgf(cfg, theta), theta);
}

}  // namespace vlcqos::qos
