#ifndef VLCQOS_VALIDATION_ORACLES_HPP
#define VLCQOS_VALIDATION_ORACLES_HPP

// Reference computations that share no code path with the library routines
// they check. Slow by construction; used by the test suites and `vlcqos validate`.

#include <cstdint>
#include <functional>

#include "vlcqos/phy_channel.hpp"

namespace vlcqos::oracle {

/// ln(p e^{-theta rho} + 1 - p) evaluated directly in extended precision.
double direct_service_log_mgf(double p_on, double rho, double theta);

/// ln of the spectral radius of the theta-tilted ON-OFF matrix
/// [[(1-g) e^{x}, g e^{x}], [b, 1-b]], x = theta * lambda, from the generic
/// trace/determinant eigenvalue formula.
double log_spectral_radius(double gamma, double beta, double lambda, double theta);

/// ln E[e^{theta A(t)}] / t by summing over all 2^t state paths of a chain
/// started in steady state. t <= 20.
double path_enumeration_log_mgf(double gamma, double beta, double lambda, double theta,
                                int t);

/// delta(theta) by plain bisection on lambda in
/// log_spectral_radius(gamma, beta, lambda, theta) = -log_d, times p_on,s.
double bisection_max_arrival_rate(double gamma, double beta, double log_d, double theta);

/// Brute-force maximum of f over n log-spaced points on [lo, hi].
struct GridMax {
  double x;
  double value;
};
GridMax dense_log_grid_max(const std::function<double(double)>& f, double lo, double hi,
                           std::int64_t n);

/// Brute-force minimiser of the fixed-rate service log-MGF over n uniformly
/// spaced rates in [rho_min, rho_max), evaluating on-probabilities through the
/// uniform-disc CDF directly from the squared outage radius.
GridMax grid_min_fixed_rate(const phy::PhyConfig& cfg, double theta, std::int64_t n);

/// Monte Carlo mean of e^{-theta R(d_h)} over users uniform on the cell disc.
struct MonteCarloMean {
  double mean;
  double standard_error;
};
MonteCarloMean monte_carlo_reference_factor(const phy::PhyConfig& cfg, double theta,
                                            std::int64_t samples, std::uint64_t seed);

/// Service-side queue bound term by dense log grid over theta in (0, 10/c]:
/// -max ln(-eps [ln(p e^{-theta rho} + 1 - p) + theta c]) / theta, clamped at 0.
double dense_grid_qc(double p_on, double rho, double eps, double c, std::int64_t n);

/// Arrival-side term by dense log grid, with sup_t evaluated by direct
/// forward recursion over t = 1..t_max plus the asymptotic spectral radius.
double dense_grid_qa(double gamma, double beta, double lambda, double eps, double c,
                     std::int64_t t_max, std::int64_t n);

}  // namespace vlcqos::oracle

#endif  // VLCQOS_VALIDATION_ORACLES_HPP
