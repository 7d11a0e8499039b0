#ifndef VLCQOS_QOS_ANALYSIS_HPP
#define VLCQOS_QOS_ANALYSIS_HPP

#include "vlcqos/markov_onoff.hpp"
#include "vlcqos/phy_channel.hpp"

namespace vlcqos::qos {

/// QoS exponent theta in 1/bits. Construction rejects theta <= 0.
class QosTarget {
 public:
  explicit QosTarget(double theta);
  double theta() const { return theta_; }

 private:
  double theta_;
};

/// Maximum supportable average arrival rate, or the marker that the
/// effective-bandwidth matching condition has no positive solution.
struct ArrivalRate {
  bool feasible = false;
  double bits_per_frame = 0.0;

  static ArrivalRate infeasible() { return {}; }
};

/// Result of the fixed-rate optimisation at a target exponent.
struct RateOptimum {
  double rho_star;
  double p_on_star;
  double log_mgf_star;  // ln(p_on* e^{-theta_t rho*} + 1 - p_on*)

  markov::ServiceAbstraction service() const { return {p_on_star, rho_star}; }
};

/// delta(theta) for an ON-OFF source against a service whose log-MGF factor
/// D = E[e^{-theta S}] is given as ln D (so strict exponents never underflow).
ArrivalRate max_avg_arrival_rate_log(const markov::OnOffChain& source,
                                     double log_d, double theta);

/// Same, with D itself. Requires D in (0, 1).
ArrivalRate max_avg_arrival_rate(const markov::OnOffChain& source, double d,
                                 double theta);

/// delta(theta) for a fixed-rate block channel.
ArrivalRate max_avg_arrival_rate(const markov::OnOffChain& source,
                                 const markov::ServiceAbstraction& svc,
                                 double theta);

/// Effective capacity -ln(p_on e^{-theta rho} + p_off) / theta.
double effective_capacity(const markov::ServiceAbstraction& svc, double theta);

/// Minimises the service log-MGF over rho in [rho_min, rho_max) at theta_t.
///
/// A 2048-point grid over the half-open rate interval locates the basin, then
/// a bracketed Brent search refines rho to 1e-6 * rho_max. The grid is needed
/// because p_on(rho) is clamped at 1 below rho_min and the objective is not
/// convex in general.
RateOptimum optimize_fixed_rate(const phy::PhyConfig& cfg, double theta_t);

/// ln E[e^{-theta R(d_h)}] for a user uniform on the cell disc (full-CSI
/// reference). Evaluated by adaptive quadrature relative to the cell-edge rate.
double reference_log_mgf(const phy::PhyConfig& cfg, double theta);

/// D_ref = E[e^{-theta R(d_h)}]. Underflows to 0 for strict exponents; prefer
/// reference_log_mgf there.
double reference_log_mgf_factor(const phy::PhyConfig& cfg, double theta);

/// delta_ref(theta) from the reference log-MGF.
ArrivalRate reference_max_arrival_rate(const markov::OnOffChain& source,
                                       const phy::PhyConfig& cfg, double theta);

}  // namespace vlcqos::qos

#endif  // VLCQOS_QOS_ANALYSIS_HPP
