#ifndef VLCQOS_MARKOV_ONOFF_HPP
#define VLCQOS_MARKOV_ONOFF_HPP

#include <cstdint>

namespace vlcqos::markov {

/// Two-state discrete-time Markov chain that emits `rate_on` bits per frame in
/// the ON state and nothing in OFF.
struct OnOffChain {
  double gamma = 0.0;   // P(ON -> OFF)
  double beta = 1.0;    // P(OFF -> ON); must be > 0 so ON is reachable
  double rate_on = 0.0;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

/// Fixed-rate block channel: ON with probability p_on independently every
/// frame, delivering `rho` bits when ON.
struct ServiceAbstraction {
  double p_on = 1.0;
  double rho = 1.0;

  void validate() const;

  /// The equivalent Markov chain (beta = p_on, gamma = 1 - p_on).
  OnOffChain as_chain() const { return {1.0 - p_on, p_on, rho}; }
  double mean_rate() const { return p_on * rho; }
};

struct SteadyState {
  double p_on;
  double p_off;
};

SteadyState steady_state(const OnOffChain& chain);

/// Average bits per frame in steady state.
double source_avg_rate(const OnOffChain& chain);

/// Lambda_c(-theta) = ln(p_on e^{-theta rho} + p_off), nats per frame.
double service_log_mgf(const ServiceAbstraction& svc, double theta);

/// Asymptotic arrival log-MGF Lambda_s(theta): log spectral radius of the
/// theta-tilted transition matrix, in closed form.
double source_log_mgf(const OnOffChain& chain, double theta);

/// Time-variant log-MGF (1/t) ln E[e^{theta A(t)}] for a chain started in
/// steady state, via log-scaled repeated squaring. t >= 1.
double arrival_log_mgf_finite(const OnOffChain& chain, double theta, std::int64_t t);

/// max( max_{1 <= t <= t_max} Lambda_a(theta, t), Lambda_s(theta) ).
///
/// Scans t forward with one vector-matrix product per step. Once the
/// normalised state vector stops moving the per-step growth is constant and
/// the remaining terms are monotone in t, so only the t_max endpoint is
/// evaluated for the tail.
double arrival_log_mgf_sup(const OnOffChain& chain, double theta, std::int64_t t_max);

}  // namespace vlcqos::markov

#endif  // VLCQOS_MARKOV_ONOFF_HPP
