#ifndef VLCQOS_QUEUE_SIM_HPP
#define VLCQOS_QUEUE_SIM_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vlcqos/markov_onoff.hpp"

namespace vlcqos::sim {

/// Discrete-time buffer simulation settings.
///
/// Each frame: the source emits rate_on bits if ON, the bits are enqueued, the
/// channel is drawn ON with probability p_on, and an ON channel removes up to
/// rho bits FCFS. Queue lengths are sampled after service. Rates are rounded to
/// whole bits.
struct SimConfig {
  markov::OnOffChain source;
  markov::ServiceAbstraction service;
  std::int64_t frames = 1'000'000;
  std::uint64_t seed = 1;
  std::int64_t warmup = 100'000;
  /// Keep one FrameRecord per post-warmup frame (for export and invariant checks).
  bool keep_frames = false;

  void validate() const;
};

struct FrameRecord {
  std::int64_t frame;
  bool source_on;
  bool channel_on;
  std::int64_t arrived_bits;
  std::int64_t served_bits;
  std::int64_t queue_bits;
  std::int64_t batch_delay;  // -1: no batch this frame, or unresolved at end of run
};

/// (q, number of post-warmup frames with Q >= q) over the distinct observed q.
struct TailPoint {
  std::int64_t value;
  std::uint64_t count_ge;
};

struct SimTrace {
  std::uint64_t seed = 0;
  std::int64_t frames = 0;        // post-warmup frames recorded
  std::int64_t arrival_bits = 0;  // per-frame batch size actually used
  std::int64_t service_bits = 0;
  std::vector<std::string> warnings;

  std::vector<TailPoint> queue_tail;          // ascending value
  std::vector<std::uint64_t> delay_counts;    // delay_counts[d] = batches with delay d
  std::uint64_t batches = 0;
  std::uint64_t censored_batches = 0;         // still queued at end of run

  std::int64_t source_on_frames = 0;
  std::int64_t channel_on_frames = 0;
  std::int64_t departed_bits = 0;
  double mean_queue_bits = 0.0;
  std::vector<FrameRecord> records;

  double prob_queue_ge(std::int64_t q) const;
  double prob_queue_gt(double q) const;
  double prob_delay_gt(double tau) const;
};

class InsufficientTailMass : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SimTrace simulate(const SimConfig& cfg);

/// Negative slope of the least-squares line through ln P(Q >= q) on [q_lo, q_hi].
/// Needs at least 20 distinct q in range whose tail count is >= 100.
double tail_decay_estimate(const SimTrace& trace, double q_lo, double q_hi);

struct ViolationProbs {
  double p_queue;      // P(Q > q)
  double se_queue;
  double p_delay;      // P(D > tau)
  double se_delay;
};

ViolationProbs violation_probs(const SimTrace& trace, double q, double tau);

/// Delimited export: frame,source_state,channel_state,queue_bits,batch_delay.
/// Requires a trace recorded with keep_frames.
void write_trace_csv(const SimTrace& trace, std::ostream& out);

}  // namespace vlcqos::sim

#endif  // VLCQOS_QUEUE_SIM_HPP
