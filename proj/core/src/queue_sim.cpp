#include "vlcqos/queue_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <random>
#include <unordered_map>

namespace vlcqos::sim {

namespace {

constexpr std::size_t kMinTailPoints = 20;
constexpr std::uint64_t kMinTailCount = 100;
constexpr double kRoundingWarnThreshold = 1e-3;

// Stream seeds are splitmix64 images of (seed, stream id); each stream drives
// its own mt19937_64.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

// Uniform in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::int64_t to_bits(double rate, const char* name, std::vector<std::string>& warnings) {
  const auto bits = static_cast<std::int64_t>(std::llround(rate));
  if (rate > 0.0 && std::abs(static_cast<double>(bits) - rate) / rate > kRoundingWarnThreshold) {
    warnings.push_back(std::string(name) + " rounded to " + std::to_string(bits) +
                       " bits/frame from " + std::to_string(rate));
  }
  return bits;
}

struct Batch {
  std::int64_t frame;
  std::int64_t last_bit;  // cumulative arrival index of the batch's last bit
  std::int64_t record;    // index into records, or -1
};

}  // namespace

void SimConfig::validate() const {
  source.validate();
  service.validate();
  if (!(warmup >= 0)) throw std::invalid_argument("SimConfig.warmup must be >= 0");
  if (!(frames > warmup)) throw std::invalid_argument("SimConfig.frames must exceed warmup");
}

double SimTrace::prob_queue_ge(std::int64_t q) const {
  if (frames <= 0) return 0.0;
  const auto it = std::lower_bound(
      queue_tail.begin(), queue_tail.end(), q,
      [](const TailPoint& p, std::int64_t v) { return p.value < v; });
  if (it == queue_tail.end()) return 0.0;
  return static_cast<double>(it->count_ge) / static_cast<double>(frames);
}

double SimTrace::prob_queue_gt(double q) const {
  // Q is integer-valued: Q > q  <=>  Q >= floor(q) + 1.
  if (q < 0.0) return frames > 0 ? 1.0 : 0.0;
  return prob_queue_ge(static_cast<std::int64_t>(std::floor(q)) + 1);
}

double SimTrace::prob_delay_gt(double tau) const {
  if (batches == 0) return 0.0;
  const std::int64_t first = tau < 0.0 ? 0 : static_cast<std::int64_t>(std::floor(tau)) + 1;
  std::uint64_t over = 0;
  for (std::size_t d = static_cast<std::size_t>(std::max<std::int64_t>(first, 0));
       d < delay_counts.size(); ++d) {
    over += delay_counts[d];
  }
  return static_cast<double>(over) / static_cast<double>(batches);
}

SimTrace simulate(const SimConfig& cfg) {
  cfg.validate();
  SimTrace trace;
  trace.seed = cfg.seed;
  trace.arrival_bits = to_bits(cfg.source.rate_on, "source rate", trace.warnings);
  trace.service_bits = to_bits(cfg.service.rho, "service rate", trace.warnings);
  if (trace.arrival_bits > 0 &&
      cfg.frames > std::numeric_limits<std::int64_t>::max() / trace.arrival_bits) {
    throw std::overflow_error("simulate: frames * rate_on exceeds the bit counter range");
  }

  auto source_rng = make_stream(cfg.seed, 0);
  auto channel_rng = make_stream(cfg.seed, 1);
  const auto ss = markov::steady_state(cfg.source);
  const double gamma = cfg.source.gamma;
  const double beta = cfg.source.beta;
  const double p_on = cfg.service.p_on;

  bool source_on = unit(source_rng) < ss.p_on;
  std::int64_t queue = 0;
  std::int64_t arrived_total = 0;
  std::int64_t served_total = 0;
  std::deque<Batch> pending;
  std::unordered_map<std::int64_t, std::uint64_t> histogram;
  long double queue_sum = 0.0L;

  if (cfg.keep_frames) trace.records.reserve(static_cast<std::size_t>(cfg.frames - cfg.warmup));

  for (std::int64_t t = 0; t < cfg.frames; ++t) {
    const bool recording = t >= cfg.warmup;
    const std::int64_t arrived = source_on ? trace.arrival_bits : 0;
    queue += arrived;
    arrived_total += arrived;
    std::int64_t record_index = -1;
    if (recording && cfg.keep_frames) {
      record_index = static_cast<std::int64_t>(trace.records.size());
      trace.records.push_back({t, source_on, false, arrived, 0, 0, -1});
    }
    if (arrived > 0) pending.push_back({t, arrived_total, recording ? record_index : -2});

    const bool channel_on = unit(channel_rng) < p_on;
    std::int64_t served = 0;
    if (channel_on) {
      served = std::min(trace.service_bits, queue);
      queue -= served;
      served_total += served;
    }
    while (!pending.empty() && pending.front().last_bit <= served_total) {
      const Batch& b = pending.front();
      if (b.record != -2) {
        const auto delay = static_cast<std::size_t>(t - b.frame);
        if (trace.delay_counts.size() <= delay) trace.delay_counts.resize(delay + 1, 0);
        ++trace.delay_counts[delay];
        ++trace.batches;
        if (b.record >= 0) trace.records[static_cast<std::size_t>(b.record)].batch_delay =
            t - b.frame;
      }
      pending.pop_front();
    }

    if (recording) {
      ++trace.frames;
      trace.source_on_frames += source_on ? 1 : 0;
      trace.channel_on_frames += channel_on ? 1 : 0;
      trace.departed_bits += served;
      ++histogram[queue];
      queue_sum += static_cast<long double>(queue);
      if (cfg.keep_frames) {
        auto& rec = trace.records.back();
        rec.channel_on = channel_on;
        rec.served_bits = served;
        rec.queue_bits = queue;
      }
    }

    const double u = unit(source_rng);
    source_on = source_on ? !(u < gamma) : (u < beta);
  }

  for (const auto& b : pending) {
    if (b.record != -2) ++trace.censored_batches;
  }

  std::vector<std::pair<std::int64_t, std::uint64_t>> sorted(histogram.begin(),
                                                             histogram.end());
  std::sort(sorted.begin(), sorted.end());
  trace.queue_tail.resize(sorted.size());
  std::uint64_t running = 0;
  for (std::size_t i = sorted.size(); i-- > 0;) {
    running += sorted[i].second;
    trace.queue_tail[i] = {sorted[i].first, running};
  }
  trace.mean_queue_bits =
      trace.frames > 0 ? static_cast<double>(queue_sum / trace.frames) : 0.0;
  return trace;
}

double tail_decay_estimate(const SimTrace& trace, double q_lo, double q_hi) {
  const double n = static_cast<double>(trace.frames);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t k = 0;
  for (const auto& p : trace.queue_tail) {
    const auto q = static_cast<double>(p.value);
    if (q < q_lo || q > q_hi || p.count_ge < kMinTailCount) continue;
    const double y = std::log(static_cast<double>(p.count_ge) / n);
    sx += q;
    sy += y;
    sxx += q * q;
    sxy += q * y;
    ++k;
  }
  if (k < kMinTailPoints) {
    throw InsufficientTailMass("tail_decay_estimate: fewer than 20 tail points with count >= 100");
  }
  const double kk = static_cast<double>(k);
  const double denom = kk * sxx - sx * sx;
  if (!(denom > 0.0)) throw InsufficientTailMass("tail_decay_estimate: degenerate support");
  return -(kk * sxy - sx * sy) / denom;
}

ViolationProbs violation_probs(const SimTrace& trace, double q, double tau) {
  auto se = [](double p, double n) { return n > 0.0 ? std::sqrt(p * (1.0 - p) / n) : 0.0; };
  const double pq = trace.prob_queue_gt(q);
  const double pd = trace.prob_delay_gt(tau);
  return {pq, se(pq, static_cast<double>(trace.frames)), pd,
          se(pd, static_cast<double>(trace.batches))};
}

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
  if (trace.records.empty() && trace.frames > 0) {
    throw std::logic_error("write_trace_csv: trace was recorded without keep_frames");
  }
  out << "frame,source_state,channel_state,queue_bits,batch_delay\n";
  for (const auto& r : trace.records) {
    out << r.frame << ',' << (r.source_on ? 1 : 0) << ',' << (r.channel_on ? 1 : 0) << ','
        << r.queue_bits << ',';
    if (r.batch_delay >= 0) out << r.batch_delay;
    out << '\n';
  }
}

}  // namespace vlcqos::sim
