#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "vlcqos/queue_sim.hpp"

using namespace vlcqos;

namespace {

sim::SimConfig config(markov::OnOffChain src, markov::ServiceAbstraction svc,
                      std::int64_t frames, std::uint64_t seed = 1) {
  sim::SimConfig cfg;
  cfg.source = src;
  cfg.service = svc;
  cfg.frames = frames;
  cfg.warmup = frames / 10;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(Simulate, RejectsBadConfig) {
  auto cfg = config({0.3, 0.7, 100.0}, {0.9, 200.0}, 1000);
  cfg.warmup = 1000;
  EXPECT_THROW(sim::simulate(cfg), std::invalid_argument);
  cfg = config({0.3, 0.7, 1e18}, {0.9, 200.0}, 1000);
  EXPECT_THROW(sim::simulate(cfg), std::overflow_error);
}

TEST(Simulate, ArrivalsServedWithinFrame) {
  auto cfg = config({0.0, 1.0, 500.0}, {1.0, 500.0}, 10000);
  cfg.keep_frames = true;
  const auto trace = sim::simulate(cfg);
  for (const auto& r : trace.records) ASSERT_EQ(r.queue_bits, 0);
  EXPECT_EQ(trace.prob_queue_ge(1), 0.0);
  EXPECT_EQ(trace.prob_delay_gt(0.0), 0.0);
}

TEST(Simulate, PureAccumulation) {
  auto cfg = config({0.3, 0.7, 100.0}, {0.0, 500.0}, 200000);
  cfg.warmup = 0;
  cfg.keep_frames = true;
  const auto trace = sim::simulate(cfg);
  const double slope = static_cast<double>(trace.records.back().queue_bits) / 200000.0;
  EXPECT_NEAR(slope, 70.0, 1.0);
  EXPECT_EQ(trace.departed_bits, 0);
}

TEST(Simulate, FlowConservation) {
  auto cfg = config({0.2, 0.3, 900.0}, {0.6, 1000.0}, 200000, 17);
  cfg.keep_frames = true;
  const auto trace = sim::simulate(cfg);
  ASSERT_EQ(trace.records.size(), static_cast<std::size_t>(trace.frames));
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    const auto& prev = trace.records[i - 1];
    const auto& r = trace.records[i];
    const std::int64_t offered = prev.queue_bits + r.arrived_bits;
    const std::int64_t expect = std::max<std::int64_t>(
        offered - (r.channel_on ? trace.service_bits : 0), 0);
    ASSERT_EQ(r.queue_bits, expect) << "frame " << r.frame;
    ASSERT_EQ(r.arrived_bits, r.source_on ? trace.arrival_bits : 0);
    ASSERT_GE(r.queue_bits, 0);
  }
}

TEST(Simulate, EmpiricalRates) {
  const markov::OnOffChain src{0.3, 0.7, 1000.0};
  const markov::ServiceAbstraction svc{0.9, 2000.0};
  const auto trace = sim::simulate(config(src, svc, 1'000'000, 3));
  const double n = static_cast<double>(trace.frames);
  // Source states are correlated: variance inflation (2 - g - b) / (g + b) = 1.
  const double src_frac = trace.source_on_frames / n;
  EXPECT_NEAR(src_frac, 0.7, 3.0 * std::sqrt(0.7 * 0.3 / n * 1.0) + 1e-12);
  const double ch_frac = trace.channel_on_frames / n;
  EXPECT_NEAR(ch_frac, 0.9, 3.0 * std::sqrt(0.9 * 0.1 / n));
  EXPECT_NEAR(trace.departed_bits / n, 700.0, 5.0);
}

TEST(Simulate, Deterministic) {
  const auto cfg = config({0.3, 0.7, 1000.0}, {0.7, 1200.0}, 300000, 42);
  const auto a = sim::simulate(cfg);
  const auto b = sim::simulate(cfg);
  ASSERT_EQ(a.queue_tail.size(), b.queue_tail.size());
  for (std::size_t i = 0; i < a.queue_tail.size(); ++i) {
    EXPECT_EQ(a.queue_tail[i].value, b.queue_tail[i].value);
    EXPECT_EQ(a.queue_tail[i].count_ge, b.queue_tail[i].count_ge);
  }
  EXPECT_EQ(a.delay_counts, b.delay_counts);
  EXPECT_EQ(sim::tail_decay_estimate(a, 0.0, 1e9), sim::tail_decay_estimate(b, 0.0, 1e9));
  const auto c = sim::simulate(config({0.3, 0.7, 1000.0}, {0.7, 1200.0}, 300000, 43));
  EXPECT_NE(a.mean_queue_bits, c.mean_queue_bits);
}

TEST(Simulate, RoundingWarning) {
  const auto a = sim::simulate(config({0.3, 0.7, 10.4}, {0.9, 20.0}, 1000));
  EXPECT_EQ(a.arrival_bits, 10);
  EXPECT_EQ(a.warnings.size(), 1u);
  const auto b = sim::simulate(config({0.3, 0.7, 1000.4}, {0.9, 2000.0}, 1000));
  EXPECT_TRUE(b.warnings.empty());
}

TEST(TailTables, NonIncreasing) {
  const auto trace = sim::simulate(config({0.3, 0.7, 1000.0}, {0.7, 1100.0}, 300000, 5));
  for (std::size_t i = 1; i < trace.queue_tail.size(); ++i) {
    EXPECT_LE(trace.queue_tail[i].count_ge, trace.queue_tail[i - 1].count_ge);
    EXPECT_GT(trace.queue_tail[i].value, trace.queue_tail[i - 1].value);
  }
  double prev = 1.0;
  for (double tau = 0; tau < 50; tau += 1.0) {
    const double p = trace.prob_delay_gt(tau);
    EXPECT_LE(p, prev);
    prev = p;
  }
}

TEST(TailDecay, InsufficientMass) {
  const auto trace = sim::simulate(config({0.0, 1.0, 500.0}, {1.0, 800.0}, 10000));
  EXPECT_THROW(sim::tail_decay_estimate(trace, 0.0, 1e6), sim::InsufficientTailMass);
}

TEST(ViolationProbs, Definitions) {
  auto cfg = config({0.3, 0.7, 1000.0}, {0.7, 1100.0}, 200000, 8);
  cfg.keep_frames = true;
  const auto trace = sim::simulate(cfg);
  std::int64_t nonempty = 0;
  for (const auto& r : trace.records) nonempty += r.queue_bits > 0 ? 1 : 0;
  const auto v = sim::violation_probs(trace, 0.0, 1e9);
  EXPECT_DOUBLE_EQ(v.p_queue, static_cast<double>(nonempty) / trace.frames);
  EXPECT_EQ(v.p_delay, 0.0);
  EXPECT_GT(v.se_queue, 0.0);
}

TEST(TraceExport, Header) {
  auto cfg = config({0.3, 0.7, 100.0}, {0.9, 200.0}, 20);
  cfg.warmup = 0;
  cfg.keep_frames = true;
  std::ostringstream out;
  sim::write_trace_csv(sim::simulate(cfg), out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "frame,source_state,channel_state,queue_bits,batch_delay");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 20);
  EXPECT_THROW(sim::write_trace_csv(sim::simulate(config({0.3, 0.7, 100.0}, {0.9, 200.0}, 20)),
                                    out),
               std::logic_error);
}
