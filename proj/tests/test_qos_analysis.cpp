#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vlcqos/qos_analysis.hpp"
#include "vlcqos/validation/oracles.hpp"

using namespace vlcqos;
using markov::OnOffChain;
using markov::ServiceAbstraction;

TEST(QosTarget, RejectsNonPositive) {
  EXPECT_THROW(qos::QosTarget(0.0), std::domain_error);
  EXPECT_THROW(qos::QosTarget(-1e-3), std::domain_error);
  EXPECT_DOUBLE_EQ(qos::QosTarget(1e-3).theta(), 1e-3);
}

TEST(MaxArrivalRate, MatchesBisection) {
  const OnOffChain src{0.3, 0.7, 1.0};
  const ServiceAbstraction svc{0.7, 1000.0};
  const auto d = qos::max_avg_arrival_rate(src, svc, 1e-3);
  ASSERT_TRUE(d.feasible);
  const double ref = oracle::bisection_max_arrival_rate(
      0.3, 0.7, oracle::direct_service_log_mgf(0.7, 1000.0, 1e-3), 1e-3);
  EXPECT_NEAR(d.bits_per_frame / ref, 1.0, 1e-12);
}

TEST(MaxArrivalRate, SolvesMatchingCondition) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 100; ++i) {
    const OnOffChain src{u(rng), u(rng), 1.0};
    const ServiceAbstraction svc{u(rng), 100.0 + 9900.0 * u(rng)};
    const double theta = std::pow(10.0, -5.0 + 4.0 * u(rng));
    const auto d = qos::max_avg_arrival_rate(src, svc, theta);
    ASSERT_TRUE(d.feasible);
    const OnOffChain peak{src.gamma, src.beta, d.bits_per_frame / markov::steady_state(src).p_on};
    const double lhs = markov::source_log_mgf(peak, theta);
    const double rhs = -markov::service_log_mgf(svc, theta);
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::fabs(rhs));
  }
}

TEST(MaxArrivalRate, Limits) {
  const OnOffChain src{0.3, 0.7, 1.0};
  const ServiceAbstraction svc{0.7, 1000.0};
  EXPECT_NEAR(qos::max_avg_arrival_rate(src, svc, 1e-8).bits_per_frame / 700.0, 1.0, 1e-3);
  const ServiceAbstraction det{1.0, 1000.0};
  EXPECT_NEAR(qos::max_avg_arrival_rate(src, det, 10.0).bits_per_frame / 700.0, 1.0, 1e-3);
}

TEST(MaxArrivalRate, DomainChecks) {
  const OnOffChain src{0.3, 0.7, 1.0};
  EXPECT_THROW(qos::max_avg_arrival_rate(src, 1.0, 1e-3), std::domain_error);
  EXPECT_THROW(qos::max_avg_arrival_rate(src, 0.0, 1e-3), std::domain_error);
  EXPECT_FALSE(qos::max_avg_arrival_rate_log(src, -INFINITY, 1e-3).feasible);
}

TEST(EffectiveCapacity, Properties) {
  const ServiceAbstraction det{1.0, 1500.0};
  for (double theta : {1e-6, 1e-3, 1.0}) {
    EXPECT_NEAR(qos::effective_capacity(det, theta), 1500.0, 1e-9);
  }
  const ServiceAbstraction svc{0.6, 3000.0};
  EXPECT_NEAR(qos::effective_capacity(svc, 1e-10) / 1800.0, 1.0, 1e-6);
  EXPECT_GE(qos::effective_capacity(svc, 0.01), qos::effective_capacity(svc, 0.1));
}

TEST(EffectiveCapacity, EqualsConstantSourceRate) {
  const OnOffChain constant{0.0, 1.0, 1.0};
  const ServiceAbstraction svc{0.4, 6000.0};
  for (double theta = 1e-7; theta < 10.0; theta *= 3.0) {
    EXPECT_EQ(qos::max_avg_arrival_rate(constant, svc, theta).bits_per_frame,
              qos::effective_capacity(svc, theta));
  }
}

TEST(OptimizeFixedRate, SaturatesAtCellEdge) {
  const phy::PhyConfig cfg;
  const auto r = phy::rate_interval(cfg);
  const double theta_t = 10.0 / r.rho_min;
  const auto opt = qos::optimize_fixed_rate(cfg, theta_t);
  EXPECT_NEAR(opt.rho_star, r.rho_min, 1e-6 * r.rho_max);
  EXPECT_DOUBLE_EQ(opt.p_on_star, 1.0);
  EXPECT_NEAR(opt.log_mgf_star, -theta_t * r.rho_min, 1e-9);
}

TEST(OptimizeFixedRate, SmallExponentMaximisesMeanRate) {
  const phy::PhyConfig cfg;
  const auto r = phy::rate_interval(cfg);
  const auto opt = qos::optimize_fixed_rate(cfg, 1e-10);
  // Brute-force argmax of p_on(rho) rho.
  double best_rho = r.rho_min, best = 0.0;
  for (int i = 0; i <= 200000; ++i) {
    const double rho = r.rho_min + (r.rho_max - r.rho_min) * i / 200000.0;
    const double v = phy::on_probability(cfg, rho) * rho;
    if (v > best) best = v, best_rho = rho;
  }
  EXPECT_NEAR(opt.rho_star, best_rho, 2e-3 * r.rho_max);
  EXPECT_NEAR(opt.p_on_star * opt.rho_star / best, 1.0, 1e-6);
}

TEST(OptimizeFixedRate, MatchesExhaustiveGrid) {
  const phy::PhyConfig cfg;
  const auto r = phy::rate_interval(cfg);
  for (double theta_t : {1e-6, 1e-4, 1e-2}) {
    const auto opt = qos::optimize_fixed_rate(cfg, theta_t);
    const auto grid = oracle::grid_min_fixed_rate(cfg, theta_t, 100000);
    const double step = (r.rho_max - r.rho_min) / 100000.0;
    EXPECT_NEAR(opt.rho_star, grid.x, step + 1e-6 * r.rho_max) << "theta_t " << theta_t;
    EXPECT_LE(opt.log_mgf_star, grid.value + 1e-12 * std::fabs(grid.value));
  }
}

TEST(OptimizeFixedRate, FrozenValues) {
  const phy::PhyConfig cfg;
  const auto a = qos::optimize_fixed_rate(cfg, 1e-8);
  EXPECT_NEAR(a.rho_star, 6053.97, 0.5);
  EXPECT_NEAR(a.p_on_star, 0.38342, 1e-4);
  const auto b = qos::optimize_fixed_rate(cfg, 1e-4);
  EXPECT_NEAR(b.rho_star, 4382.9, 0.5);
  EXPECT_NEAR(b.p_on_star, 0.511, 1e-3);
}

TEST(ReferenceRate, OrderingAndLimits) {
  const phy::PhyConfig cfg;
  const OnOffChain src{0.3, 0.7, 1.0};
  const double theta = 1e-6;
  const auto svc = qos::optimize_fixed_rate(cfg, theta).service();
  const auto fixed = qos::max_avg_arrival_rate(src, svc, theta);
  const auto ref = qos::reference_max_arrival_rate(src, cfg, theta);
  EXPECT_GE(ref.bits_per_frame, fixed.bits_per_frame);
  // Strict exponents: both approach p_os * rho_min.
  const double big = 1.0;
  const double floor = 0.7 * phy::rate_interval(cfg).rho_min;
  const auto fixed_big = qos::max_avg_arrival_rate(
      src, qos::optimize_fixed_rate(cfg, big).service(), big);
  EXPECT_NEAR(fixed_big.bits_per_frame / floor, 1.0, 1e-3);
  EXPECT_NEAR(qos::reference_max_arrival_rate(src, cfg, big).bits_per_frame / floor, 1.0, 1e-2);
}
