#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vlcqos/markov_onoff.hpp"
#include "vlcqos/validation/oracles.hpp"

using namespace vlcqos;
using markov::OnOffChain;

TEST(SteadyState, Arithmetic) {
  const auto a = markov::steady_state({0.3, 0.7, 1.0});
  EXPECT_DOUBLE_EQ(a.p_on, 0.7);
  EXPECT_DOUBLE_EQ(a.p_off, 0.3);
  const auto b = markov::steady_state({0.4, 0.4, 1.0});
  EXPECT_DOUBLE_EQ(b.p_on, 0.5);
  const auto c = markov::steady_state({0.0, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(c.p_on, 1.0);
  EXPECT_DOUBLE_EQ(c.p_off, 0.0);
}

TEST(SteadyState, AverageRate) {
  EXPECT_DOUBLE_EQ(markov::source_avg_rate({0.3, 0.7, 1000.0}), 700.0);
  EXPECT_DOUBLE_EQ(markov::source_avg_rate({0.0, 1.0, 321.0}), 321.0);
  EXPECT_DOUBLE_EQ(markov::source_avg_rate({0.3, 0.7, 0.0}), 0.0);
}

TEST(Validation, RejectsOutOfRange) {
  EXPECT_THROW((OnOffChain{1.2, 0.5, 1.0}).validate(), std::invalid_argument);
  EXPECT_THROW((OnOffChain{0.2, 0.0, 1.0}).validate(), std::invalid_argument);
  EXPECT_THROW((OnOffChain{0.2, 0.5, -1.0}).validate(), std::invalid_argument);
  EXPECT_THROW((markov::ServiceAbstraction{1.5, 1.0}).validate(), std::invalid_argument);
  EXPECT_THROW(markov::service_log_mgf({0.5, 1.0}, 0.0), std::domain_error);
}

TEST(ServiceLogMgf, Values) {
  EXPECT_DOUBLE_EQ(markov::service_log_mgf({1.0, 1500.0}, 1e-3), -1.5);
  EXPECT_NEAR(markov::service_log_mgf({0.7, 1000.0}, 1e-3), -0.5842648, 1e-7);
  EXPECT_NEAR(markov::service_log_mgf({0.7, 1000.0}, 1e-14), -0.7e-11, 1e-20);
  // Far tail: ln(p_off) without underflow.
  EXPECT_NEAR(markov::service_log_mgf({0.7, 1000.0}, 10.0), std::log(0.3), 1e-12);
}

TEST(SourceLogMgf, ConstantSource) {
  const OnOffChain c{0.0, 1.0, 1234.0};
  for (double theta : {1e-9, 1e-4, 1e-2, 1.0}) {
    EXPECT_NEAR(markov::source_log_mgf(c, theta), theta * 1234.0, 1e-12 * theta * 1234.0);
  }
}

TEST(SourceLogMgf, MatchesEigenvalueOracle) {
  EXPECT_NEAR(markov::source_log_mgf({0.3, 0.7, 1000.0}, 1e-3),
              oracle::log_spectral_radius(0.3, 0.7, 1000.0, 1e-3), 1e-13);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 300; ++i) {
    const OnOffChain c{u(rng), u(rng), std::exp(u(rng) * 9.0)};
    const double theta = std::exp(-14.0 * u(rng));
    const double lib = markov::source_log_mgf(c, theta);
    const double ref = oracle::log_spectral_radius(c.gamma, c.beta, c.rate_on, theta);
    EXPECT_NEAR(lib, ref, 1e-12 * std::max(1.0, std::fabs(ref)))
        << c.gamma << " " << c.beta << " " << c.rate_on << " " << theta;
  }
}

TEST(SourceLogMgf, SmallThetaVanishes) {
  const OnOffChain c{0.3, 0.7, 1000.0};
  EXPECT_NEAR(markov::source_log_mgf(c, 1e-15), 700.0 * 1e-15, 1e-24);
}

TEST(SourceLogMgf, ConvexIncreasing) {
  const OnOffChain c{0.2, 0.4, 500.0};
  double prev = 0.0, prev_slope = 0.0;
  const double h = 1e-5;
  for (int i = 1; i < 200; ++i) {
    const double theta = i * h;
    const double v = markov::source_log_mgf(c, theta);
    const double slope = (v - prev) / h;
    EXPECT_GT(v, prev);
    if (i > 1) EXPECT_GE(slope, prev_slope * (1 - 1e-9));
    prev = v;
    prev_slope = slope;
  }
}

TEST(ArrivalLogMgfFinite, SingleFrame) {
  const OnOffChain c{0.3, 0.7, 1000.0};
  EXPECT_NEAR(markov::arrival_log_mgf_finite(c, 1e-3, 1), std::log(0.7 * std::exp(1.0) + 0.3),
              1e-14);
}

TEST(ArrivalLogMgfFinite, ConstantSourceAllHorizons) {
  const OnOffChain c{0.0, 1.0, 800.0};
  for (std::int64_t t : {1, 2, 17, 1000, 123456}) {
    EXPECT_NEAR(markov::arrival_log_mgf_finite(c, 1e-3, t), 0.8, 1e-12);
  }
}

TEST(ArrivalLogMgfFinite, MatchesPathEnumeration) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 20; ++i) {
    const OnOffChain c{u(rng), u(rng), 100.0 + 900.0 * u(rng)};
    for (int t : {1, 2, 5, 12}) {
      for (double theta : {1e-4, 1e-3, 1e-2}) {
        const double lib = markov::arrival_log_mgf_finite(c, theta, t);
        const double ref = oracle::path_enumeration_log_mgf(c.gamma, c.beta, c.rate_on, theta, t);
        EXPECT_NEAR(lib, ref, 1e-12 * std::max(1.0, std::fabs(ref)));
      }
    }
  }
}

TEST(ArrivalLogMgfFinite, ConvergesToAsymptote) {
  const OnOffChain c{0.3, 0.7, 1000.0};
  const double asym = markov::source_log_mgf(c, 1e-3);
  EXPECT_NEAR(markov::arrival_log_mgf_finite(c, 1e-3, 1000) / asym, 1.0, 1e-3);
  // For a correlated chain the gap shrinks like 1/t.
  const OnOffChain d{0.1, 0.2, 1000.0};
  const double asym_d = markov::source_log_mgf(d, 1e-3);
  const double g1 = markov::arrival_log_mgf_finite(d, 1e-3, 10000) - asym_d;
  const double g2 = markov::arrival_log_mgf_finite(d, 1e-3, 40000) - asym_d;
  EXPECT_NEAR(g1 / g2, 4.0, 1e-3);
}

TEST(ArrivalLogMgfFinite, IndependentSourceHasNoTransient) {
  // gamma + beta = 1 makes frames i.i.d.
  const OnOffChain c{0.3, 0.7, 1000.0};
  const double asym = markov::source_log_mgf(c, 1e-3);
  for (std::int64_t t : {1, 10, 10000}) {
    EXPECT_NEAR(markov::arrival_log_mgf_finite(c, 1e-3, t), asym, 1e-13);
  }
}

TEST(ArrivalLogMgfFinite, GapIsNotSmallAtModerateHorizon) {
  // Started in steady state the transient is C / t with C = O(1) once theta lambda is
  // of order one, so |Lambda_a(theta, 1e4) - Lambda_s| sits well above 1e-6.
  const OnOffChain c{0.1, 0.2, 1000.0};
  const double gap =
      markov::arrival_log_mgf_finite(c, 1e-2, 10000) - markov::source_log_mgf(c, 1e-2);
  EXPECT_GT(std::fabs(gap), 1e-5);
}

TEST(ArrivalLogMgfSup, DominatesEveryHorizon) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 30; ++i) {
    const OnOffChain c{u(rng), u(rng), 100.0 + 5000.0 * u(rng)};
    const double theta = 1e-4 * (1.0 + 50.0 * u(rng));
    const double sup = markov::arrival_log_mgf_sup(c, theta, 3000);
    double brute = markov::source_log_mgf(c, theta);
    for (std::int64_t t = 1; t <= 3000; ++t) {
      brute = std::max(brute, markov::arrival_log_mgf_finite(c, theta, t));
    }
    EXPECT_NEAR(sup, brute, 1e-11 * std::fabs(brute));
  }
}
