#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "vlcqos/numeric.hpp"

using namespace vlcqos::numeric;

TEST(LogMixExp, StableAcrossScales) {
  EXPECT_EQ(log_mix_exp(0.0, 5.0), 0.0);
  EXPECT_EQ(log_mix_exp(1.0, 5.0), -5.0);
  EXPECT_NEAR(log_mix_exp(0.7, 1.0), std::log(0.7 * std::exp(-1.0) + 0.3), 1e-15);
  EXPECT_NEAR(log_mix_exp(0.7, 1e-12), -0.7e-12 + 0.105e-24, 1e-27);
  EXPECT_NEAR(log_mix_exp(0.7, 2000.0), std::log(0.3), 1e-15);
}

TEST(LogSumExp, LargeArguments) {
  const std::vector<double> v{1000.0, 1000.0, 999.0};
  EXPECT_NEAR(log_sum_exp(v), 1000.0 + std::log(2.0 + std::exp(-1.0)), 1e-12);
  EXPECT_NEAR(log_add_exp(-1e4, 0.0), 0.0, 1e-300);
}

TEST(Grids, Endpoints) {
  const auto g = logspace(1e-6, 1e2, 9);
  EXPECT_DOUBLE_EQ(g.front(), 1e-6);
  EXPECT_DOUBLE_EQ(g.back(), 1e2);
  EXPECT_NEAR(g[1], 1e-5, 1e-18);
  const auto l = linspace(1.0, 2.0, 5);
  EXPECT_DOUBLE_EQ(l[2], 1.5);
}

TEST(GridRefine, FindsInteriorExtremum) {
  auto f = [](double x) { return -(x - 0.3137) * (x - 0.3137); };
  const auto best = grid_refine_max(f, linspace(0.0, 1.0, 11), 1e-10);
  EXPECT_NEAR(best.x, 0.3137, 1e-8);
  const auto lo = grid_refine_min([&](double x) { return -f(x); }, linspace(0.0, 1.0, 11), 1e-10);
  EXPECT_NEAR(lo.x, 0.3137, 1e-8);
}

TEST(GridRefine, NeverWorseThanGrid) {
  auto f = [](double x) { return std::sin(5 * x) + 0.1 * x; };
  const auto grid = linspace(0.0, 3.0, 64);
  const auto best = grid_refine_max(f, grid, 1e-9);
  for (double x : grid) EXPECT_GE(best.value, f(x));
}

TEST(BracketedRoot, SolvesAndRejectsBadBracket) {
  EXPECT_NEAR(bracketed_root([](double x) { return x * x - 2.0; }, 0.0, 2.0), std::sqrt(2.0),
              1e-14);
  EXPECT_THROW(bracketed_root([](double x) { return x * x + 1.0; }, 0.0, 2.0), std::domain_error);
}

TEST(Integrate, Polynomial) {
  EXPECT_NEAR(integrate([](double x) { return x * x; }, 0.0, 3.0, 1e-12), 9.0, 1e-12);
  const auto q = integrate_estimate([](double x) { return std::exp(-x); }, 0.0, 1.0, 1e-12);
  EXPECT_NEAR(q.value, 1.0 - std::exp(-1.0), 1e-14);
}
