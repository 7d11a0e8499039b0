#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "vlcqos/cli/config.hpp"
#include "vlcqos/cli/csv_table.hpp"
#include "vlcqos/cli/experiments.hpp"

using namespace vlcqos;
using namespace vlcqos::cli;

namespace {

ExperimentSpec parse(const std::string& text, Experiment e = Experiment::OptRate) {
  std::istringstream in(text);
  return parse_config(in, e, "test.ini");
}

int error_line(const std::string& text, Experiment e = Experiment::OptRate) {
  try {
    parse(text, e);
  } catch (const ConfigError& err) {
    return err.line();
  }
  return -1;
}

double cell(const Table& t, std::size_t row, const std::string& col) {
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (t.header[i] == col) return std::stod(t.rows[row][i]);
  }
  throw std::out_of_range(col);
}

std::string csv(const Table& t) {
  std::ostringstream out;
  write_csv(out, t, {"test", "0", "x", 1});
  return out.str();
}

}  // namespace

TEST(Config, ParsesUnitsAndGrids) {
  const auto s = parse(
      "experiment = opt-rate-sweep\n"
      "[phy]\n"
      "power = 200mW, 0.4W, 1   # watts by default\n"
      "cell_radius_m = 2.5\n"
      "[sweep]\n"
      "theta_t_db = -3, -30\n"
      "theta = logspace(-6, -2, 5)\n");
  ASSERT_EQ(s.powers_w.size(), 3u);
  EXPECT_DOUBLE_EQ(s.powers_w[0], 0.2);
  EXPECT_DOUBLE_EQ(s.powers_w[1], 0.4);
  EXPECT_DOUBLE_EQ(s.powers_w[2], 1.0);
  EXPECT_DOUBLE_EQ(s.phy.cell_radius_m, 2.5);
  EXPECT_NEAR(s.theta_ts[0], 0.501187, 1e-6);
  EXPECT_NEAR(s.theta_ts[1], 1e-3, 1e-15);
  ASSERT_EQ(s.thetas.size(), 5u);
  EXPECT_NEAR(s.thetas[2], 1e-4, 1e-18);
}

TEST(Config, PairedSources) {
  const auto s = parse("[source]\ngamma = 0.3, 0.5\nbeta = 0.7, 0.5\n", Experiment::MaxArrival);
  ASSERT_EQ(s.sources.size(), 2u);
  EXPECT_DOUBLE_EQ(s.sources[1].gamma, 0.5);
  EXPECT_EQ(error_line("[source]\ngamma = 0.3, 0.5\nbeta = 0.7\n"), 3);
  EXPECT_EQ(error_line("[source]\ngamma = 0.3\n"), 0);
}

TEST(Config, ErrorsCarryLineAndField) {
  EXPECT_EQ(error_line("[phy]\n\nfov_deg = abc\n"), 3);
  EXPECT_EQ(error_line("[nope]\n"), 1);
  EXPECT_EQ(error_line("[phy]\nwavelength = 3\n"), 2);
  EXPECT_EQ(error_line("[sweep]\ntheta = 1e-3\ntheta = 1e-4\n"), 3);
  EXPECT_EQ(error_line("[sweep]\ntheta = 1e-3\ntheta_db = -30\n"), 3);
  EXPECT_EQ(error_line("[sweep]\ntheta = -1\n"), 2);
  EXPECT_EQ(error_line("[bounds]\nepsilon = 2\n"), 2);
  EXPECT_EQ(error_line("[bounds]\neps_split = sometimes\n"), 2);
  EXPECT_EQ(error_line("[phy]\nfov_deg = 20\n"), 2);
  EXPECT_EQ(error_line("[phy]\npower = 5dBm\n"), 2);
  EXPECT_EQ(error_line("experiment = validate\n"), 1);
  EXPECT_EQ(error_line("[sweep]\ntheta = logspace(1, 2)\n"), 2);
  try {
    parse("[phy]\nfov_deg = abc\n");
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "phy.fov_deg");
    EXPECT_NE(std::string(e.what()).find("test.ini:2"), std::string::npos);
  }
}

TEST(Config, HashIgnoresFormatting) {
  const auto a = parse("[phy]\npower = 200mW\n");
  const auto b = parse("# comment\n[phy]\n   power=0.2   ; trailing\n");
  EXPECT_EQ(spec_hash(a), spec_hash(b));
  const auto c = parse("[phy]\npower = 0.3\n");
  EXPECT_NE(spec_hash(a), spec_hash(c));
  EXPECT_EQ(spec_hash(a).size(), 16u);
}

TEST(Csv, QuotesAndProvenance) {
  const Table t{{"a", "b"}, {{"1", "x, \"y\""}}};
  const auto text = csv(t);
  EXPECT_EQ(text, "# vlcqos test experiment=x spec_hash=0 seed=1\na,b\n1,\"x, \"\"y\"\"\"\n");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(NAN), "nan");
}

TEST(OptRateSweep, ShapeOfCurves) {
  auto spec = default_spec(Experiment::OptRate);
  spec.powers_w = {0.4, 0.2};  // deliberately unsorted
  const auto t = run_opt_rate_sweep(spec, {1, 2});
  const std::size_t n = spec.theta_ts.size();
  ASSERT_EQ(t.rows.size(), 2 * n);
  EXPECT_DOUBLE_EQ(cell(t, 0, "power_w"), 0.2);
  const double tol = 1e-6 * cell(t, 0, "rho_max");
  for (std::size_t i = 1; i < n; ++i) {
    EXPECT_LE(cell(t, i, "rho_star"), cell(t, i - 1, "rho_star") + tol);
    EXPECT_GT(cell(t, i, "theta_t"), cell(t, i - 1, "theta_t"));
  }
  EXPECT_NEAR(cell(t, n - 1, "rho_star"), cell(t, n - 1, "rho_min"), tol);
  // More power supports higher rates at loose exponents.
  EXPECT_GT(cell(t, n, "rho_star"), cell(t, 0, "rho_star"));
}

TEST(EcSweep, SaturatedRowIsFlat) {
  auto spec = default_spec(Experiment::EffectiveCapacity);
  const auto t = run_ec_sweep(spec, {1, 1});
  const std::size_t n = spec.thetas.size();
  const std::size_t last = spec.theta_ts.size() - 1;  // -3 dB row
  const double first = cell(t, last * n, "effective_capacity");
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_DOUBLE_EQ(cell(t, last * n + i, "rho_star"), cell(t, last * n, "rho_star"));
    EXPECT_NEAR(cell(t, last * n + i, "effective_capacity"), first, 1e-9 * first);
  }
  for (std::size_t r = 0; r < last; ++r) {
    for (std::size_t i = 1; i < n; ++i) {
      EXPECT_LE(cell(t, r * n + i, "effective_capacity"),
                cell(t, r * n + i - 1, "effective_capacity") * (1 + 1e-12));
    }
    const double mean = cell(t, r * n, "p_on_star") * cell(t, r * n, "rho_star");
    EXPECT_NEAR(cell(t, r * n, "effective_capacity") / mean, 1.0, 1e-3);
  }
}

TEST(MaxArrivalSweep, OrderingAndLimits) {
  auto spec = default_spec(Experiment::MaxArrival);
  spec.sources = {{0.3, 0.7}, {0.1, 0.9}, {0.5, 0.5}};
  spec.thetas = {1e-8, 1e-6, 1.0};
  const auto t = run_max_arrival_sweep(spec, {1, 3});
  ASSERT_EQ(t.rows.size(), 9u);
  EXPECT_DOUBLE_EQ(cell(t, 0, "gamma"), 0.1);  // sources sorted
  for (std::size_t s = 0; s < 3; ++s) {
    const std::size_t r = 3 * s;
    const double mean = cell(t, r, "p_on_star") * cell(t, r, "rho_star");
    EXPECT_NEAR(cell(t, r, "delta_fixed") / mean, 1.0, 1e-3);
    EXPECT_GE(cell(t, r + 1, "delta_ref"), cell(t, r + 1, "delta_fixed"));
    const double p_os = cell(t, r, "beta") / (cell(t, r, "gamma") + cell(t, r, "beta"));
    EXPECT_NEAR(cell(t, r + 2, "delta_fixed") / (p_os * cell(t, r + 2, "rho_star")), 1.0, 1e-2);
  }
}

TEST(DelaySweep, AsymptoteAndPower) {
  auto spec = default_spec(Experiment::DelayBound);
  spec.powers_w = {0.2, 0.4};
  const auto t = run_delay_bound_sweep(spec, {1, 2});
  const std::size_t n = spec.loads.size();
  for (std::size_t p = 0; p < 2; ++p) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      EXPECT_GT(cell(t, p * n + i, "tau_frames"), cell(t, p * n + i - 1, "tau_frames"));
    }
    EXPECT_EQ(t.rows[p * n + n - 1].back(), "unstable");
  }
  // The higher-power asymptote sits at a larger arrival rate.
  EXPECT_GT(cell(t, 2 * n - 1, "r_avg"), cell(t, n - 1, "r_avg"));
}

TEST(Sweeps, ThreadCountDoesNotChangeOutput) {
  auto spec = default_spec(Experiment::MaxArrival);
  spec.thetas = {1e-7, 1e-5, 1e-3, 1e-1};
  EXPECT_EQ(csv(run_max_arrival_sweep(spec, {1, 1})), csv(run_max_arrival_sweep(spec, {1, 4})));
  auto d = default_spec(Experiment::DelayBound);
  EXPECT_EQ(csv(run_delay_bound_sweep(d, {1, 1})), csv(run_delay_bound_sweep(d, {1, 3})));
}
