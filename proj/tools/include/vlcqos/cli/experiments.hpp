#ifndef VLCQOS_CLI_EXPERIMENTS_HPP
#define VLCQOS_CLI_EXPERIMENTS_HPP

#include <cstdint>

#include "vlcqos/cli/config.hpp"
#include "vlcqos/cli/csv_table.hpp"

namespace vlcqos::cli {

struct RunOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// Rows (power, theta_t) -> rho*, p_on*.
Table run_opt_rate_sweep(const ExperimentSpec& spec, const RunOptions& opts);

/// Rows (power, theta_t, theta) -> effective capacity of the theta_t-optimal service.
Table run_ec_sweep(const ExperimentSpec& spec, const RunOptions& opts);

/// Rows (power, source, theta) -> delta with rho*(theta), and the full-CSI reference.
Table run_max_arrival_sweep(const ExperimentSpec& spec, const RunOptions& opts);

/// Rows (power, theta_t, source, load) -> queue and delay bounds; loads at or
/// above 1 report status "unstable".
Table run_delay_bound_sweep(const ExperimentSpec& spec, const RunOptions& opts);

struct ValidationReport {
  Table table;
  bool passed = false;
};

/// Acceptance criteria plus the eps = 1 bound check, one row each.
ValidationReport run_validate(const ExperimentSpec& spec, const RunOptions& opts);

}  // namespace vlcqos::cli

#endif  // VLCQOS_CLI_EXPERIMENTS_HPP
