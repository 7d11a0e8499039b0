#ifndef VLCQOS_CLI_CONFIG_HPP
#define VLCQOS_CLI_CONFIG_HPP

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vlcqos/phy_channel.hpp"

namespace vlcqos::cli {

/// Raised for unreadable, malformed or inconsistent configs. `line` is 0 when
/// the problem is not tied to one line (e.g. a missing required key).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, std::string field, const std::string& message);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

enum class Experiment { OptRate, EffectiveCapacity, MaxArrival, DelayBound, Validate };

const char* experiment_name(Experiment e);
/// Throws std::invalid_argument for unknown names.
Experiment parse_experiment(const std::string& name);

struct SourceParams {
  double gamma;
  double beta;
};

struct ExperimentSpec {
  Experiment experiment = Experiment::OptRate;
  phy::PhyConfig phy;               // avg_power_w is overridden per power point
  std::vector<double> powers_w;
  std::vector<SourceParams> sources;
  std::vector<double> thetas;       // 1/bits
  std::vector<double> theta_ts;     // 1/bits
  std::vector<double> loads;        // fractions of the mean service rate
  double epsilon = 1e-3;
  bool optimize_split = false;
  std::int64_t t_max = 10000;
  std::int64_t validate_frames = 10'000'000;
};

/// Parses the key/value config text. Fields not given take per-experiment
/// defaults. `source_name` only labels error messages.
ExperimentSpec parse_config(std::istream& in, Experiment experiment,
                            const std::string& source_name = "<config>");

/// Defaults for `experiment` with no config file.
ExperimentSpec default_spec(Experiment experiment);

ExperimentSpec load_config(const std::string& path, Experiment experiment);

/// One "key = value" line per resolved field, numbers at full precision.
std::string canonical_text(const ExperimentSpec& spec);

/// 64-bit FNV-1a of canonical_text, as 16 hex digits.
std::string spec_hash(const ExperimentSpec& spec);

}  // namespace vlcqos::cli

#endif  // VLCQOS_CLI_CONFIG_HPP
