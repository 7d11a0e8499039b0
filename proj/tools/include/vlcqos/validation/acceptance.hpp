#ifndef VLCQOS_VALIDATION_ACCEPTANCE_HPP
#define VLCQOS_VALIDATION_ACCEPTANCE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace vlcqos::validation {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // measured values
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240607;
  /// Post-warmup frames for the simulation-backed criteria.
  std::int64_t sim_frames = 10'000'000;
  /// Criterion ids to run; empty runs all nine.
  std::vector<int> only;
};

using ResultSink = std::function<void(const CriterionResult&)>;

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const ResultSink& sink = {});

/// "PASS  3  constant-source collapse  (0.01 s)  max rel diff 0"
std::string format_result(const CriterionResult& r);

}  // namespace vlcqos::validation

#endif  // VLCQOS_VALIDATION_ACCEPTANCE_HPP
