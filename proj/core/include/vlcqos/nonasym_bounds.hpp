#ifndef VLCQOS_NONASYM_BOUNDS_HPP
#define VLCQOS_NONASYM_BOUNDS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vlcqos/markov_onoff.hpp"

namespace vlcqos::bounds {

/// Raised when no drain rate c lies strictly between the mean arrival rate and
/// the mean service rate.
class UnstableSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Search configuration for the nested bound optimisation.
///
/// Empty `theta_grid` / `c_grid` mean "build a log-spaced grid over the
/// admissible interval" with `theta_points` / `c_points` nodes. An explicit
/// grid is filtered to the admissible interval before use.
struct BoundQuery {
  double eps_c = 5e-4;
  double eps_a = 5e-4;
  std::vector<double> c_grid;
  std::vector<double> theta_grid;
  std::size_t c_points = 256;
  std::size_t theta_points = 512;
  std::int64_t t_max = 10000;
  /// Also try 16 service/arrival splits of eps and keep the best.
  bool optimize_split = false;

  double epsilon() const { return eps_c + eps_a; }
  void validate() const;

  static BoundQuery even_split(double epsilon);
};

/// One side (service or arrival) of the queue bound at a fixed c.
struct SideBound {
  double q;      // bits, clamped at 0
  double theta;  // maximiser of the inner sup
};

struct BoundResult {
  double q_c = 0.0;
  double q_a = 0.0;
  double q = 0.0;       // bits
  double tau = 0.0;     // frames
  double argmin_c = 0.0;
  double argmin_c_delay = 0.0;
  double argsup_theta_c = 0.0;
  double argsup_theta_a = 0.0;
  double eps_c = 0.0;
  double eps_a = 0.0;
};

/// Grid handling for the inner sup over theta.
struct ThetaSearch {
  std::vector<double> grid;  // empty = automatic
  std::size_t points = 512;
};

/// Service-side term q_c at drain rate c; nullopt when c >= p_on * rho.
std::optional<SideBound> qc_bound(const markov::ServiceAbstraction& svc, double eps_c,
                                  double c, const ThetaSearch& search = {});

/// Arrival-side term q_a at drain rate c; nullopt when c <= r_avg.
std::optional<SideBound> qa_bound(const markov::OnOffChain& source, double eps_a,
                                  double c, const ThetaSearch& search = {},
                                  std::int64_t t_max = 10000);

/// Queue-length and delay bounds: q = inf_c (q_c + q_a), tau = inf_c (q_c + q_a) / c.
/// Throws UnstableSystemError when r_avg >= p_on * rho.
BoundResult queue_bound(const markov::OnOffChain& source,
                        const markov::ServiceAbstraction& svc, const BoundQuery& query);

/// Delay bound in frames; same preconditions as queue_bound.
double delay_bound(const markov::OnOffChain& source,
                   const markov::ServiceAbstraction& svc, const BoundQuery& query);

}  // namespace vlcqos::bounds

#endif  // VLCQOS_NONASYM_BOUNDS_HPP
