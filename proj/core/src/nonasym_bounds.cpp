#include "vlcqos/nonasym_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>

#include "vlcqos/numeric.hpp"

namespace vlcqos::bounds {

namespace {

constexpr double kThetaSpan = 1e-9;    // grid covers [theta_up * span, theta_up * (1 - span)]
constexpr double kCGuard = 1e-6;       // c in (r_avg (1 + guard), p_on rho (1 - guard))
constexpr int kSplitCandidates = 16;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Largest theta with slack(theta) > 0, given slack > 0 just above zero and
// slack eventually <= 0. Returns +inf if slack stays positive up to `cap`.
double admissible_upper(const std::function<double(double)>& slack, double start,
                        double cap) {
  double hi = start;
  while (slack(hi) > 0.0) {
    if (hi >= cap) return std::numeric_limits<double>::infinity();
    hi = std::min(2.0 * hi, cap);
  }
  double lo = hi;
  for (int i = 0; i < 400 && !(slack(lo) > 0.0); ++i) lo *= 0.5;
  if (!(slack(lo) > 0.0)) return 0.0;
  return numeric::bracketed_root(slack, lo, hi);
}

// -sup_theta ln(eps * slack(theta)) / theta over theta in (0, theta_up),
// clamped at 0.
std::optional<SideBound> side_sup(const std::function<double(double)>& slack,
                                  double eps, double theta_up,
                                  const ThetaSearch& search) {
  if (!(theta_up > 0.0)) return std::nullopt;
  const double log_eps = std::log(eps);
  auto objective = [&](double theta) {
    if (!(theta > 0.0)) return kNegInf;
    const double s = slack(theta);
    return s > 0.0 ? (log_eps + std::log(s)) / theta : kNegInf;
  };

  std::vector<double> grid;
  if (search.grid.empty()) {
    grid = numeric::logspace(theta_up * kThetaSpan, theta_up * (1.0 - kThetaSpan),
                             std::max<std::size_t>(search.points, 2));
  } else {
    for (double t : search.grid) {
      if (t > 0.0 && t < theta_up) grid.push_back(t);
    }
    if (grid.empty()) return std::nullopt;
  }
  const auto best = numeric::grid_refine_max(objective, grid, 1e-9 * grid.back());
  if (!std::isfinite(best.value)) return std::nullopt;
  return SideBound{std::max(0.0, -best.value), best.x};
}

}  // namespace

void BoundQuery::validate() const {
  if (!(eps_c > 0.0) || !(eps_a > 0.0)) {
    throw std::invalid_argument("BoundQuery: eps_c and eps_a must be > 0");
  }
  if (epsilon() > 1.0) {
    throw std::invalid_argument("BoundQuery: eps_c + eps_a must be <= 1");
  }
  if (t_max < 1) throw std::invalid_argument("BoundQuery: t_max must be >= 1");
  if (theta_points < 2 || c_points < 2) {
    throw std::invalid_argument("BoundQuery: grids need at least 2 points");
  }
  for (const auto* g : {&c_grid, &theta_grid}) {
    if (!std::all_of(g->begin(), g->end(), [](double v) { return v > 0.0; }) ||
        !std::is_sorted(g->begin(), g->end())) {
      throw std::invalid_argument("BoundQuery: explicit grids must be positive and sorted");
    }
  }
}

BoundQuery BoundQuery::even_split(double epsilon) {
  BoundQuery q;
  q.eps_c = 0.5 * epsilon;
  q.eps_a = 0.5 * epsilon;
  return q;
}

std::optional<SideBound> qc_bound(const markov::ServiceAbstraction& svc, double eps_c,
                                  double c, const ThetaSearch& search) {
  svc.validate();
  if (!(c > 0.0)) throw std::invalid_argument("qc_bound: c must be > 0");
  if (!(eps_c > 0.0)) throw std::invalid_argument("qc_bound: eps_c must be > 0");
  if (c >= svc.mean_rate()) return std::nullopt;

  auto slack = [&svc, c](double theta) {
    return -(markov::service_log_mgf(svc, theta) + theta * c);
  };
  if (svc.p_on >= 1.0) {
    // slack = theta (rho - c) grows without bound; the raw sup is positive.
    return SideBound{0.0, std::numbers::e / (eps_c * (svc.rho - c))};
  }
  const double theta_up = admissible_upper(
      slack, 1.0 / svc.mean_rate(), std::numeric_limits<double>::max());
  return side_sup(slack, eps_c, theta_up, search);
}

std::optional<SideBound> qa_bound(const markov::OnOffChain& source, double eps_a,
                                  double c, const ThetaSearch& search,
                                  std::int64_t t_max) {
  source.validate();
  if (!(c > 0.0)) throw std::invalid_argument("qa_bound: c must be > 0");
  if (!(eps_a > 0.0)) throw std::invalid_argument("qa_bound: eps_a must be > 0");
  if (c <= markov::source_avg_rate(source)) return std::nullopt;
  if (c > source.rate_on) {
    // slack >= theta (c - lambda) grows without bound.
    return SideBound{0.0, std::numbers::e / (eps_a * (c - source.rate_on))};
  }

  auto slack = [&source, c, t_max](double theta) {
    return theta * c - markov::arrival_log_mgf_sup(source, theta, t_max);
  };
  // c == lambda keeps slack positive but bounded; cap the search there.
  const double cap = 1e4 / c;
  double theta_up = admissible_upper(slack, 1.0 / source.rate_on, cap);
  if (!std::isfinite(theta_up)) theta_up = cap;
  return side_sup(slack, eps_a, theta_up, search);
}

BoundResult queue_bound(const markov::OnOffChain& source,
                        const markov::ServiceAbstraction& svc, const BoundQuery& query) {
  query.validate();
  source.validate();
  svc.validate();

  BoundResult result;
  result.eps_c = query.eps_c;
  result.eps_a = query.eps_a;
  if (query.epsilon() >= 1.0) return result;  // P(Q > 0) <= 1 holds trivially

  const double r_avg = markov::source_avg_rate(source);
  const double mean_service = svc.mean_rate();
  if (!(r_avg < mean_service)) {
    throw UnstableSystemError("queue_bound: mean arrival rate >= mean service rate");
  }

  std::vector<double> c_grid;
  const double c_lo = r_avg * (1.0 + kCGuard);
  const double c_hi = mean_service * (1.0 - kCGuard);
  if (query.c_grid.empty()) {
    if (c_hi > c_lo && c_lo > 0.0) {
      c_grid = numeric::logspace(c_lo, c_hi, query.c_points);
    } else if (c_hi > c_lo) {
      c_grid = numeric::linspace(c_hi * 1e-9, c_hi, query.c_points);
    }
  } else {
    for (double c : query.c_grid) {
      if (c > r_avg && c < mean_service) c_grid.push_back(c);
    }
  }
  if (c_grid.empty()) {
    throw UnstableSystemError("queue_bound: admissible drain-rate interval is empty");
  }

  std::vector<std::pair<double, double>> splits{{query.eps_c, query.eps_a}};
  if (query.optimize_split) {
    const double eps = query.epsilon();
    splits.emplace_back(0.5 * eps, 0.5 * eps);
    for (int k = 1; k <= kSplitCandidates; ++k) {
      const double w = static_cast<double>(k) / (kSplitCandidates + 1);
      splits.emplace_back(w * eps, (1.0 - w) * eps);
    }
  }

  const ThetaSearch search{query.theta_grid, query.theta_points};
  const double c_tol = 1e-8 * c_grid.back();
  double best_q = std::numeric_limits<double>::infinity();
  double best_tau = std::numeric_limits<double>::infinity();

  for (const auto& [eps_c, eps_a] : splits) {
    auto total = [&, eps_c = eps_c, eps_a = eps_a](double c) {
      const auto qc = qc_bound(svc, eps_c, c, search);
      const auto qa = qa_bound(source, eps_a, c, search, query.t_max);
      if (!qc || !qa) return std::numeric_limits<double>::infinity();
      return qc->q + qa->q;
    };
    std::vector<double> totals(c_grid.size());
    std::vector<double> delays(c_grid.size());
    for (std::size_t i = 0; i < c_grid.size(); ++i) {
      totals[i] = total(c_grid[i]);
      delays[i] = totals[i] / c_grid[i];
    }
    const auto q_opt = numeric::refine_min(total, c_grid, totals, c_tol);
    const auto tau_opt = numeric::refine_min(
        [&total](double c) { return total(c) / c; }, c_grid, delays, c_tol);

    if (q_opt.value < best_q) {
      best_q = q_opt.value;
      const auto qc = qc_bound(svc, eps_c, q_opt.x, search);
      const auto qa = qa_bound(source, eps_a, q_opt.x, search, query.t_max);
      result.q = q_opt.value;
      result.argmin_c = q_opt.x;
      result.q_c = qc ? qc->q : 0.0;
      result.q_a = qa ? qa->q : 0.0;
      result.argsup_theta_c = qc ? qc->theta : 0.0;
      result.argsup_theta_a = qa ? qa->theta : 0.0;
      result.eps_c = eps_c;
      result.eps_a = eps_a;
    }
    if (tau_opt.value < best_tau) {
      best_tau = tau_opt.value;
      result.tau = tau_opt.value;
      result.argmin_c_delay = tau_opt.x;
    }
  }
  if (!std::isfinite(best_q) || !std::isfinite(best_tau)) {
    throw UnstableSystemError("queue_bound: no drain rate admits both bound terms");
  }
  return result;
}

double delay_bound(const markov::OnOffChain& source,
                   const markov::ServiceAbstraction& svc, const BoundQuery& query) {
  return queue_bound(source, svc, query).tau;
}

}  // namespace vlcqos::bounds
