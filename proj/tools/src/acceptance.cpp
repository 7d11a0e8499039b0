#include "vlcqos/validation/acceptance.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "vlcqos/markov_onoff.hpp"
#include "vlcqos/nonasym_bounds.hpp"
#include "vlcqos/numeric.hpp"
#include "vlcqos/phy_channel.hpp"
#include "vlcqos/qos_analysis.hpp"
#include "vlcqos/queue_sim.hpp"
#include "vlcqos/validation/oracles.hpp"

namespace vlcqos::validation {

namespace {

using markov::OnOffChain;
using markov::ServiceAbstraction;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool ok;
  std::string detail;
};

double rel_diff(double a, double b) {
  if (a == b) return 0.0;
  return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Services that appear in the Table-1 sweeps plus two generic ones.
std::vector<ServiceAbstraction> limit_services() {
  const phy::PhyConfig cfg;
  const auto interval = phy::rate_interval(cfg);
  return {qos::optimize_fixed_rate(cfg, 1e-8).service(),
          qos::optimize_fixed_rate(cfg, 1e-4).service(),
          {0.9, 2000.0},
          {0.5, 1000.0},
          {1.0, interval.rho_min}};
}

Outcome oracle_equivalence(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  int infeasible = 0;
  for (int i = 0; i < 200; ++i) {
    const OnOffChain src{uniform(rng, 0.05, 0.95), uniform(rng, 0.05, 0.95),
                         log_uniform(rng, 1e2, 1e4)};
    const ServiceAbstraction svc{uniform(rng, 0.1, 1.0), log_uniform(rng, 1e2, 1e4)};
    const double theta = log_uniform(rng, 1e-5, 1e-1);
    const auto lib = qos::max_avg_arrival_rate(src, svc, theta);
    if (!lib.feasible) {
      ++infeasible;
      continue;
    }
    const double log_d = oracle::direct_service_log_mgf(svc.p_on, svc.rho, theta);
    const double ref = oracle::bisection_max_arrival_rate(src.gamma, src.beta, log_d, theta);
    worst = std::max(worst, rel_diff(lib.bits_per_frame, ref));
  }
  return {worst <= 1e-9 && infeasible == 0,
          fmt::format("max rel diff {:.2e} over 200 tuples (tol 1e-9), infeasible {}", worst,
                      infeasible)};
}

Outcome limit_identities() {
  const double probs[] = {0.1, 0.3, 0.5, 0.7, 0.9};
  double worst_small = 0.0;
  double worst_large = 0.0;
  for (double g : probs) {
    for (double b : probs) {
      const OnOffChain src{g, b, 1.0};
      for (const auto& svc : limit_services()) {
        const auto d = qos::max_avg_arrival_rate(src, svc, 1e-8);
        worst_small = std::max(worst_small, d.feasible ? rel_diff(d.bits_per_frame,
                                                                  svc.mean_rate())
                                                       : kInf);
        const ServiceAbstraction always_on{1.0, svc.rho};
        const auto s = qos::max_avg_arrival_rate(src, always_on, 10.0);
        const double expect = markov::steady_state(src).p_on * svc.rho;
        worst_large = std::max(worst_large,
                               s.feasible ? rel_diff(s.bits_per_frame, expect) : kInf);
      }
    }
  }
  return {worst_small <= 1e-3 && worst_large <= 1e-3,
          fmt::format("theta=1e-8 vs p_on*rho: {:.2e}; p_on=1, theta=10 vs p_os*rho: {:.2e} "
                      "(tol 1e-3, 25 sources x 5 services)",
                      worst_small, worst_large)};
}

Outcome constant_source_collapse() {
  const auto thetas = numeric::logspace(1e-8, 10.0, 100);
  const OnOffChain constant{0.0, 1.0, 1.0};
  double worst = 0.0;
  for (const auto& svc : limit_services()) {
    for (double theta : thetas) {
      const auto d = qos::max_avg_arrival_rate(constant, svc, theta);
      const double ec = qos::effective_capacity(svc, theta);
      worst = std::max(worst, d.feasible ? rel_diff(d.bits_per_frame, ec) : kInf);
    }
  }
  const double tol = 4.0 * std::numeric_limits<double>::epsilon();
  return {worst <= tol,
          fmt::format("max rel diff {:.2e} over 100 theta x 5 services (tol {:.1e})", worst, tol)};
}

Outcome monotonicity() {
  const phy::PhyConfig cfg;
  const auto interval = phy::rate_interval(cfg);
  const double rate_tol = 1e-6 * interval.rho_max;

  int ec_violations = 0;
  const auto thetas = numeric::logspace(1e-8, 10.0, 200);
  for (double theta_t : {1e-7, 1e-5, 1e-4, 1e-3}) {
    const auto svc = qos::optimize_fixed_rate(cfg, theta_t).service();
    double prev = kInf;
    for (double theta : thetas) {
      const double ec = qos::effective_capacity(svc, theta);
      if (ec > prev * (1.0 + 1e-12)) ++ec_violations;
      prev = ec;
    }
  }

  int rho_violations = 0;
  double prev_rho = kInf;
  double last_rho = 0.0;
  for (double theta_t : numeric::logspace(1e-8, 1.0, 60)) {
    last_rho = qos::optimize_fixed_rate(cfg, theta_t).rho_star;
    if (last_rho > prev_rho + rate_tol) ++rho_violations;
    prev_rho = last_rho;
  }
  const double terminal_gap = std::fabs(last_rho - interval.rho_min);

  int pon_violations = 0;
  double prev_p = kInf;
  for (double rho : numeric::linspace(0.5 * interval.rho_min, 1.2 * interval.rho_max, 20001)) {
    const double p = phy::on_probability(cfg, rho);
    if (p > prev_p) ++pon_violations;
    prev_p = p;
  }
  const double p_lo = phy::on_probability(cfg, interval.rho_min);
  const double p_hi = phy::on_probability(cfg, interval.rho_max);

  const bool ok = ec_violations == 0 && rho_violations == 0 && terminal_gap <= rate_tol &&
                  pon_violations == 0 && p_lo == 1.0 && p_hi == 0.0;
  return {ok, fmt::format("EC increases {}; rho* increases {}; |rho*(1) - rho_min| {:.2e} "
                          "(tol {:.2e}); p_on increases {}; p_on(rho_min)={} p_on(rho_max)={}",
                          ec_violations, rho_violations, terminal_gap, rate_tol,
                          pon_violations, p_lo, p_hi)};
}

// Decay rate at which the source and service log-MGFs balance.
double matching_decay(const OnOffChain& src, const ServiceAbstraction& svc) {
  auto f = [&](double theta) {
    return markov::source_log_mgf(src, theta) + markov::service_log_mgf(svc, theta);
  };
  double hi = 1e-6;
  while (f(hi) <= 0.0) hi *= 2.0;
  return numeric::bracketed_root(f, hi / 2.0, hi);
}

Outcome large_deviations(std::uint64_t seed, std::int64_t frames) {
  const double theta_star = 1e-3;
  OnOffChain src{0.3, 0.7, 0.0};
  const ServiceAbstraction svc{0.7, 1000.0};
  const auto delta = qos::max_avg_arrival_rate(src, svc, theta_star);
  src.rate_on = 0.95 * delta.bits_per_frame / markov::steady_state(src).p_on;

  sim::SimConfig cfg;
  cfg.source = src;
  cfg.service = svc;
  cfg.frames = cfg.warmup + frames;
  cfg.seed = seed;
  const auto trace = sim::simulate(cfg);

  // Fit from two decay lengths out to where at least 1000 frames remain in the tail.
  const double q_lo = 2.0 / theta_star;
  double q_hi = q_lo;
  for (const auto& pt : trace.queue_tail) {
    if (pt.count_ge >= 1000) q_hi = static_cast<double>(pt.value);
  }
  double theta_hat = 0.0;
  try {
    theta_hat = sim::tail_decay_estimate(trace, q_lo, q_hi);
  } catch (const sim::InsufficientTailMass& e) {
    return {false, fmt::format("lambda {:.3f}: {}", src.rate_on, e.what())};
  }
  const double predicted = matching_decay(
      {src.gamma, src.beta, static_cast<double>(trace.arrival_bits)}, svc);
  const double ratio = theta_hat / theta_star;
  return {ratio >= 0.85 && ratio <= 1.15,
          fmt::format("lambda {} bits, fit q in [{:.0f}, {:.0f}]: theta_hat {:.4e} = {:.3f} "
                      "theta* (need [0.85, 1.15]); decay predicted at this load {:.4e}, "
                      "theta_hat/predicted {:.3f}",
                      trace.arrival_bits, q_lo, q_hi, theta_hat, ratio, predicted,
                      theta_hat / predicted)};
}

Outcome bound_validity(std::uint64_t seed, std::int64_t frames) {
  struct System {
    const char* label;
    OnOffChain src;
    ServiceAbstraction svc;
  };
  const ServiceAbstraction svc{0.9, 2000.0};
  const System systems[] = {
      {"lambda=1000", {0.3, 0.7, 1000.0}, svc},
      {"r_avg=0.8*p_on*rho", {0.3, 0.7, 0.8 * svc.mean_rate() / 0.7}, svc},
  };
  bool ok = true;
  std::string detail;
  std::uint64_t stream = 0;
  for (const auto& sys : systems) {
    sim::SimConfig cfg;
    cfg.source = sys.src;
    cfg.service = sys.svc;
    cfg.frames = cfg.warmup + frames;
    cfg.seed = seed + stream++;
    const auto trace = sim::simulate(cfg);
    for (double eps : {1e-2, 1e-3}) {
      const auto b = bounds::queue_bound(sys.src, sys.svc, bounds::BoundQuery::even_split(eps));
      const auto v = sim::violation_probs(trace, b.q, b.tau);
      const bool pass_q = v.p_queue <= eps + 3.0 * v.se_queue;
      const bool pass_d = v.p_delay <= eps + 3.0 * v.se_delay;
      ok = ok && pass_q && pass_d;
      detail += fmt::format("{}{} eps={:g}: q={:.1f} P(Q>q)={:.2e}, tau={:.3f} P(D>tau)={:.2e}",
                            detail.empty() ? "" : "; ", sys.label, eps, b.q, v.p_queue, b.tau,
                            v.p_delay);
    }
  }
  return {ok, detail};
}

Outcome reference_ordering() {
  const phy::PhyConfig cfg;  // P = 200 mW, d_c = 3 m
  const double theta = 1e-6;
  const auto svc = qos::optimize_fixed_rate(cfg, theta).service();
  bool ok = true;
  std::string detail;
  for (const auto& [g, b] : {std::pair{0.3, 0.7}, {0.5, 0.5}, {0.1, 0.9}}) {
    const OnOffChain src{g, b, 1.0};
    const auto fixed = qos::max_avg_arrival_rate(src, svc, theta);
    const auto ref = qos::reference_max_arrival_rate(src, cfg, theta);
    ok = ok && fixed.feasible && ref.feasible && ref.bits_per_frame >= fixed.bits_per_frame;
    detail += fmt::format("{}(g={:g}, b={:g}) ref {:.2f} >= fixed {:.2f}",
                          detail.empty() ? "" : "; ", g, b, ref.bits_per_frame,
                          fixed.bits_per_frame);
  }
  return {ok, detail};
}

Outcome time_variant_convergence(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  double scaled_drift = 0.0;  // relative change of t * gap between t = 1e4 and 2e4
  for (int i = 0; i < 20; ++i) {
    const OnOffChain src{uniform(rng, 0.05, 0.95), uniform(rng, 0.05, 0.95),
                         log_uniform(rng, 1e2, 1e4)};
    for (double theta : {1e-4, 1e-3, 1e-2}) {
      const double asym = markov::source_log_mgf(src, theta);
      const double gap = markov::arrival_log_mgf_finite(src, theta, 10000) - asym;
      const double gap2 = markov::arrival_log_mgf_finite(src, theta, 20000) - asym;
      worst = std::max(worst, std::fabs(gap));
      if (std::fabs(gap) > 1e-9) {
        scaled_drift = std::max(scaled_drift, rel_diff(1e4 * gap, 2e4 * gap2));
      }
    }
  }
  return {worst <= 1e-6,
          fmt::format("max |Lambda_a(theta, 1e4) - Lambda_s| {:.3e} (tol 1e-6); "
                      "t * gap constant between t=1e4 and 2e4 to {:.1e}",
                      worst, scaled_drift)};
}

Outcome delay_asymptote() {
  const phy::PhyConfig cfg;
  const auto svc = qos::optimize_fixed_rate(cfg, 1e-4).service();
  OnOffChain src{0.3, 0.7, 0.0};
  const double p_os = markov::steady_state(src).p_on;
  const bounds::BoundQuery query;
  bool increasing = true;
  double prev = -kInf;
  std::string taus;
  for (double load : {0.5, 0.7, 0.8, 0.9, 0.95}) {
    src.rate_on = load * svc.mean_rate() / p_os;
    const double tau = bounds::delay_bound(src, svc, query);
    increasing = increasing && tau > prev;
    prev = tau;
    taus += fmt::format("{}{:.3f}", taus.empty() ? "" : ", ", tau);
  }
  bool unstable = false;
  src.rate_on = svc.mean_rate() / p_os;
  try {
    bounds::delay_bound(src, svc, query);
  } catch (const bounds::UnstableSystemError&) {
    unstable = true;
  }
  return {increasing && unstable,
          fmt::format("tau at loads 0.5..0.95 = [{}] frames; load 1.0 {}", taus,
                      unstable ? "unstable system" : "did not report instability")};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome(const AcceptanceOptions&)> run;
};

std::vector<Criterion> criteria() {
  return {
      {1, "closed form vs bisection", 5.0,
       [](const AcceptanceOptions& o) { return oracle_equivalence(o.seed + 1); }},
      {2, "limit identities", 1.0, [](const AcceptanceOptions&) { return limit_identities(); }},
      {3, "constant-source collapse", kInf,
       [](const AcceptanceOptions&) { return constant_source_collapse(); }},
      {4, "monotonicity", 10.0, [](const AcceptanceOptions&) { return monotonicity(); }},
      {5, "tail decay vs theta*", 60.0,
       [](const AcceptanceOptions& o) { return large_deviations(o.seed + 5, o.sim_frames); }},
      {6, "bound validity", 120.0,
       [](const AcceptanceOptions& o) { return bound_validity(o.seed + 6, o.sim_frames); }},
      {7, "reference ordering", kInf,
       [](const AcceptanceOptions&) { return reference_ordering(); }},
      {8, "time-variant convergence", kInf,
       [](const AcceptanceOptions& o) { return time_variant_convergence(o.seed + 8); }},
      {9, "delay asymptote", kInf, [](const AcceptanceOptions&) { return delay_asymptote(); }},
  };
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const ResultSink& sink) {
  std::vector<CriterionResult> results;
  for (const auto& c : criteria()) {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), c.id) == options.only.end()) {
      continue;
    }
    CriterionResult r{c.id, c.name, false, {}, 0.0};
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto out = c.run(options);
      r.passed = out.ok;
      r.detail = out.detail;
    } catch (const std::exception& e) {
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > c.time_limit_s) {
      r.passed = false;
      r.detail += fmt::format("; runtime {:.2f} s exceeds {:g} s", r.seconds, c.time_limit_s);
    }
    if (sink) sink(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  return fmt::format("{}  {}  {}  ({:.2f} s)  {}", r.passed ? "PASS" : "FAIL", r.id, r.name,
                     r.seconds, r.detail);
}

}  // namespace vlcqos::validation
