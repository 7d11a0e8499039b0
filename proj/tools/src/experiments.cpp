#include "vlcqos/cli/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <tuple>

#include "vlcqos/markov_onoff.hpp"
#include "vlcqos/nonasym_bounds.hpp"
#include "vlcqos/qos_analysis.hpp"
#include "vlcqos/validation/acceptance.hpp"

namespace vlcqos::cli {

namespace {

using Rows = std::vector<std::vector<std::string>>;

// Evaluates task(i) for i in [0, n) on up to `threads` workers and concatenates
// the row blocks in index order.
Rows parallel_rows(std::size_t n, unsigned threads, const std::function<Rows(std::size_t)>& task) {
  std::vector<Rows> blocks(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i; !failed && (i = next++) < n;) {
      try {
        blocks[i] = task(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  const unsigned k = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  Rows out;
  for (auto& b : blocks) std::move(b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<SourceParams> sorted(std::vector<SourceParams> v) {
  std::sort(v.begin(), v.end(), [](const SourceParams& a, const SourceParams& b) {
    return std::tie(a.gamma, a.beta) < std::tie(b.gamma, b.beta);
  });
  return v;
}

phy::PhyConfig with_power(const ExperimentSpec& spec, double p) {
  auto cfg = spec.phy;
  cfg.avg_power_w = p;
  return cfg;
}

std::string num(double v) { return format_number(v); }

std::string rate(const qos::ArrivalRate& r) {
  return r.feasible ? num(r.bits_per_frame) : "nan";
}

}  // namespace

Table run_opt_rate_sweep(const ExperimentSpec& spec, const RunOptions& opts) {
  const auto powers = sorted(spec.powers_w);
  const auto theta_ts = sorted(spec.theta_ts);
  Table t{{"power_w", "cell_radius_m", "theta_t", "rho_min", "rho_max", "rho_star", "p_on_star",
           "log_mgf_star"},
          {}};
  t.rows = parallel_rows(powers.size() * theta_ts.size(), opts.threads, [&](std::size_t i) {
    const double p = powers[i / theta_ts.size()];
    const double th = theta_ts[i % theta_ts.size()];
    const auto cfg = with_power(spec, p);
    const auto interval = phy::rate_interval(cfg);
    const auto opt = qos::optimize_fixed_rate(cfg, th);
    return Rows{{num(p), num(cfg.cell_radius_m), num(th), num(interval.rho_min),
                 num(interval.rho_max), num(opt.rho_star), num(opt.p_on_star),
                 num(opt.log_mgf_star)}};
  });
  return t;
}

Table run_ec_sweep(const ExperimentSpec& spec, const RunOptions& opts) {
  const auto powers = sorted(spec.powers_w);
  const auto theta_ts = sorted(spec.theta_ts);
  const auto thetas = sorted(spec.thetas);
  Table t{{"power_w", "cell_radius_m", "theta_t", "rho_star", "p_on_star", "theta",
           "effective_capacity"},
          {}};
  t.rows = parallel_rows(powers.size() * theta_ts.size(), opts.threads, [&](std::size_t i) {
    const double p = powers[i / theta_ts.size()];
    const double th_t = theta_ts[i % theta_ts.size()];
    const auto cfg = with_power(spec, p);
    const auto opt = qos::optimize_fixed_rate(cfg, th_t);
    Rows rows;
    for (double th : thetas) {
      rows.push_back({num(p), num(cfg.cell_radius_m), num(th_t), num(opt.rho_star),
                      num(opt.p_on_star), num(th),
                      num(qos::effective_capacity(opt.service(), th))});
    }
    return rows;
  });
  return t;
}

Table run_max_arrival_sweep(const ExperimentSpec& spec, const RunOptions& opts) {
  const auto powers = sorted(spec.powers_w);
  const auto sources = sorted(spec.sources);
  const auto thetas = sorted(spec.thetas);
  Table t{{"power_w", "cell_radius_m", "gamma", "beta", "theta", "rho_star", "p_on_star",
           "delta_fixed", "delta_ref"},
          {}};
  const std::size_t per_power = sources.size() * thetas.size();
  t.rows = parallel_rows(powers.size() * per_power, opts.threads, [&](std::size_t i) {
    const double p = powers[i / per_power];
    const auto& s = sources[(i % per_power) / thetas.size()];
    const double th = thetas[i % thetas.size()];
    const auto cfg = with_power(spec, p);
    const markov::OnOffChain src{s.gamma, s.beta, 1.0};
    const auto opt = qos::optimize_fixed_rate(cfg, th);
    return Rows{{num(p), num(cfg.cell_radius_m), num(s.gamma), num(s.beta), num(th),
                 num(opt.rho_star), num(opt.p_on_star),
                 rate(qos::max_avg_arrival_rate(src, opt.service(), th)),
                 rate(qos::reference_max_arrival_rate(src, cfg, th))}};
  });
  return t;
}

Table run_delay_bound_sweep(const ExperimentSpec& spec, const RunOptions& opts) {
  const auto powers = sorted(spec.powers_w);
  const auto theta_ts = sorted(spec.theta_ts);
  const auto sources = sorted(spec.sources);
  const auto loads = sorted(spec.loads);
  auto query = bounds::BoundQuery::even_split(spec.epsilon);
  query.optimize_split = spec.optimize_split;
  query.t_max = spec.t_max;
  Table t{{"power_w", "cell_radius_m", "theta_t", "rho_star", "p_on_star", "gamma", "beta",
           "epsilon", "load", "r_avg", "lambda", "q_bits", "tau_frames", "status"},
          {}};
  const std::size_t per_theta = sources.size() * loads.size();
  const std::size_t per_power = theta_ts.size() * per_theta;
  t.rows = parallel_rows(powers.size() * per_power, opts.threads, [&](std::size_t i) {
    const double p = powers[i / per_power];
    const double th_t = theta_ts[(i % per_power) / per_theta];
    const auto& s = sources[(i % per_theta) / loads.size()];
    const double load = loads[i % loads.size()];
    const auto cfg = with_power(spec, p);
    const auto svc = qos::optimize_fixed_rate(cfg, th_t).service();
    const double r_avg = load * svc.mean_rate();
    const markov::OnOffChain src{s.gamma, s.beta, r_avg / markov::steady_state({s.gamma, s.beta, 1.0}).p_on};
    std::vector<std::string> row{num(p), num(cfg.cell_radius_m), num(th_t), num(svc.rho),
                                 num(svc.p_on), num(s.gamma), num(s.beta), num(spec.epsilon),
                                 num(load), num(r_avg), num(src.rate_on)};
    try {
      const auto b = bounds::queue_bound(src, svc, query);
      row.insert(row.end(), {num(b.q), num(b.tau), "ok"});
    } catch (const bounds::UnstableSystemError&) {
      row.insert(row.end(), {"nan", "nan", "unstable"});
    }
    return Rows{row};
  });
  return t;
}

ValidationReport run_validate(const ExperimentSpec& spec, const RunOptions& opts) {
  ValidationReport report;
  report.table.header = {"id", "check", "status", "seconds", "detail"};
  const std::vector<int> ids{1, 2, 3, 4, 5, 6, 7, 8, 9};
  report.table.rows = parallel_rows(ids.size(), opts.threads, [&](std::size_t i) {
    validation::AcceptanceOptions a;
    a.seed = opts.seed;
    a.sim_frames = spec.validate_frames;
    a.only = {ids[i]};
    const auto r = validation::run_acceptance(a).front();
    return Rows{{std::to_string(r.id), r.name, r.passed ? "pass" : "fail",
                 fmt::format("{:.2f}", r.seconds), r.detail}};
  });
  const auto b = bounds::queue_bound({0.3, 0.7, 1000.0}, {0.9, 2000.0},
                                     bounds::BoundQuery::even_split(1.0));
  const bool eps_ok = b.q == 0.0 && b.tau == 0.0;
  report.table.rows.push_back({"eps1", "bound at eps = 1", eps_ok ? "pass" : "fail", "0.00",
                               fmt::format("q={} tau={}", num(b.q), num(b.tau))});
  report.passed = std::all_of(report.table.rows.begin(), report.table.rows.end(),
                              [](const auto& r) { return r[2] == "pass"; });
  return report;
}

}  // namespace vlcqos::cli
