#include "vlcqos/cli/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string_view>

#include "vlcqos/markov_onoff.hpp"
#include "vlcqos/numeric.hpp"

namespace vlcqos::cli {

namespace {

struct Entry {
  std::string value;
  int line;
};

using Section = std::map<std::string, Entry>;

struct PhyField {
  const char* key;
  double phy::PhyConfig::*member;
};

constexpr PhyField kPhyFields[] = {
    {"half_intensity_angle_deg", &phy::PhyConfig::half_intensity_angle_deg},
    {"fov_deg", &phy::PhyConfig::fov_deg},
    {"pd_area_m2", &phy::PhyConfig::pd_area_m2},
    {"bandwidth_hz", &phy::PhyConfig::bandwidth_hz},
    {"responsivity_a_per_w", &phy::PhyConfig::responsivity_a_per_w},
    {"refractive_index", &phy::PhyConfig::refractive_index},
    {"filter_gain", &phy::PhyConfig::filter_gain},
    {"noise_psd_a2_per_hz", &phy::PhyConfig::noise_psd_a2_per_hz},
    {"vertical_distance_m", &phy::PhyConfig::vertical_distance_m},
    {"cell_radius_m", &phy::PhyConfig::cell_radius_m},
    {"frame_duration_s", &phy::PhyConfig::frame_duration_s},
    {"intensity_constant", &phy::PhyConfig::intensity_constant},
    {"opt_elec_ratio", &phy::PhyConfig::opt_elec_ratio},
};

const std::map<std::string, std::set<std::string>>& schema() {
  static const auto s = [] {
    std::map<std::string, std::set<std::string>> m{
        {"", {"experiment"}},
        {"phy", {"power"}},
        {"source", {"gamma", "beta"}},
        {"sweep", {"theta", "theta_db", "theta_t", "theta_t_db", "loads"}},
        {"bounds", {"epsilon", "eps_split", "t_max"}},
        {"validate", {"frames"}},
    };
    for (const auto& f : kPhyFields) m["phy"].insert(f.key);
    return m;
  }();
  return s;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Reader {
 public:
  Reader(std::string source) : source_(std::move(source)) {}

  void read(std::istream& in) {
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      std::string_view text(raw);
      text = trim(text.substr(0, text.find_first_of("#;")));
      if (text.empty()) continue;
      if (text.front() == '[') {
        if (text.back() != ']') fail(line, "", "unterminated section header");
        section = std::string(trim(text.substr(1, text.size() - 2)));
        if (!schema().count(section) || section.empty()) {
          fail(line, section, "unknown section [" + section + "]");
        }
        continue;
      }
      const auto eq = text.find('=');
      if (eq == std::string_view::npos) fail(line, section, "expected key = value");
      const std::string key(trim(text.substr(0, eq)));
      const std::string value(trim(text.substr(eq + 1)));
      const std::string field = qualified(section, key);
      if (!schema().at(section).count(key)) fail(line, field, "unknown key");
      if (value.empty()) fail(line, field, "empty value");
      auto& sec = sections_[section];
      if (sec.count(key)) {
        fail(line, field, fmt::format("duplicate key (first set on line {})", sec[key].line));
      }
      sec[key] = {value, line};
    }
    if (in.bad()) fail(0, "", "read error");
  }

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  int line_of(const std::string& section, const std::string& key) const {
    const auto* e = find(section, key);
    return e ? e->line : 0;
  }

  [[noreturn]] void fail(int line, const std::string& field, const std::string& msg) const {
    throw ConfigError(source_, line, field, msg);
  }

  static std::string qualified(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
  }

 private:
  std::string source_;
  std::map<std::string, Section> sections_;
};

// Field-aware value parsing.
class Values {
 public:
  Values(const Reader& r, std::string section, std::string key)
      : r_(r), section_(std::move(section)), key_(std::move(key)) {
    const auto* e = r.find(section_, key_);
    line_ = e ? e->line : 0;
  }

  double number(std::string_view s) const {
    s = trim(s);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
      fail(fmt::format("'{}' is not a number", s));
    }
    return v;
  }

  double power(std::string_view s) const {
    s = trim(s);
    if (s.size() > 2 && s.substr(s.size() - 2) == "mW") return 1e-3 * number(s.substr(0, s.size() - 2));
    if (s.size() > 1 && s.back() == 'W') return number(s.substr(0, s.size() - 1));
    return number(s);
  }

  std::int64_t integer(std::string_view s) const {
    const double v = number(s);
    if (v != std::floor(v) || std::fabs(v) > 9e15) fail(fmt::format("'{}' is not an integer", s));
    return static_cast<std::int64_t>(v);
  }

  /// Comma list, or logspace(lo_exp, hi_exp, n) / linspace(lo, hi, n).
  template <typename Elem>
  std::vector<double> list(std::string_view s, Elem elem) const {
    s = trim(s);
    for (const char* fn : {"logspace", "linspace"}) {
      const std::string_view name(fn);
      if (s.substr(0, name.size()) != name) continue;
      const auto open = s.find('(');
      if (open != name.size() || s.back() != ')') fail("malformed " + std::string(name) + "(...)");
      const auto args = split(s.substr(open + 1, s.size() - open - 2));
      if (args.size() != 3) fail(std::string(name) + " takes (start, stop, count)");
      const double a = number(args[0]);
      const double b = number(args[1]);
      const auto n = integer(args[2]);
      if (n < 1 || n > 1'000'000) fail("grid count must be in [1, 1e6]");
      if (n == 1) return {name == "logspace" ? std::pow(10.0, a) : a};
      if (name == "logspace") {
        return numeric::logspace(std::pow(10.0, a), std::pow(10.0, b), static_cast<std::size_t>(n));
      }
      return numeric::linspace(a, b, static_cast<std::size_t>(n));
    }
    std::vector<double> out;
    for (auto part : split(s)) out.push_back(elem(part));
    return out;
  }

  bool present() const { return line_ > 0; }
  const std::string& raw() const { return r_.find(section_, key_)->value; }

  [[noreturn]] void fail(const std::string& msg) const {
    r_.fail(line_, Reader::qualified(section_, key_), msg);
  }

 private:
  std::vector<std::string_view> split(std::string_view s) const {
    std::vector<std::string_view> parts;
    while (true) {
      const auto comma = s.find(',');
      const auto part = trim(s.substr(0, comma));
      if (part.empty()) fail("empty list element");
      parts.push_back(part);
      if (comma == std::string_view::npos) break;
      s = s.substr(comma + 1);
    }
    return parts;
  }

  const Reader& r_;
  std::string section_;
  std::string key_;
  int line_ = 0;
};

std::vector<double> db_to_linear(std::vector<double> v) {
  for (auto& x : v) x = std::pow(10.0, x / 10.0);
  return v;
}

void apply(const Reader& r, ExperimentSpec& spec) {
  if (const auto* e = r.find("", "experiment")) {
    if (e->value != experiment_name(spec.experiment)) {
      r.fail(e->line, "experiment",
             fmt::format("config is for '{}' but the command is '{}'", e->value,
                         experiment_name(spec.experiment)));
    }
  }

  for (const auto& f : kPhyFields) {
    const Values v(r, "phy", f.key);
    if (v.present()) spec.phy.*f.member = v.number(v.raw());
  }
  if (const Values v(r, "phy", "power"); v.present()) {
    spec.powers_w = v.list(v.raw(), [&](std::string_view s) { return v.power(s); });
  }

  const Values gamma(r, "source", "gamma");
  const Values beta(r, "source", "beta");
  if (gamma.present() != beta.present()) {
    (gamma.present() ? beta : gamma).fail("gamma and beta must be given together");
  }
  if (gamma.present()) {
    auto num = [&](std::string_view s) { return gamma.number(s); };
    const auto g = gamma.list(gamma.raw(), num);
    const auto b = beta.list(beta.raw(), num);
    if (g.size() != b.size()) beta.fail("gamma and beta lists differ in length");
    spec.sources.clear();
    for (std::size_t i = 0; i < g.size(); ++i) spec.sources.push_back({g[i], b[i]});
  }

  auto grid = [&](const char* linear, const char* db, std::vector<double>& out) {
    const Values lin(r, "sweep", linear);
    const Values dec(r, "sweep", db);
    if (lin.present() && dec.present()) dec.fail(fmt::format("give either {} or {}", linear, db));
    if (lin.present()) out = lin.list(lin.raw(), [&](std::string_view s) { return lin.number(s); });
    if (dec.present()) {
      out = db_to_linear(dec.list(dec.raw(), [&](std::string_view s) { return dec.number(s); }));
    }
  };
  grid("theta", "theta_db", spec.thetas);
  grid("theta_t", "theta_t_db", spec.theta_ts);
  if (const Values v(r, "sweep", "loads"); v.present()) {
    spec.loads = v.list(v.raw(), [&](std::string_view s) { return v.number(s); });
  }

  if (const Values v(r, "bounds", "epsilon"); v.present()) spec.epsilon = v.number(v.raw());
  if (const Values v(r, "bounds", "eps_split"); v.present()) {
    if (v.raw() == "even") spec.optimize_split = false;
    else if (v.raw() == "optimize") spec.optimize_split = true;
    else v.fail("expected 'even' or 'optimize'");
  }
  if (const Values v(r, "bounds", "t_max"); v.present()) spec.t_max = v.integer(v.raw());
  if (const Values v(r, "validate", "frames"); v.present()) {
    spec.validate_frames = v.integer(v.raw());
  }
}

void check(const Reader& r, const ExperimentSpec& spec) {
  auto positive_grid = [&](const std::vector<double>& g, const char* sec, const char* key,
                           const char* alt) {
    const int line = std::max(r.line_of(sec, key), r.line_of(sec, alt));
    const auto field = Reader::qualified(sec, r.line_of(sec, alt) ? alt : key);
    if (g.empty()) r.fail(line, field, "grid is empty");
    for (double v : g) {
      if (!(v > 0.0) || !std::isfinite(v)) r.fail(line, field, "values must be finite and > 0");
    }
  };
  positive_grid(spec.powers_w, "phy", "power", "power");
  positive_grid(spec.thetas, "sweep", "theta", "theta_db");
  positive_grid(spec.theta_ts, "sweep", "theta_t", "theta_t_db");
  positive_grid(spec.loads, "sweep", "loads", "loads");

  for (double p : spec.powers_w) {
    auto cfg = spec.phy;
    cfg.avg_power_w = p;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      // Messages name the field as "PhyConfig.<key> ...".
      const std::string msg = e.what();
      const auto dot = msg.find('.');
      const auto end = msg.find(' ', dot);
      std::string key = dot == std::string::npos ? "" : msg.substr(dot + 1, end - dot - 1);
      if (key == "avg_power_w") key = "power";
      if (!r.line_of("phy", key)) {
        // Cross-field checks: point at another named field the config did set.
        for (const auto& f : kPhyFields) {
          if (msg.find(f.key) != std::string::npos && r.line_of("phy", f.key)) key = f.key;
        }
      }
      r.fail(r.line_of("phy", key), "phy." + key, msg);
    }
  }
  for (const auto& s : spec.sources) {
    try {
      markov::OnOffChain{s.gamma, s.beta, 1.0}.validate();
    } catch (const std::invalid_argument& e) {
      r.fail(r.line_of("source", "gamma"), "source", e.what());
    }
  }
  if (spec.sources.empty()) r.fail(r.line_of("source", "gamma"), "source.gamma", "no sources");
  if (!(spec.epsilon > 0.0 && spec.epsilon <= 1.0)) {
    r.fail(r.line_of("bounds", "epsilon"), "bounds.epsilon", "must be in (0, 1]");
  }
  if (spec.t_max < 1) r.fail(r.line_of("bounds", "t_max"), "bounds.t_max", "must be >= 1");
  if (spec.validate_frames < 1000) {
    r.fail(r.line_of("validate", "frames"), "validate.frames", "must be >= 1000");
  }
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += fmt::format("{}{:.17g}", out.empty() ? "" : ",", x);
  return out;
}

}  // namespace

ConfigError::ConfigError(std::string source, int line, std::string field,
                         const std::string& message)
    : std::runtime_error(fmt::format("{}{}: {}{}", source,
                                     line > 0 ? fmt::format(":{}", line) : std::string(),
                                     field.empty() ? std::string() : field + ": ", message)),
      line_(line),
      field_(std::move(field)) {}

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::OptRate: return "opt-rate-sweep";
    case Experiment::EffectiveCapacity: return "effective-capacity-sweep";
    case Experiment::MaxArrival: return "max-arrival-sweep";
    case Experiment::DelayBound: return "delay-bound-sweep";
    case Experiment::Validate: return "validate";
  }
  return "";
}

Experiment parse_experiment(const std::string& name) {
  for (auto e : {Experiment::OptRate, Experiment::EffectiveCapacity, Experiment::MaxArrival,
                 Experiment::DelayBound, Experiment::Validate}) {
    if (name == experiment_name(e)) return e;
  }
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

ExperimentSpec default_spec(Experiment experiment) {
  ExperimentSpec s;
  s.experiment = experiment;
  s.powers_w = {0.2};
  s.sources = {{0.3, 0.7}};
  s.thetas = numeric::logspace(1e-8, 1.0, 33);
  s.loads = {0.5, 0.7, 0.8, 0.9, 0.95, 1.0};
  switch (experiment) {
    case Experiment::OptRate: s.theta_ts = numeric::logspace(1e-8, 1.0, 33); break;
    case Experiment::EffectiveCapacity: s.theta_ts = {1e-6, 1e-4, std::pow(10.0, -0.3)}; break;
    case Experiment::DelayBound: s.theta_ts = {1e-4}; break;
    default: s.theta_ts = {1e-4}; break;
  }
  return s;
}

ExperimentSpec parse_config(std::istream& in, Experiment experiment,
                            const std::string& source_name) {
  Reader reader(source_name);
  reader.read(in);
  auto spec = default_spec(experiment);
  apply(reader, spec);
  check(reader, spec);
  return spec;
}

ExperimentSpec load_config(const std::string& path, Experiment experiment) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "", "cannot open file");
  return parse_config(in, experiment, path);
}

std::string canonical_text(const ExperimentSpec& spec) {
  std::string out = fmt::format("experiment={}\n", experiment_name(spec.experiment));
  for (const auto& f : kPhyFields) out += fmt::format("phy.{}={:.17g}\n", f.key, spec.phy.*f.member);
  out += "phy.power=" + join(spec.powers_w) + "\n";
  std::string g, b;
  for (const auto& s : spec.sources) {
    g += fmt::format("{}{:.17g}", g.empty() ? "" : ",", s.gamma);
    b += fmt::format("{}{:.17g}", b.empty() ? "" : ",", s.beta);
  }
  out += "source.gamma=" + g + "\nsource.beta=" + b + "\n";
  out += "sweep.theta=" + join(spec.thetas) + "\n";
  out += "sweep.theta_t=" + join(spec.theta_ts) + "\n";
  out += "sweep.loads=" + join(spec.loads) + "\n";
  out += fmt::format("bounds.epsilon={:.17g}\nbounds.eps_split={}\nbounds.t_max={}\n",
                     spec.epsilon, spec.optimize_split ? "optimize" : "even", spec.t_max);
  out += fmt::format("validate.frames={}\n", spec.validate_frames);
  return out;
}

std::string spec_hash(const ExperimentSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text(spec)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace vlcqos::cli
