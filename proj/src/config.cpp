#include "nlwave/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "nlwave/errors.hpp"

namespace nlwave {

using nlohmann::json;

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::string out = "invalid configuration:";
  for (const auto& e : errors) out += "\n  " + e;
  return out;
}

class Reader {
 public:
  std::vector<std::string> errors;

  /// Returns the sub-object or nullptr; records unknown keys.
  const json* section(const json& parent, const std::string& key, const std::string& path,
                      std::initializer_list<const char*> allowed) {
    if (!parent.contains(key)) return nullptr;
    const json& obj = parent.at(key);
    const std::string here = join(path, key);
    if (!obj.is_object()) {
      errors.push_back(here + ": expected an object");
      return nullptr;
    }
    check_keys(obj, here, allowed);
    return &obj;
  }

  void check_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
      const bool known = std::any_of(allowed.begin(), allowed.end(),
                                     [&](const char* a) { return item.key() == a; });
      if (!known) errors.push_back(join(path, item.key()) + ": unknown key");
    }
  }

  void number(const json* obj, const char* key, const std::string& path, double& out) {
    if (obj == nullptr || !obj->contains(key)) return;
    const json& v = obj->at(key);
    if (!v.is_number()) {
      errors.push_back(join(path, key) + ": expected a number");
      return;
    }
    out = v.get<double>();
  }

  template <class Int>
  void integer(const json* obj, const char* key, const std::string& path, Int& out) {
    if (obj == nullptr || !obj->contains(key)) return;
    const json& v = obj->at(key);
    if (!v.is_number_integer()) {
      errors.push_back(join(path, key) + ": expected an integer");
      return;
    }
    out = v.get<Int>();
  }

  void text(const json* obj, const char* key, const std::string& path, std::string& out) {
    if (obj == nullptr || !obj->contains(key)) return;
    const json& v = obj->at(key);
    if (!v.is_string()) {
      errors.push_back(join(path, key) + ": expected a string");
      return;
    }
    out = v.get<std::string>();
  }

  template <class T>
  bool list(const json* obj, const char* key, const std::string& path, std::vector<T>& out) {
    if (obj == nullptr || !obj->contains(key)) return false;
    const json& v = obj->at(key);
    if (!v.is_array()) {
      errors.push_back(join(path, key) + ": expected an array");
      return false;
    }
    std::vector<T> tmp;
    for (const json& e : v) {
      const bool ok = std::is_integral_v<T> ? e.is_number_integer() : e.is_number();
      if (!ok) {
        errors.push_back(join(path, key) + ": array entries must be " +
                         (std::is_integral_v<T> ? "integers" : "numbers"));
        return false;
      }
      tmp.push_back(e.get<T>());
    }
    out = std::move(tmp);
    return true;
  }

  template <class F>
  void check(const std::string& path, F&& validate) {
    try {
      validate();
    } catch (const std::exception& e) {
      errors.push_back(path + ": " + e.what());
    }
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
};

template <class E>
bool parse_enum(const std::string& name, std::initializer_list<std::pair<const char*, E>> table,
                E& out) {
  for (const auto& [label, value] : table) {
    if (name == label) {
      out = value;
      return true;
    }
  }
  return false;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

RunConfig Config::run_config(int workers) const {
  RunConfig rc;
  rc.medium = medium;
  rc.grid = grid;
  rc.time = time;
  rc.damping = damping;
  rc.signal = driving;
  rc.monitor = monitor;
  rc.sample_every = output.sample_every;
  rc.snapshot_times = output.snapshot_times;
  rc.newton = newton;
  rc.workers = workers;
  return rc;
}

SweepSpec Config::sweep_spec(int workers) const {
  SweepSpec s;
  s.base = run_config(1);
  s.omega = sweep.omega;
  s.amplitudes = sweep.amplitudes;
  s.ramp_periods = ramp_periods;
  s.jump_threshold = sweep.jump_threshold;
  s.jobs = workers;
  return s;
}

ScanSpec Config::scan_spec(int workers) const {
  ScanSpec s;
  s.base = radial;
  s.omegas = scan.omegas;
  s.amplitudes = scan.amplitudes;
  s.t_end = scan.t_end;
  s.warmup_periods = scan.warmup_periods;
  s.smooth_bound = scan.smooth_bound;
  s.jobs = workers;
  return s;
}

BitSignalSpec Config::bit_spec(int workers) const {
  BitSignalSpec s;
  s.base = run_config(workers);
  s.bits = driving.bits;
  s.period = driving.period;
  s.amp_factor = driving.amp_factor;
  s.omega = driving.frequency;
  s.t_end = transmit.t_end;
  s.peaks.background_factor = transmit.background_factor;
  s.peaks.min_separation = transmit.min_separation;
  return s;
}

Config parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("parse error: ") + e.what()});
  }
  Reader rd;
  Config c;
  if (!doc.is_object()) throw ConfigError({"top level must be a JSON object"});
  rd.check_keys(doc, "", {"medium", "grid", "time", "driving", "damping", "radial", "newton",
                          "monitor", "sweep", "scan", "transmit", "output"});

  if (const json* m = rd.section(doc, "medium", "", {"beta", "gamma", "mass_sq", "josephson",
                                                      "coupling", "potential"})) {
    rd.number(m, "beta", "medium", c.medium.beta);
    rd.number(m, "gamma", "medium", c.medium.gamma);
    rd.number(m, "mass_sq", "medium", c.medium.mass_sq);
    rd.number(m, "josephson", "medium", c.medium.josephson);
    rd.number(m, "coupling", "medium", c.medium.coupling);
    if (const json* p = rd.section(*m, "potential", "medium", {"kind", "lambda"})) {
      std::string kind = to_string(c.medium.potential.kind);
      rd.text(p, "kind", "medium.potential", kind);
      if (!parse_enum<PotentialKind>(kind,
                                     {{"sine-gordon", PotentialKind::SineGordon},
                                      {"klein-gordon", PotentialKind::KleinGordon},
                                      {"landau-ginzburg", PotentialKind::LandauGinzburg},
                                      {"zero", PotentialKind::Zero}},
                                     c.medium.potential.kind)) {
        rd.errors.push_back("medium.potential.kind: unknown potential '" + kind + "'");
      }
      rd.number(p, "lambda", "medium.potential", c.medium.potential.lambda);
    }
  }

  if (const json* g = rd.section(doc, "grid", "", {"n", "dx", "dy", "dz"})) {
    rd.integer(g, "n", "grid", c.grid.n);
    rd.number(g, "dx", "grid", c.grid.dx);
    rd.number(g, "dy", "grid", c.grid.dy);
    rd.number(g, "dz", "grid", c.grid.dz);
  }

  if (const json* t = rd.section(doc, "time", "", {"dt", "steps"})) {
    rd.number(t, "dt", "time", c.time.dt);
    rd.integer(t, "steps", "time", c.time.steps);
  }

  bool has_bits = false;
  if (const json* d = rd.section(doc, "driving", "", {"kind", "amplitude", "frequency",
                                                       "ramp_periods", "bits", "period",
                                                       "amp_factor"})) {
    std::string kind = to_string(c.driving.kind);
    rd.text(d, "kind", "driving", kind);
    if (!parse_enum<SignalKind>(kind,
                                {{"ramped-sine", SignalKind::RampedSine},
                                 {"bit-sequence", SignalKind::BitSequence}},
                                c.driving.kind)) {
      rd.errors.push_back("driving.kind: unknown signal '" + kind + "'");
    }
    rd.number(d, "amplitude", "driving", c.driving.amplitude);
    rd.number(d, "frequency", "driving", c.driving.frequency);
    rd.number(d, "ramp_periods", "driving", c.ramp_periods);
    has_bits = rd.list(d, "bits", "driving", c.driving.bits);
    rd.number(d, "period", "driving", c.driving.period);
    rd.number(d, "amp_factor", "driving", c.driving.amp_factor);
  }

  if (const json* d = rd.section(doc, "damping", "", {"kind", "n0", "center", "width_factor",
                                                       "onset", "outer"})) {
    std::string kind = to_string(c.damping.kind);
    rd.text(d, "kind", "damping", kind);
    if (!parse_enum<DampingKind>(kind,
                                 {{"uniform", DampingKind::Uniform},
                                  {"lattice-absorbing", DampingKind::LatticeAbsorbing},
                                  {"radial-absorbing", DampingKind::RadialAbsorbing}},
                                 c.damping.kind)) {
      rd.errors.push_back("damping.kind: unknown profile '" + kind + "'");
    }
    rd.integer(d, "n0", "damping", c.damping.n0);
    rd.number(d, "center", "damping", c.damping.center);
    rd.number(d, "width_factor", "damping", c.damping.width_factor);
    rd.number(d, "onset", "damping", c.damping.onset);
    rd.number(d, "outer", "damping", c.damping.outer);
  }

  if (const json* r = rd.section(doc, "radial", "", {"epsilon", "dr", "m_nodes",
                                                      "outer_boundary"})) {
    rd.number(r, "epsilon", "radial", c.radial.epsilon);
    rd.number(r, "dr", "radial", c.radial.dr);
    rd.integer(r, "m_nodes", "radial", c.radial.m_nodes);
    std::string mode = to_string(c.radial.outer);
    rd.text(r, "outer_boundary", "radial", mode);
    if (!parse_enum<OuterBoundary>(mode,
                                   {{"consistent", OuterBoundary::Consistent},
                                    {"as-printed", OuterBoundary::AsPrinted}},
                                   c.radial.outer)) {
      rd.errors.push_back("radial.outer_boundary: unknown mode '" + mode + "'");
    }
  }

  if (const json* n = rd.section(doc, "newton", "", {"tol_residual", "max_iters", "linear_tol",
                                                      "linear_max_iters"})) {
    rd.number(n, "tol_residual", "newton", c.newton.tol_residual);
    rd.integer(n, "max_iters", "newton", c.newton.max_iters);
    rd.number(n, "linear_tol", "newton", c.newton.linear_tol);
    rd.integer(n, "linear_max_iters", "newton", c.newton.linear_max_iters);
  }

  std::vector<int> monitor;
  if (rd.list(&doc, "monitor", "", monitor)) {
    if (monitor.size() != 3) {
      rd.errors.push_back("monitor: expected three site indices");
    } else {
      c.monitor = {monitor[0], monitor[1], monitor[2]};
    }
  }

  if (const json* s = rd.section(doc, "sweep", "", {"omega", "amplitudes", "jump_threshold"})) {
    rd.number(s, "omega", "sweep", c.sweep.omega);
    rd.list(s, "amplitudes", "sweep", c.sweep.amplitudes);
    rd.number(s, "jump_threshold", "sweep", c.sweep.jump_threshold);
  }
  if (const json* s = rd.section(doc, "scan", "", {"omegas", "amplitudes", "t_end",
                                                    "warmup_periods", "smooth_bound"})) {
    rd.list(s, "omegas", "scan", c.scan.omegas);
    rd.list(s, "amplitudes", "scan", c.scan.amplitudes);
    rd.number(s, "t_end", "scan", c.scan.t_end);
    rd.number(s, "warmup_periods", "scan", c.scan.warmup_periods);
    rd.number(s, "smooth_bound", "scan", c.scan.smooth_bound);
  }
  if (const json* s = rd.section(doc, "transmit", "", {"t_end", "background_factor",
                                                        "min_separation"})) {
    rd.number(s, "t_end", "transmit", c.transmit.t_end);
    rd.number(s, "background_factor", "transmit", c.transmit.background_factor);
    rd.number(s, "min_separation", "transmit", c.transmit.min_separation);
  }
  if (const json* o = rd.section(doc, "output", "", {"dir", "sample_every", "snapshot_times"})) {
    rd.text(o, "dir", "output", c.output.dir);
    rd.integer(o, "sample_every", "output", c.output.sample_every);
    rd.list(o, "snapshot_times", "output", c.output.snapshot_times);
  }

  // Derived fields and validation of every section.
  if (c.driving.kind == SignalKind::RampedSine) {
    if (has_bits) rd.errors.push_back("driving.bits: only allowed when driving.kind is bit-sequence");
    if (!(c.ramp_periods >= 0.0)) rd.errors.push_back("driving.ramp_periods: must be >= 0");
    if (c.driving.frequency > 0.0) {
      c.driving.ramp_duration = c.ramp_periods * 2.0 * std::numbers::pi / c.driving.frequency;
    }
  }
  c.radial.dt = c.time.dt;
  c.radial.steps = c.time.steps;
  c.radial.medium = c.medium;
  c.radial.damping = c.damping;
  c.radial.signal = c.driving;

  rd.check("medium", [&] { c.medium.validate(); });
  rd.check("grid", [&] { c.grid.validate(); });
  rd.check("time", [&] { c.time.validate(); });
  if (!(c.driving.kind == SignalKind::RampedSine && has_bits)) {
    rd.check("driving", [&] { c.driving.validate(); });
  }
  rd.check("damping", [&] { c.damping.validate(); });
  rd.check("newton", [&] { c.newton.validate(); });
  rd.check("radial", [&] {
    if (!(c.radial.epsilon > 0.0)) throw ContractError("epsilon must be > 0");
    if (!(c.radial.dr > 0.0)) throw ContractError("dr must be > 0");
    if (c.radial.m_nodes < 1) throw ContractError("m_nodes must be >= 1");
  });
  for (int idx : c.monitor) {
    if (idx < 1 || idx > c.grid.n) {
      rd.errors.push_back("monitor: site indices must lie in 1..grid.n");
      break;
    }
  }
  if (c.output.sample_every < 0) rd.errors.push_back("output.sample_every: must be >= 0");
  if (!rd.errors.empty()) throw ConfigError(rd.errors);
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const Config& c) {
  json doc;
  doc["medium"] = {{"beta", c.medium.beta},
                   {"gamma", c.medium.gamma},
                   {"mass_sq", c.medium.mass_sq},
                   {"josephson", c.medium.josephson},
                   {"coupling", c.medium.coupling},
                   {"potential",
                    {{"kind", to_string(c.medium.potential.kind)},
                     {"lambda", c.medium.potential.lambda}}}};
  doc["grid"] = {{"n", c.grid.n}, {"dx", c.grid.dx}, {"dy", c.grid.dy}, {"dz", c.grid.dz}};
  doc["time"] = {{"dt", c.time.dt}, {"steps", c.time.steps}};
  json d = {{"kind", to_string(c.driving.kind)}, {"frequency", c.driving.frequency}};
  if (c.driving.kind == SignalKind::RampedSine) {
    d["amplitude"] = c.driving.amplitude;
    d["ramp_periods"] = c.ramp_periods;
  } else {
    d["bits"] = c.driving.bits;
    d["period"] = c.driving.period;
    d["amp_factor"] = c.driving.amp_factor;
  }
  doc["driving"] = d;
  doc["damping"] = {{"kind", to_string(c.damping.kind)},
                    {"n0", c.damping.n0},
                    {"center", c.damping.center},
                    {"width_factor", c.damping.width_factor},
                    {"onset", c.damping.onset},
                    {"outer", c.damping.outer}};
  doc["radial"] = {{"epsilon", c.radial.epsilon},
                   {"dr", c.radial.dr},
                   {"m_nodes", c.radial.m_nodes},
                   {"outer_boundary", to_string(c.radial.outer)}};
  doc["newton"] = {{"tol_residual", c.newton.tol_residual},
                   {"max_iters", c.newton.max_iters},
                   {"linear_tol", c.newton.linear_tol},
                   {"linear_max_iters", c.newton.linear_max_iters}};
  doc["monitor"] = c.monitor;
  doc["sweep"] = {{"omega", c.sweep.omega},
                  {"amplitudes", c.sweep.amplitudes},
                  {"jump_threshold", c.sweep.jump_threshold}};
  doc["scan"] = {{"omegas", c.scan.omegas},
                 {"amplitudes", c.scan.amplitudes},
                 {"t_end", c.scan.t_end},
                 {"warmup_periods", c.scan.warmup_periods},
                 {"smooth_bound", c.scan.smooth_bound}};
  doc["transmit"] = {{"t_end", c.transmit.t_end},
                     {"background_factor", c.transmit.background_factor},
                     {"min_separation", c.transmit.min_separation}};
  doc["output"] = {{"dir", c.output.dir},
                   {"sample_every", c.output.sample_every},
                   {"snapshot_times", c.output.snapshot_times}};
  return doc.dump(2) + "\n";
}

}  // namespace nlwave
