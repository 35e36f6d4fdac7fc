#include "mrpath/io.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mrpath {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

ordered_json number_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

double number_or_nan(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
void optional_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

void check_schema(const json& j, const char* kind, int version) {
  if (!j.is_object()) throw FormatError(std::string(kind) + " document must be a JSON object");
  if (j.contains("kind") && j.at("kind") != kind) {
    throw FormatError(std::string("expected a ") + kind + " document, got '" +
                      j.at("kind").dump() + "'");
  }
  const int v = j.value("schema_version", version);
  if (v != version) {
    throw FormatError(std::string("unsupported ") + kind + " schema_version " + std::to_string(v));
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!keys.count(key)) throw FormatError("unknown key '" + key + "' in " + where);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Instances

std::string instance_to_json(const Instance& inst) {
  ordered_json j;
  j["schema_version"] = kInstanceSchemaVersion;
  j["kind"] = "instance";
  ordered_json layout;
  layout["side_length"] = inst.layout.side_length;
  layout["beams_per_cell"] = inst.layout.beams_per_cell;
  layout["beamwidth"] = inst.layout.beamwidth;
  layout["depot"] = {inst.layout.depot.x, inst.layout.depot.y};
  layout["cells"] = ordered_json::array();
  for (const auto& c : inst.layout.cells) {
    layout["cells"].push_back({{"id", c.id}, {"x", c.center.x}, {"y", c.center.y}});
  }
  j["layout"] = layout;
  j["range_limit"] = inst.range_limit;
  j["velocity"] = inst.velocity;
  j["robots"] = inst.robots;
  j["depot"] = {{"x", inst.nodes.depot_position.x},
                {"y", inst.nodes.depot_position.y},
                {"earliest", inst.nodes.depot_window.earliest},
                {"latest", inst.nodes.depot_window.latest}};
  j["nodes"] = ordered_json::array();
  for (const auto& n : inst.nodes.nodes) {
    j["nodes"].push_back({{"id", n.id},
                          {"x", n.position.x},
                          {"y", n.position.y},
                          {"earliest", n.window.earliest},
                          {"latest", n.window.latest},
                          {"service_time", n.service_time}});
  }
  j["collision_pairs"] = ordered_json::array();
  for (auto [a, b] : inst.collisions.pairs()) j["collision_pairs"].push_back({a, b});
  j["digest"] = inst.digest();
  return dump(j);
}

Instance instance_from_json(std::string_view text) {
  const json j = parse_json(text);
  check_schema(j, "instance", kInstanceSchemaVersion);
  Instance inst;
  try {
    const json& lj = j.at("layout");
    std::vector<Vec2> centers;
    for (const auto& c : lj.at("cells")) {
      if (c.at("id").get<int>() != static_cast<int>(centers.size())) {
        throw FormatError("cell ids must be 0..n-1 in order");
      }
      centers.push_back({c.at("x").get<double>(), c.at("y").get<double>()});
    }
    const auto depot = lj.at("depot");
    inst.layout = make_layout(centers, required<double>(lj, "side_length"),
                              required<int>(lj, "beams_per_cell"), required<double>(lj, "beamwidth"),
                              {depot.at(0).get<double>(), depot.at(1).get<double>()});
    inst.range_limit = required<double>(j, "range_limit");
    inst.velocity = required<double>(j, "velocity");
    inst.robots = required<int>(j, "robots");
    const json& dj = j.at("depot");
    inst.nodes.depot_position = {required<double>(dj, "x"), required<double>(dj, "y")};
    inst.nodes.depot_window = {required<double>(dj, "earliest"), required<double>(dj, "latest")};
    for (const auto& nj : j.at("nodes")) {
      VisitNode n;
      n.id = required<int>(nj, "id");
      if (n.id != static_cast<int>(inst.nodes.nodes.size()) + 1) {
        throw FormatError("node ids must be 1..v in order");
      }
      n.position = {required<double>(nj, "x"), required<double>(nj, "y")};
      n.window = {required<double>(nj, "earliest"), required<double>(nj, "latest")};
      n.service_time = required<double>(nj, "service_time");
      if (n.window.earliest > n.window.latest) {
        throw FormatError("node " + std::to_string(n.id) + " has an empty time window");
      }
      if (n.service_time < 0) throw FormatError("negative service time");
      inst.nodes.nodes.push_back(n);
    }
    const int v = inst.visit_count();
    inst.collisions = CollisionMatrix(v);
    for (const auto& p : j.at("collision_pairs")) {
      const int a = p.at(0).get<int>();
      const int b = p.at(1).get<int>();
      if (a < 1 || a > v || b < 1 || b > v || a == b) {
        throw FormatError("collision pair (" + std::to_string(a) + "," + std::to_string(b) +
                          ") does not reference two distinct visit nodes");
      }
      inst.collisions.set(a, b);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed instance: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("malformed instance: ") + e.what());
  }
  if (inst.velocity <= 0) throw FormatError("velocity must be positive");
  if (inst.robots < 1) throw FormatError("robots must be at least 1");
  return inst;
}

// ---------------------------------------------------------------------------
// Solutions and reports

std::string solution_to_json(const Solution& sol) {
  ordered_json j;
  j["schema_version"] = kSolutionSchemaVersion;
  j["kind"] = "solution";
  j["variant"] = to_string(sol.variant);
  j["status"] = to_string(sol.status);
  j["objective"] = number_or_null(sol.objective);
  j["routes"] = sol.routes;
  ordered_json times = ordered_json::array();
  for (double t : sol.arrival_times) times.push_back(number_or_null(t));
  j["arrival_times"] = times;
  j["stats"] = {{"nodes_explored", sol.stats.nodes_explored},
                {"lower_bound", number_or_null(sol.stats.lower_bound)},
                {"gap", number_or_null(sol.stats.gap)}};
  if (!sol.hint.empty()) j["hint"] = sol.hint;
  return dump(j);
}

Solution solution_from_json(std::string_view text) {
  const json j = parse_json(text);
  check_schema(j, "solution", kSolutionSchemaVersion);
  Solution sol;
  try {
    sol.variant = parse_variant(required<std::string>(j, "variant"));
    sol.status = parse_status(required<std::string>(j, "status"));
    sol.objective = j.contains("objective") ? number_or_nan(j.at("objective"))
                                            : std::numeric_limits<double>::infinity();
    if (std::isnan(sol.objective)) sol.objective = std::numeric_limits<double>::infinity();
    sol.routes = required<std::vector<std::vector<int>>>(j, "routes");
    for (const auto& t : j.at("arrival_times")) sol.arrival_times.push_back(number_or_nan(t));
    if (j.contains("stats")) {
      const json& s = j.at("stats");
      optional_field(s, "nodes_explored", sol.stats.nodes_explored);
      if (s.contains("lower_bound")) sol.stats.lower_bound = number_or_nan(s.at("lower_bound"));
      if (s.contains("gap")) sol.stats.gap = number_or_nan(s.at("gap"));
    }
    optional_field(j, "hint", sol.hint);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed solution: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("malformed solution: ") + e.what());
  }
  return sol;
}

std::string validation_to_json(const ValidationReport& report) {
  ordered_json j;
  j["ok"] = report.ok();
  j["violations"] = ordered_json::array();
  for (const auto& v : report.violations) {
    j["violations"].push_back({{"clause", v.clause}, {"nodes", v.nodes}, {"detail", v.detail}});
  }
  return dump(j);
}

std::string evaluation_to_json(const ScheduleEvaluation& ev) {
  ordered_json j;
  j["overall_rate_bps"] = ev.overall_rate_bps;
  j["overall_rate_mbps"] = ev.overall_rate_bps / 1e6;
  j["total_travel_time_s"] = ev.total_travel_time_s;
  j["per_node"] = ordered_json::array();
  for (const auto& n : ev.per_node) {
    j["per_node"].push_back({{"node", n.node},
                             {"robot", n.robot},
                             {"serving_cell", n.serving_cell},
                             {"start", n.start},
                             {"end", n.end},
                             {"sinr", n.sinr},
                             {"rate_bps", n.rate_bps},
                             {"collided", n.collided}});
  }
  j["collision_events"] = ordered_json::array();
  for (const auto& c : ev.collision_events) {
    j["collision_events"].push_back({{"nodes", {c.first, c.second}},
                                     {"overlap_start", c.overlap_start},
                                     {"overlap_end", c.overlap_end}});
  }
  return dump(j);
}

std::string model_stats_json(const MilpModel& model) {
  const ModelStats st = model.stats();
  ordered_json j;
  j["variant"] = to_string(model.variant);
  j["instance_digest"] = model.instance_digest;
  j["big_m"] = model.big_m.value;
  j["variables"] = {{"x", st.x_vars}, {"t", st.t_vars}, {"z", st.z_vars}};
  ordered_json rows;
  for (const auto& [family, count] : st.rows) rows[std::string(to_string(family))] = count;
  j["rows"] = rows;
  j["total_rows"] = st.total_rows();
  ordered_json redundant = ordered_json::array();
  for (Family f : model.redundant_families) redundant.push_back(std::string(to_string(f)));
  j["redundant_families"] = redundant;
  j["diagnostics"] = model.diagnostics;
  return dump(j);
}

// ---------------------------------------------------------------------------
// Configuration text

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

json parse_scalar(const std::string& raw, int line_no) {
  try {
    return json::parse(raw);
  } catch (const json::parse_error&) {
  }
  if (raw.empty()) throw FormatError("line " + std::to_string(line_no) + ": missing value");
  if (raw.find_first_of("\"[]{}=") != std::string::npos) {
    throw FormatError("line " + std::to_string(line_no) + ": cannot parse value '" + raw + "'");
  }
  return raw;  // bare word
}

}  // namespace

std::string normalize_config_text(std::string_view text) {
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '{') return parse_json(t).dump();

  json root = json::object();
  json* section = &root;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw FormatError("line " + std::to_string(line_no) + ": bad section");
      const std::string name = trim(std::string_view(s).substr(1, s.size() - 2));
      if (name.empty()) throw FormatError("line " + std::to_string(line_no) + ": empty section");
      if (!root.contains(name)) root[name] = json::object();
      section = &root[name];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw FormatError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(s).substr(0, eq));
    if (key.empty()) throw FormatError("line " + std::to_string(line_no) + ": empty key");
    (*section)[key] = parse_scalar(trim(std::string_view(s).substr(eq + 1)), line_no);
  }
  return root.dump();
}

namespace {

RadioParams radio_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("radio section must be an object");
  reject_unknown(j,
                 {"bandwidth_hz", "tx_power_w", "tx_power_dbm", "side_lobe_gain", "beamwidth",
                  "alpha_los", "alpha_nlos", "carrier_hz", "kappa_los", "kappa_nlos",
                  "noise_psd_w_per_hz", "noise_psd_dbm_per_hz", "los_decay_per_m", "fading",
                  "nakagami_m_los", "nakagami_m_nlos", "side_lobe_interference"},
                 "radio");
  RadioParams r;
  if (j.contains("tx_power_w") && j.contains("tx_power_dbm")) {
    throw FormatError("give either tx_power_w or tx_power_dbm, not both");
  }
  if (j.contains("noise_psd_w_per_hz") && j.contains("noise_psd_dbm_per_hz")) {
    throw FormatError("give either noise_psd_w_per_hz or noise_psd_dbm_per_hz, not both");
  }
  optional_field(j, "bandwidth_hz", r.bandwidth_hz);
  optional_field(j, "tx_power_w", r.tx_power_w);
  if (j.contains("tx_power_dbm")) r.tx_power_w = dbm_to_watts(required<double>(j, "tx_power_dbm"));
  optional_field(j, "side_lobe_gain", r.side_lobe_gain);
  optional_field(j, "beamwidth", r.beamwidth);
  optional_field(j, "alpha_los", r.alpha_los);
  optional_field(j, "alpha_nlos", r.alpha_nlos);
  optional_field(j, "carrier_hz", r.carrier_hz);
  r.kappa_los = r.kappa_nlos = reference_path_loss(r.carrier_hz);
  optional_field(j, "kappa_los", r.kappa_los);
  optional_field(j, "kappa_nlos", r.kappa_nlos);
  optional_field(j, "noise_psd_w_per_hz", r.noise_psd_w_per_hz);
  if (j.contains("noise_psd_dbm_per_hz")) {
    r.noise_psd_w_per_hz = dbm_to_watts(required<double>(j, "noise_psd_dbm_per_hz"));
  }
  optional_field(j, "los_decay_per_m", r.los_decay_per_m);
  if (j.contains("fading")) {
    const auto f = required<std::string>(j, "fading");
    if (f == "deterministic") {
      r.fading = FadingMode::kDeterministic;
    } else if (f == "nakagami") {
      r.fading = FadingMode::kNakagami;
    } else {
      throw FormatError("fading must be 'deterministic' or 'nakagami', got '" + f + "'");
    }
  }
  optional_field(j, "nakagami_m_los", r.nakagami_m_los);
  optional_field(j, "nakagami_m_nlos", r.nakagami_m_nlos);
  optional_field(j, "side_lobe_interference", r.side_lobe_interference);
  try {
    r.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("radio: ") + e.what());
  }
  return r;
}

ordered_json radio_to_ordered(const RadioParams& r) {
  ordered_json j;
  j["bandwidth_hz"] = r.bandwidth_hz;
  j["tx_power_w"] = r.tx_power_w;
  j["side_lobe_gain"] = r.side_lobe_gain;
  j["beamwidth"] = r.beamwidth;
  j["alpha_los"] = r.alpha_los;
  j["alpha_nlos"] = r.alpha_nlos;
  j["carrier_hz"] = r.carrier_hz;
  j["kappa_los"] = r.kappa_los;
  j["kappa_nlos"] = r.kappa_nlos;
  j["noise_psd_w_per_hz"] = r.noise_psd_w_per_hz;
  j["los_decay_per_m"] = r.los_decay_per_m;
  j["fading"] = r.fading == FadingMode::kNakagami ? "nakagami" : "deterministic";
  j["nakagami_m_los"] = r.nakagami_m_los;
  j["nakagami_m_nlos"] = r.nakagami_m_nlos;
  j["side_lobe_interference"] = r.side_lobe_interference;
  return j;
}

InstanceOptions instance_options_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("instance section must be an object");
  reject_unknown(j,
                 {"side_length", "beams_per_cell", "beamwidth", "range_factor", "velocity",
                  "min_separation",
                  "horizon", "service_time", "window_mode", "window_width",
                  "max_attempts_per_node"},
                 "instance");
  InstanceOptions o;
  optional_field(j, "side_length", o.side_length);
  optional_field(j, "beams_per_cell", o.beams_per_cell);
  optional_field(j, "beamwidth", o.beamwidth);
  optional_field(j, "range_factor", o.range_factor);
  optional_field(j, "velocity", o.velocity);
  optional_field(j, "min_separation", o.sampling.min_separation);
  optional_field(j, "horizon", o.sampling.horizon);
  optional_field(j, "service_time", o.sampling.service_time);
  if (j.contains("window_mode")) {
    const auto m = required<std::string>(j, "window_mode");
    if (m == "fixed") {
      o.sampling.window_mode = WindowMode::kFixed;
    } else if (m == "randomized") {
      o.sampling.window_mode = WindowMode::kRandomized;
    } else {
      throw FormatError("window_mode must be 'fixed' or 'randomized', got '" + m + "'");
    }
  }
  optional_field(j, "window_width", o.sampling.window_width);
  optional_field(j, "max_attempts_per_node", o.sampling.max_attempts_per_node);
  if (o.side_length <= 0 || o.velocity <= 0 || o.range_factor <= 0 || o.sampling.horizon <= 0 ||
      o.sampling.service_time < 0 || o.sampling.min_separation < 0) {
    throw FormatError("instance: lengths, velocity and horizon must be positive");
  }
  return o;
}

ordered_json instance_options_to_ordered(const InstanceOptions& o) {
  ordered_json j;
  j["side_length"] = o.side_length;
  j["beams_per_cell"] = o.beams_per_cell;
  j["beamwidth"] = o.beamwidth;
  j["range_factor"] = o.range_factor;
  j["velocity"] = o.velocity;
  j["min_separation"] = o.sampling.min_separation;
  j["horizon"] = o.sampling.horizon;
  j["service_time"] = o.sampling.service_time;
  j["window_mode"] = o.sampling.window_mode == WindowMode::kFixed ? "fixed" : "randomized";
  j["window_width"] = o.sampling.window_width;
  j["max_attempts_per_node"] = o.sampling.max_attempts_per_node;
  return j;
}

SolveLimits limits_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("limits section must be an object");
  reject_unknown(j, {"time_limit_s", "node_limit", "gap_tolerance"}, "limits");
  SolveLimits l;
  optional_field(j, "time_limit_s", l.time_limit_s);
  optional_field(j, "node_limit", l.node_limit);
  optional_field(j, "gap_tolerance", l.gap_tolerance);
  try {
    l.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("limits: ") + e.what());
  }
  return l;
}

ordered_json config_to_ordered(const ExperimentConfig& c) {
  ordered_json j;
  ordered_json scenarios = ordered_json::array();
  for (Scenario s : c.scenarios) scenarios.push_back(std::string(to_string(s)));
  j["scenarios"] = scenarios;
  j["node_counts"] = c.node_counts;
  j["robots"] = c.robots;
  j["runs"] = c.runs;
  j["base_seed"] = c.base_seed;
  j["threads"] = c.threads;
  j["instance"] = instance_options_to_ordered(c.instance);
  j["radio"] = radio_to_ordered(c.radio);
  j["limits"] = {{"time_limit_s", c.limits.time_limit_s},
                 {"node_limit", c.limits.node_limit},
                 {"gap_tolerance", c.limits.gap_tolerance}};
  return j;
}

std::vector<Scenario> scenarios_from_json(const json& j) {
  std::vector<Scenario> out;
  auto add = [&](const std::string& s) {
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
      part = trim(part);
      if (!part.empty()) out.push_back(parse_scenario(part));
    }
  };
  if (j.is_string()) {
    add(j.get<std::string>());
  } else if (j.is_array()) {
    for (const auto& e : j) add(e.get<std::string>());
  } else {
    throw FormatError("scenarios must be a string or a list of strings");
  }
  return out;
}

}  // namespace

RadioParams radio_params_from_text(std::string_view text) {
  const json j = parse_json(normalize_config_text(text));
  return radio_from_json(j.contains("radio") ? j.at("radio") : j);
}

std::string radio_params_to_json(const RadioParams& radio) { return dump(radio_to_ordered(radio)); }

ExperimentConfig experiment_config_from_text(std::string_view text) {
  json j = parse_json(normalize_config_text(text));
  if (j.contains("config")) j = json(j.at("config"));
  if (!j.is_object()) throw FormatError("config must be an object");
  reject_unknown(j,
                 {"scenario", "scenarios", "node_counts", "robots", "runs", "base_seed", "seed",
                  "threads", "instance", "radio", "limits"},
                 "config");
  ExperimentConfig c;
  try {
    if (j.contains("scenario") && j.contains("scenarios")) {
      throw FormatError("give either scenario or scenarios, not both");
    }
    if (j.contains("scenarios")) c.scenarios = scenarios_from_json(j.at("scenarios"));
    if (j.contains("scenario")) c.scenarios = scenarios_from_json(j.at("scenario"));
    if (j.contains("node_counts")) {
      const json& n = j.at("node_counts");
      c.node_counts = n.is_array() ? n.get<std::vector<int>>() : std::vector<int>{n.get<int>()};
    }
    optional_field(j, "robots", c.robots);
    optional_field(j, "runs", c.runs);
    if (j.contains("base_seed") && j.contains("seed")) {
      throw FormatError("give either base_seed or seed, not both");
    }
    optional_field(j, "base_seed", c.base_seed);
    optional_field(j, "seed", c.base_seed);
    optional_field(j, "threads", c.threads);
    if (j.contains("instance")) c.instance = instance_options_from_json(j.at("instance"));
    if (j.contains("radio")) c.radio = radio_from_json(j.at("radio"));
    if (j.contains("limits")) c.limits = limits_from_json(j.at("limits"));
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("malformed config: ") + e.what());
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid config: ") + e.what());
  }
  return c;
}

std::string experiment_config_to_json(const ExperimentConfig& config) {
  return dump(config_to_ordered(config));
}

// ---------------------------------------------------------------------------
// Results

namespace {

ordered_json box_to_ordered(const BoxStats& b) {
  return {{"min", b.min}, {"q1", b.q1}, {"median", b.median},
          {"q3", b.q3},   {"max", b.max}, {"mean", b.mean}};
}

ordered_json outcome_to_ordered(const SchemeOutcome& o) {
  return {{"status", to_string(o.status)},
          {"travel_time_s", o.travel_time_s},
          {"overall_rate_bps", o.overall_rate_bps},
          {"collisions", o.collisions},
          {"nodes_explored", o.nodes_explored}};
}

}  // namespace

std::string results_to_json(const ExperimentResults& results) {
  ordered_json j;
  j["schema_version"] = kResultsSchemaVersion;
  j["kind"] = "results";
  j["config"] = config_to_ordered(results.config);
  j["cells"] = ordered_json::array();
  for (const auto& c : results.cells) {
    j["cells"].push_back({{"scenario", to_string(c.scenario)},
                          {"nodes", c.nodes},
                          {"included", c.included},
                          {"excluded", c.excluded},
                          {"cua_rate_mbps", box_to_ordered(c.cua_rate_mbps)},
                          {"ca_rate_mbps", box_to_ordered(c.ca_rate_mbps)},
                          {"mean_travel_cua_s", c.mean_travel_cua_s},
                          {"mean_travel_ca_s", c.mean_travel_ca_s},
                          {"mean_improvement_pct", c.mean_improvement_pct},
                          {"min_improvement_pct", c.min_improvement_pct},
                          {"max_improvement_pct", c.max_improvement_pct},
                          {"mean_travel_increase_pct", c.mean_travel_increase_pct},
                          {"mean_collisions_cua", c.mean_collisions_cua},
                          {"mean_collisions_ca", c.mean_collisions_ca},
                          {"mean_h_pairs", c.mean_h_pairs}});
  }
  j["runs"] = ordered_json::array();
  for (const auto& r : results.runs) {
    j["runs"].push_back({{"scenario", to_string(r.scenario)},
                         {"nodes", r.nodes},
                         {"run", r.run},
                         {"seed", r.seed},
                         {"h_pairs", r.h_pairs},
                         {"cua", outcome_to_ordered(r.cua)},
                         {"ca", outcome_to_ordered(r.ca)},
                         {"rate_improvement_pct", r.rate_improvement_pct()},
                         {"travel_increase_pct", r.travel_increase_pct()}});
  }
  return dump(j);
}

std::string manifest_to_json(const ExperimentResults& results) {
  ordered_json j;
  j["schema_version"] = kResultsSchemaVersion;
  j["kind"] = "manifest";
  j["config"] = config_to_ordered(results.config);
  j["seed_derivation"] =
      "run_seed = splitmix64 chain over (base_seed, scenario, nodes, run); "
      "node sampling uses derive_seed(run_seed, 1), link sampling derive_seed(run_seed, 2)";
  j["runs"] = ordered_json::array();
  for (const auto& r : results.runs) {
    j["runs"].push_back(
        {{"scenario", to_string(r.scenario)}, {"nodes", r.nodes}, {"run", r.run}, {"seed", r.seed}});
  }
  return dump(j);
}

}  // namespace mrpath
