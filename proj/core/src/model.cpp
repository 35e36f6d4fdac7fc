#include "mrpath/model.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mrpath {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::kDepartOnce: return "depart_once";
    case Family::kReturnOnce: return "return_once";
    case Family::kVisitOnce: return "visit_once";
    case Family::kFlowBalance: return "flow_balance";
    case Family::kFirstArrivalLower: return "first_arrival_lower";
    case Family::kArrivalChainLower: return "arrival_chain_lower";
    case Family::kReturnDeadline: return "return_deadline";
    case Family::kFirstArrivalUpper: return "first_arrival_upper";
    case Family::kArrivalChainUpper: return "arrival_chain_upper";
    case Family::kTimeWindow: return "time_window";
    case Family::kCollisionPairCount: return "collision_pair_count";
    case Family::kCollisionOrder: return "collision_order";
    case Family::kCollisionSeparation: return "collision_separation";
  }
  return "unknown";
}

int ModelStats::total_rows() const {
  int n = 0;
  for (const auto& [f, c] : rows) n += c;
  return n;
}

BigM big_m_value(const Instance& instance) {
  double max_service = 0.0;
  for (const auto& n : instance.nodes.nodes) max_service = std::max(max_service, n.service_time);
  return {instance.nodes.depot_window.latest + max_service + instance.travel_times().max_entry()};
}

int MilpModel::x_index(int i, int j, int k) const {
  const int n = routing.size();
  if (i < 0 || j < 0 || i >= n || j >= n || k < 0 || k >= routing.robots) return -1;
  return x_lookup[(static_cast<std::size_t>(k) * n + i) * n + j];
}

int MilpModel::t_index(int i) const {
  if (i < 0 || i >= routing.size()) return -1;
  return t_lookup[i];
}

int MilpModel::z_index(int i, int j) const {
  const int n = routing.size();
  if (i < 0 || j < 0 || i >= n || j >= n) return -1;
  return z_lookup[static_cast<std::size_t>(i) * n + j];
}

ModelStats MilpModel::stats() const {
  ModelStats s;
  for (const auto& v : variables) {
    switch (v.name.front()) {
      case 'x': ++s.x_vars; break;
      case 't': ++s.t_vars; break;
      case 'z': ++s.z_vars; break;
      default: break;
    }
  }
  for (const auto& c : constraints) ++s.rows[c.family];
  return s;
}

namespace {

std::string fmt_name(const char* pattern, int a, int b = 0, int c = 0) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

class ModelBuilder {
 public:
  ModelBuilder(const Instance& instance, Variant variant, const ModelOptions& options)
      : inst_(instance), variant_(variant), opt_(options) {}

  MilpModel build() {
    prepare_routing();
    declare_variables();
    add_objective();
    add_routing_rows();
    add_timing_rows();
    if (variant_ == Variant::kCollisionAware && !r().collision_pairs.empty()) add_collision_rows();
    return std::move(model_);
  }

 private:
  RoutingData& r() { return model_.routing; }

  void prepare_routing() {
    const int v = inst_.visit_count();
    if (inst_.robots < 1) throw std::invalid_argument("instance needs at least one robot");
    if (v < 1) throw std::invalid_argument("instance needs at least one visit node");

    model_.variant = variant_;
    model_.instance_digest = inst_.digest();
    model_.big_m = big_m_value(inst_);

    RoutingData& rd = r();
    rd.visits = v;
    rd.robots = inst_.robots;
    rd.travel = inst_.travel_times();
    rd.horizon = inst_.nodes.depot_window.latest;
    rd.allow_idle = opt_.allow_idle_robots;
    rd.collision_pairs = inst_.collisions.pairs();
    const int n = rd.size();
    rd.earliest.assign(n, inst_.nodes.depot_window.earliest);
    rd.latest.assign(n, rd.horizon);
    rd.service.assign(n, 0.0);
    for (const auto& node : inst_.nodes.nodes) {
      rd.earliest[node.id] = node.window.earliest;
      rd.latest[node.id] = node.window.latest;
      rd.service[node.id] = node.service_time;
    }

    const double e0 = rd.earliest[0];
    const double tol = kTimeTolerance;
    std::vector<double> earliest_arrival(n, 0.0);
    for (int i = 1; i <= v; ++i) {
      earliest_arrival[i] = std::max(rd.earliest[i], e0 + rd.travel(0, i));
      if (e0 + rd.travel(0, i) > rd.latest[i] + tol) {
        model_.diagnostics.push_back(
            fmt_name("node %d unreachable: direct travel from the depot misses its window", i));
      }
      if (earliest_arrival[i] + rd.service[i] + rd.travel(i, rd.sink()) > rd.horizon + tol) {
        model_.diagnostics.push_back(
            fmt_name("node %d cannot be served and returned to the depot by the horizon", i));
      }
    }
    if (v < rd.robots && !rd.allow_idle) {
      model_.diagnostics.push_back(
          "fewer visit nodes than robots while every robot must leave the depot");
    }

    rd.arc_allowed.assign(static_cast<std::size_t>(n) * n, 0);
    auto allow = [&](int i, int j) { rd.arc_allowed[static_cast<std::size_t>(i) * n + j] = 1; };
    for (int j = 1; j <= v; ++j) {
      if (!opt_.prune_arcs || e0 + rd.travel(0, j) <= rd.latest[j] + tol) allow(0, j);
    }
    for (int i = 1; i <= v; ++i) {
      for (int j = 1; j <= v; ++j) {
        if (i == j) continue;
        const double arrive = earliest_arrival[i] + rd.service[i] + rd.travel(i, j);
        if (!opt_.prune_arcs || arrive <= rd.latest[j] + tol) allow(i, j);
      }
      const double back = earliest_arrival[i] + rd.service[i] + rd.travel(i, rd.sink());
      if (!opt_.prune_arcs || back <= rd.horizon + tol) allow(i, rd.sink());
    }
    if (rd.allow_idle) allow(0, rd.sink());
  }

  int add_var(std::string name, VarKind kind, double lo, double hi) {
    model_.variables.push_back({std::move(name), kind, lo, hi});
    return static_cast<int>(model_.variables.size()) - 1;
  }

  void declare_variables() {
    const RoutingData& rd = r();
    const int n = rd.size();
    model_.x_lookup.assign(static_cast<std::size_t>(rd.robots) * n * n, -1);
    model_.t_lookup.assign(n, -1);
    model_.z_lookup.assign(static_cast<std::size_t>(n) * n, -1);
    for (int k = 0; k < rd.robots; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (!rd.arc(i, j)) continue;
          model_.x_lookup[(static_cast<std::size_t>(k) * n + i) * n + j] =
              add_var(fmt_name("x_%d_%d_%d", i, j, k + 1), VarKind::kBinary, 0.0, 1.0);
        }
      }
    }
    for (int i = 1; i <= rd.visits; ++i) {
      model_.t_lookup[i] = add_var(fmt_name("t_%d", i), VarKind::kContinuous, 0.0, rd.horizon);
    }
    if (variant_ == Variant::kCollisionAware) {
      std::vector<std::pair<int, int>> ordered;
      for (auto [i, j] : rd.collision_pairs) {
        ordered.emplace_back(i, j);
        ordered.emplace_back(j, i);
      }
      std::sort(ordered.begin(), ordered.end());
      for (auto [i, j] : ordered) {
        model_.z_lookup[static_cast<std::size_t>(i) * n + j] =
            add_var(fmt_name("z_%d_%d", i, j), VarKind::kBinary, 0.0, 1.0);
      }
    }
  }

  void add_objective() {
    const RoutingData& rd = r();
    for (int k = 0; k < rd.robots; ++k) {
      for (int i = 0; i < rd.size(); ++i) {
        for (int j = 0; j < rd.size(); ++j) {
          const int x = model_.x_index(i, j, k);
          if (x >= 0) model_.objective.push_back({x, rd.travel(i, j)});
        }
      }
    }
  }

  void add_row(std::string name, Family family, std::vector<Term> terms, Relation rel,
               double rhs) {
    model_.constraints.push_back({std::move(name), family, std::move(terms), rel, rhs});
  }

  void add_routing_rows() {
    const RoutingData& rd = r();
    const int v = rd.visits;
    const int sink = rd.sink();
    for (int k = 0; k < rd.robots; ++k) {
      std::vector<Term> terms;
      for (int j = 1; j <= sink; ++j) {
        if (const int x = model_.x_index(0, j, k); x >= 0) terms.push_back({x, 1.0});
      }
      add_row(fmt_name("depart_k%d", k + 1), Family::kDepartOnce, std::move(terms),
              Relation::kEqual, 1.0);
    }
    for (int k = 0; k < rd.robots; ++k) {
      std::vector<Term> terms;
      for (int i = 0; i <= v; ++i) {
        if (const int x = model_.x_index(i, sink, k); x >= 0) terms.push_back({x, 1.0});
      }
      add_row(fmt_name("return_k%d", k + 1), Family::kReturnOnce, std::move(terms),
              Relation::kEqual, 1.0);
    }
    for (int j = 1; j <= v; ++j) {
      std::vector<Term> terms;
      for (int k = 0; k < rd.robots; ++k) {
        for (int i = 0; i <= v; ++i) {
          if (const int x = model_.x_index(i, j, k); x >= 0) terms.push_back({x, 1.0});
        }
      }
      add_row(fmt_name("visit_j%d", j), Family::kVisitOnce, std::move(terms), Relation::kEqual,
              1.0);
    }
    // Balance is imposed at visit nodes only: with no arcs into the source or
    // out of the sink, balance rows there would contradict depart/return.
    for (int k = 0; k < rd.robots; ++k) {
      for (int j = 1; j <= v; ++j) {
        std::vector<Term> terms;
        for (int i = 0; i <= v; ++i) {
          if (const int x = model_.x_index(i, j, k); x >= 0) terms.push_back({x, 1.0});
        }
        for (int h = 1; h <= sink; ++h) {
          if (const int x = model_.x_index(j, h, k); x >= 0) terms.push_back({x, -1.0});
        }
        add_row(fmt_name("flow_j%d_k%d", j, k + 1), Family::kFlowBalance, std::move(terms),
                Relation::kEqual, 0.0);
      }
    }
  }

  double bound_m(double tight) const {
    if (!opt_.per_constraint_big_m) return model_.big_m.value;
    return std::max(0.0, tight);
  }

  void add_timing_rows() {
    RoutingData& rd = r();
    const int v = rd.visits;
    const int sink = rd.sink();
    const double e0 = rd.earliest[0];
    const double l0 = rd.horizon;
    auto tmin = [&](int i) { return std::max(0.0, rd.earliest[i]); };
    auto tmax = [&](int i) { return std::min(l0, rd.latest[i]); };

    for (int k = 0; k < rd.robots; ++k) {
      for (int i = 1; i <= v; ++i) {
        const int x = model_.x_index(0, i, k);
        if (x < 0) continue;
        const double m = bound_m(e0 + rd.travel(0, i) - tmin(i));
        // t_i - M x >= e0 + T_0i - M
        add_row(fmt_name("first_lo_i%d_k%d", i, k + 1), Family::kFirstArrivalLower,
                {{model_.t_index(i), 1.0}, {x, -m}}, Relation::kGreaterEqual,
                e0 + rd.travel(0, i) - m);
      }
    }
    for (int k = 0; k < rd.robots; ++k) {
      for (int i = 1; i <= v; ++i) {
        for (int j = 1; j <= v; ++j) {
          const int x = model_.x_index(i, j, k);
          if (x < 0) continue;
          const double slack = rd.service[i] + rd.travel(i, j);
          const double m = bound_m(tmax(i) + slack - tmin(j));
          // t_i - t_j + M x <= M - w_i - T_ij
          add_row(fmt_name("chain_lo_i%d_j%d_k%d", i, j, k + 1), Family::kArrivalChainLower,
                  {{model_.t_index(i), 1.0}, {model_.t_index(j), -1.0}, {x, m}},
                  Relation::kLessEqual, m - slack);
        }
      }
    }
    for (int k = 0; k < rd.robots; ++k) {
      for (int i = 1; i <= v; ++i) {
        const int x = model_.x_index(i, sink, k);
        if (x < 0) continue;
        const double slack = rd.service[i] + rd.travel(i, sink);
        const double m = bound_m(tmax(i) + slack);
        // t_i + (M - l0) x <= M - w_i - T_i,sink
        add_row(fmt_name("deadline_i%d_k%d", i, k + 1), Family::kReturnDeadline,
                {{model_.t_index(i), 1.0}, {x, m - l0}}, Relation::kLessEqual, m - slack);
      }
    }
    for (int k = 0; k < rd.robots; ++k) {
      for (int i = 1; i <= v; ++i) {
        const int x = model_.x_index(0, i, k);
        if (x < 0) continue;
        const double m = bound_m(tmax(i) - e0 - rd.travel(0, i));
        // t_i + M x <= e0 + T_0i + M
        add_row(fmt_name("first_hi_i%d_k%d", i, k + 1), Family::kFirstArrivalUpper,
                {{model_.t_index(i), 1.0}, {x, m}}, Relation::kLessEqual,
                e0 + rd.travel(0, i) + m);
      }
    }
    for (int i = 1; i <= v; ++i) {
      for (int j = 1; j <= v; ++j) {
        if (i == j) continue;
        std::vector<Term> xs;
        for (int k = 0; k < rd.robots; ++k) {
          if (const int x = model_.x_index(i, j, k); x >= 0) xs.push_back({x, 0.0});
        }
        if (xs.empty()) continue;
        const double slack = rd.service[i] + rd.travel(i, j);
        const double m = bound_m(tmax(j) - tmin(i) - slack);
        // t_j - t_i + M sum_k x <= w_i + T_ij + M
        std::vector<Term> terms{{model_.t_index(j), 1.0}, {model_.t_index(i), -1.0}};
        for (auto& t : xs) terms.push_back({t.var, m});
        add_row(fmt_name("chain_hi_i%d_j%d", i, j), Family::kArrivalChainUpper, std::move(terms),
                Relation::kLessEqual, slack + m);
      }
    }
    for (int i = 1; i <= v; ++i) {
      add_row(fmt_name("window_lo_i%d", i), Family::kTimeWindow, {{model_.t_index(i), 1.0}},
              Relation::kGreaterEqual, rd.earliest[i]);
      add_row(fmt_name("window_hi_i%d", i), Family::kTimeWindow, {{model_.t_index(i), 1.0}},
              Relation::kLessEqual, rd.latest[i]);
    }
  }

  void add_collision_rows() {
    const RoutingData& rd = r();
    const auto& pairs = rd.collision_pairs;
    std::vector<Term> all;
    for (int idx = 0; idx < static_cast<int>(model_.variables.size()); ++idx) {
      if (model_.variables[idx].name.front() == 'z') all.push_back({idx, 1.0});
    }
    add_row("collision_pairs", Family::kCollisionPairCount, std::move(all), Relation::kEqual,
            static_cast<double>(pairs.size()));
    model_.redundant_families.push_back(Family::kCollisionPairCount);
    for (auto [i, j] : pairs) {
      add_row(fmt_name("order_i%d_j%d", i, j), Family::kCollisionOrder,
              {{model_.z_index(i, j), 1.0}, {model_.z_index(j, i), 1.0}}, Relation::kEqual, 1.0);
    }
    const double l0 = rd.horizon;
    auto tmin = [&](int i) { return std::max(0.0, rd.earliest[i]); };
    auto tmax = [&](int i) { return std::min(l0, rd.latest[i]); };
    for (auto [a, b] : pairs) {
      for (auto [i, j] : {std::pair{a, b}, std::pair{b, a}}) {
        const double m = bound_m(tmax(i) + rd.service[i] - tmin(j));
        // t_i - t_j + M z_ij <= M - w_i
        add_row(fmt_name("separate_i%d_j%d", i, j), Family::kCollisionSeparation,
                {{model_.t_index(i), 1.0}, {model_.t_index(j), -1.0}, {model_.z_index(i, j), m}},
                Relation::kLessEqual, m - rd.service[i]);
      }
    }
  }

  const Instance& inst_;
  Variant variant_;
  ModelOptions opt_;
  MilpModel model_;
};

void append_number(std::string& out, double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  out += buf;
}

void append_linear(std::string& out, const MilpModel& model, const std::vector<Term>& terms) {
  if (terms.empty()) {
    out += " 0 ";
    out += model.variables.front().name;
    return;
  }
  int on_line = 0;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const double c = terms[t].coef;
    if (on_line == 6) {
      out += "\n  ";
      on_line = 0;
    }
    out += (c < 0.0) ? " - " : (t == 0 ? " " : " + ");
    if (std::abs(c) != 1.0) {
      append_number(out, std::abs(c));
      out += ' ';
    }
    out += model.variables[terms[t].var].name;
    ++on_line;
  }
}

}  // namespace

MilpModel build_model(const Instance& instance, Variant variant, const ModelOptions& options) {
  return ModelBuilder(instance, variant, options).build();
}

MilpModel build_mp_cua(const Instance& instance, const ModelOptions& options) {
  return build_model(instance, Variant::kCollisionUnaware, options);
}

MilpModel build_mp_ca(const Instance& instance, const ModelOptions& options) {
  return build_model(instance, Variant::kCollisionAware, options);
}

std::string export_lp(const MilpModel& model) {
  std::string out;
  out += "\\ mrpath path-planning model, variant ";
  out += (model.variant == Variant::kCollisionAware ? "MP-CA" : "MP-CUA");
  out += ", instance ";
  out += model.instance_digest;
  out += "\nMinimize\n obj:";
  append_linear(out, model, model.objective);
  out += "\nSubject To\n";
  for (const auto& c : model.constraints) {
    out += ' ';
    out += c.name;
    out += ':';
    append_linear(out, model, c.terms);
    out += c.relation == Relation::kLessEqual ? " <= "
           : c.relation == Relation::kEqual   ? " = "
                                              : " >= ";
    append_number(out, c.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (const auto& var : model.variables) {
    if (var.kind != VarKind::kContinuous) continue;
    out += ' ';
    append_number(out, var.lower);
    out += " <= " + var.name + " <= ";
    append_number(out, var.upper);
    out += '\n';
  }
  out += "Binaries\n";
  int on_line = 0;
  for (const auto& var : model.variables) {
    if (var.kind != VarKind::kBinary) continue;
    out += ' ';
    out += var.name;
    if (++on_line == 10) {
      out += '\n';
      on_line = 0;
    }
  }
  if (on_line != 0) out += '\n';
  out += "End\n";
  return out;
}

double objective_value(const MilpModel& model, const std::vector<double>& values) {
  double total = 0.0;
  for (const auto& t : model.objective) total += t.coef * values.at(t.var);
  return total;
}

std::vector<std::string> violated_constraints(const MilpModel& model,
                                              const std::vector<double>& values,
                                              double tolerance) {
  std::vector<std::string> out;
  if (values.size() != model.variables.size()) {
    out.push_back("assignment size mismatch");
    return out;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& var = model.variables[i];
    const double x = values[i];
    if (x < var.lower - tolerance || x > var.upper + tolerance) out.push_back("bound " + var.name);
    if (var.kind == VarKind::kBinary && std::abs(x - std::round(x)) > tolerance) {
      out.push_back("integrality " + var.name);
    }
  }
  for (const auto& c : model.constraints) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * values[t.var];
    const bool ok = c.relation == Relation::kLessEqual ? lhs <= c.rhs + tolerance
                    : c.relation == Relation::kEqual   ? std::abs(lhs - c.rhs) <= tolerance
                                                       : lhs >= c.rhs - tolerance;
    if (!ok) out.push_back(c.name);
  }
  return out;
}

std::optional<std::vector<double>> complete_continuous(const MilpModel& model,
                                                       const std::vector<double>& values) {
  if (values.size() != model.variables.size()) {
    throw std::invalid_argument("assignment size mismatch");
  }
  constexpr double kEps = 1e-9;
  const int nvars = static_cast<int>(model.variables.size());
  // Graph node per continuous variable plus a zero reference node.
  std::vector<int> node_of(nvars, -1);
  int nodes = 0;
  for (int i = 0; i < nvars; ++i) {
    if (model.variables[i].kind == VarKind::kContinuous) node_of[i] = nodes++;
  }
  const int zero = nodes++;
  struct Edge {
    int from;
    int to;
    double w;
  };
  std::vector<Edge> edges;
  // Encodes  value(to) - value(from) <= w.
  auto upper = [&](int a, double w) { edges.push_back({zero, a, w}); };
  auto lower = [&](int a, double w) { edges.push_back({a, zero, -w}); };
  auto diff = [&](int a, int b, double w) { edges.push_back({b, a, w}); };  // a - b <= w

  for (int i = 0; i < nvars; ++i) {
    if (node_of[i] < 0) continue;
    upper(node_of[i], model.variables[i].upper);
    lower(node_of[i], model.variables[i].lower);
  }

  for (const auto& c : model.constraints) {
    double rhs = c.rhs;
    std::vector<Term> cont;
    for (const auto& t : c.terms) {
      if (node_of[t.var] < 0) {
        rhs -= t.coef * std::round(values[t.var]);
      } else if (t.coef != 0.0) {
        cont.push_back(t);
      }
    }
    auto emit = [&](const std::vector<Term>& terms, double bound) {  // sum <= bound
      if (terms.empty()) {
        return bound >= -kTimeTolerance;
      }
      if (terms.size() == 1) {
        const double a = terms[0].coef;
        if (a > 0) upper(node_of[terms[0].var], bound / a);
        else lower(node_of[terms[0].var], bound / a);
        return true;
      }
      if (terms.size() == 2 && terms[0].coef == -terms[1].coef && std::abs(terms[0].coef) == 1.0) {
        const Term& pos = terms[0].coef > 0 ? terms[0] : terms[1];
        const Term& neg = terms[0].coef > 0 ? terms[1] : terms[0];
        diff(node_of[pos.var], node_of[neg.var], bound);
        return true;
      }
      throw std::logic_error("row " + c.name + " is not a difference constraint");
    };
    auto negated = [](std::vector<Term> terms) {
      for (auto& t : terms) t.coef = -t.coef;
      return terms;
    };
    bool ok = true;
    if (c.relation != Relation::kGreaterEqual) ok = ok && emit(cont, rhs);
    if (c.relation != Relation::kLessEqual) ok = ok && emit(negated(cont), -rhs);
    if (!ok) return std::nullopt;
  }

  // Bellman-Ford from a virtual source connected to every node at weight 0.
  std::vector<double> dist(nodes, 0.0);
  bool changed = true;
  for (int round = 0; round <= nodes && changed; ++round) {
    changed = false;
    for (const auto& e : edges) {
      if (dist[e.from] + e.w < dist[e.to] - kEps) {
        dist[e.to] = dist[e.from] + e.w;
        changed = true;
      }
    }
    if (changed && round == nodes) return std::nullopt;
  }
  if (changed) return std::nullopt;

  std::vector<double> out = values;
  for (int i = 0; i < nvars; ++i) {
    if (node_of[i] >= 0) {
      out[i] = dist[node_of[i]] - dist[zero];
    } else {
      out[i] = std::round(values[i]);
    }
  }
  return out;
}

}  // namespace mrpath
