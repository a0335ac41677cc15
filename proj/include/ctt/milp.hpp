#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctt/chains.hpp"
#include "ctt/instance.hpp"

namespace ctt {

// x: arc use (binary, per g,m); xi: admitted fraction (per g); y: transfer
// indicator (per g and adjacent pair m,n); z: admitted-flow auxiliary, the
// linear stand-in for xi*x (per g,m); r: route indicator (per g).
enum class VarKind { x, xi, y, z, r };

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

struct VarRef {
  VarKind kind = VarKind::xi;
  std::size_t shipment = 0;
  std::size_t arc = kNoIndex;
  std::size_t next_arc = kNoIndex;

  friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

struct Variable {
  VarRef ref;
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  bool integer = false;
};

struct Term {
  std::size_t var = 0;
  double coef = 0.0;
};

enum class RowSense { le, ge, eq };

struct Row {
  std::string label;
  std::vector<Term> terms;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

/// Solver-agnostic linear model: maximize `objective` subject to `rows` and
/// variable bounds. `constant_offset` is the express-train organization cost
/// that was taken out of the objective; net income = objective - offset.
struct MilpModel {
  struct ShipmentVars {
    std::size_t origin = 0;       // node index
    std::size_t destination = 0;  // node index
    std::size_t xi = 0;
    std::size_t r = 0;
    std::map<std::size_t, std::size_t> x;  // arc -> var
    std::map<std::size_t, std::size_t> z;  // arc -> var
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> y;
  };

  std::vector<Variable> variables;
  std::vector<Row> rows;
  std::vector<Term> objective;
  double constant_offset = 0.0;

  std::vector<ShipmentVars> shipments;
  std::vector<std::pair<std::size_t, std::size_t>> arc_ends;  // (head, tail) node index per arc
  std::vector<std::string> arc_ids;

  std::optional<std::size_t> find(const VarRef& ref) const {
    if (ref.shipment >= shipments.size()) return std::nullopt;
    const auto& s = shipments[ref.shipment];
    auto lookup = [](const auto& map, const auto& key) -> std::optional<std::size_t> {
      if (auto it = map.find(key); it != map.end()) return it->second;
      return std::nullopt;
    };
    switch (ref.kind) {
      case VarKind::xi: return s.xi;
      case VarKind::r: return s.r;
      case VarKind::x: return lookup(s.x, ref.arc);
      case VarKind::z: return lookup(s.z, ref.arc);
      case VarKind::y: return lookup(s.y, std::pair{ref.arc, ref.next_arc});
    }
    return std::nullopt;
  }

  std::size_t count(VarKind kind) const {
    std::size_t n = 0;
    for (const auto& v : variables) n += v.ref.kind == kind;
    return n;
  }
};

struct BuildOptions {
  int max_arcs = kDefaultMaxArcs;
  bool relax_y = false;  // y continuous in [0,1] instead of binary
};

namespace detail {

class ModelBuilder {
 public:
  explicit ModelBuilder(MilpModel& model) : model_(model) {}

  std::size_t add_var(VarRef ref, std::string name, double lo, double hi, bool integer) {
    model_.variables.push_back({ref, std::move(name), lo, hi, integer});
    return model_.variables.size() - 1;
  }

  void add_row(std::string label, std::vector<Term> terms, RowSense sense, double rhs) {
    model_.rows.push_back({std::move(label), std::move(terms), sense, rhs});
  }

 private:
  MilpModel& model_;
};

inline std::string idx(std::size_t i) { return std::to_string(i); }

}  // namespace detail

/// Builds the linear car-to-train assignment model.
///
/// Per shipment g the model holds the objective term R_g N_g xi_g, the
/// linearized due-date row (eq2) with its y sandwich (lin13lo/lin13hi), the
/// logic rows M xi_g >= x_g^m (eq4), route-indicator flow balance
/// (bal_src/bal_dst/bal_k plus degree caps deg_k and route_xi: xi_g <= r_g),
/// and the McCormick envelope of z_g^m = xi_g x_g^m (mcc1..3). Capacity rows
/// (eq3) are emitted once per capacitated arc over the z variables.
///
/// Arc variables exist only for arcs on some due-date-feasible chain of the
/// shipment with at most `max_arcs` arcs; y exists for every adjacent pair of
/// those arcs.
inline MilpModel build_milp(const Instance& inst, const BuildOptions& opts = {}) {
  require_valid(inst);
  const auto& net = inst.network;

  MilpModel model;
  model.constant_offset = fixed_express_cost(inst).arc_side;
  for (std::size_t m = 0; m < net.arc_count(); ++m) {
    model.arc_ends.emplace_back(net.head(ArcIndex{m}).value, net.tail(ArcIndex{m}).value);
    model.arc_ids.push_back(net.arcs()[m].id);
  }

  detail::ModelBuilder b(model);
  using detail::idx;
  std::map<std::size_t, std::vector<Term>> capacity_terms;

  for (std::size_t g = 0; g < inst.shipments.size(); ++g) {
    const Shipment& s = inst.shipments[g];
    const std::string gs = idx(g);
    MilpModel::ShipmentVars sv;
    sv.origin = net.find_node(s.origin)->value;
    sv.destination = net.find_node(s.destination)->value;

    std::set<std::size_t> arcs;
    for (const auto& chain : enumerate_chains(inst, g, opts.max_arcs))
      for (ArcIndex m : chain.arcs) arcs.insert(m.value);

    sv.xi = b.add_var({VarKind::xi, g}, "xi_" + gs, 0.0, 1.0, false);
    sv.r = b.add_var({VarKind::r, g}, "r_" + gs, 0.0, 1.0, true);
    for (std::size_t m : arcs) sv.x[m] = b.add_var({VarKind::x, g, m}, "x_" + gs + "_" + idx(m), 0.0, 1.0, true);
    for (std::size_t m : arcs) sv.z[m] = b.add_var({VarKind::z, g, m}, "z_" + gs + "_" + idx(m), 0.0, 1.0, false);
    for (std::size_t m : arcs)
      for (std::size_t n : arcs)
        if (model.arc_ends[m].second == model.arc_ends[n].first)
          sv.y[{m, n}] = b.add_var({VarKind::y, g, m, n}, "y_" + gs + "_" + idx(m) + "_" + idx(n), 0.0, 1.0,
                                   !opts.relax_y);

    model.objective.push_back({sv.xi, s.full_value()});

    // Due date with products x_m x_n replaced by y_mn.
    std::vector<Term> due;
    for (std::size_t m : arcs) due.push_back({sv.x[m], net.arcs()[m].travel_time_h});
    for (const auto& [mn, var] : sv.y) due.push_back({var, transfer_time(net, ArcIndex{mn.first}, ArcIndex{mn.second})});
    if (!due.empty()) b.add_row("eq2_" + gs, std::move(due), RowSense::le, s.due_date_h);

    for (std::size_t m : arcs)
      b.add_row("eq4_" + gs + "_" + idx(m), {{sv.xi, inst.big_m}, {sv.x[m], -1.0}}, RowSense::ge, 0.0);

    std::vector<Term> src, dst;
    std::map<std::size_t, std::pair<std::vector<Term>, std::vector<Term>>> through;  // node -> (in, out)
    for (std::size_t m : arcs) {
      const auto [head, tail] = model.arc_ends[m];
      if (head == sv.origin) src.push_back({sv.x[m], 1.0});
      else through[head].second.push_back({sv.x[m], -1.0});
      if (tail == sv.destination) dst.push_back({sv.x[m], 1.0});
      else through[tail].first.push_back({sv.x[m], 1.0});
    }
    src.push_back({sv.r, -1.0});
    dst.push_back({sv.r, -1.0});
    b.add_row("bal_src_" + gs, std::move(src), RowSense::eq, 0.0);
    b.add_row("bal_dst_" + gs, std::move(dst), RowSense::eq, 0.0);
    for (auto& [k, io] : through) {
      auto& [in, out] = io;
      std::vector<Term> balance = in;
      balance.insert(balance.end(), out.begin(), out.end());
      b.add_row("bal_" + idx(k) + "_" + gs, std::move(balance), RowSense::eq, 0.0);
      if (!in.empty()) b.add_row("deg_" + idx(k) + "_" + gs, std::move(in), RowSense::le, 1.0);
    }
    b.add_row("route_xi_" + gs, {{sv.xi, 1.0}, {sv.r, -1.0}}, RowSense::le, 0.0);

    for (std::size_t m : arcs) {
      const std::string gm = gs + "_" + idx(m);
      const std::size_t z = sv.z[m];
      const std::size_t x = sv.x[m];
      b.add_row("mcc1_" + gm, {{z, 1.0}, {sv.xi, -1.0}}, RowSense::le, 0.0);
      b.add_row("mcc2_" + gm, {{z, 1.0}, {x, -1.0}}, RowSense::le, 0.0);
      b.add_row("mcc3_" + gm, {{z, 1.0}, {sv.xi, -1.0}, {x, -1.0}}, RowSense::ge, -1.0);
      if (net.arcs()[m].capacity) capacity_terms[m].push_back({z, s.volume_cars});
    }

    for (const auto& [mn, y] : sv.y) {
      const std::string gmn = gs + "_" + idx(mn.first) + "_" + idx(mn.second);
      const std::size_t xm = sv.x[mn.first];
      const std::size_t xn = sv.x[mn.second];
      b.add_row("lin13lo_" + gmn, {{xm, 1.0}, {xn, 1.0}, {y, -1.0}}, RowSense::le, 1.0);
      b.add_row("lin13hi_" + gmn, {{y, 1.0}, {xm, -0.5}, {xn, -0.5}}, RowSense::le, 0.0);
    }

    model.shipments.push_back(std::move(sv));
  }

  for (auto& [m, terms] : capacity_terms)
    b.add_row("eq3_" + idx(m), std::move(terms), RowSense::le, *net.arcs()[m].capacity);

  return model;
}

/// Which constraint family a row label belongs to ("eq2", "mcc", "bal", ...).
inline std::string row_family(std::string_view label) {
  for (std::string_view f : {"eq2", "eq3", "eq4", "bal", "deg", "route_xi", "mcc", "lin13"})
    if (label.starts_with(f)) return std::string(f);
  return "other";
}

inline double row_activity(const Row& row, std::span<const double> values) {
  double a = 0.0;
  for (const auto& t : row.terms) a += t.coef * values[t.var];
  return a;
}

inline double objective_value(const MilpModel& model, std::span<const double> values) {
  double v = 0.0;
  for (const auto& t : model.objective) v += t.coef * values[t.var];
  return v;
}

struct RowViolation {
  std::string label;  // row label, or "bound:<var>", "int:<var>", "def:<var>"
  double activity = 0.0;
  double rhs = 0.0;
  double amount = 0.0;  // how far outside the feasible side
};

struct FeasibilityReport {
  std::vector<RowViolation> violations;
  std::vector<std::string> warnings;
  double objective = 0.0;

  bool feasible() const noexcept { return violations.empty(); }

  std::size_t count_family(std::string_view family) const {
    std::size_t n = 0;
    for (const auto& v : violations) n += row_family(v.label) == family;
    return n;
  }
};

namespace detail {

inline bool near_binary(double v, double tol) { return std::abs(v) <= tol || std::abs(v - 1.0) <= tol; }

// Follows the used arcs of one shipment from its origin. Returns the arcs
// reached; used arcs not reached sit on cycles detached from the route.
inline std::set<std::size_t> trace_route(const MilpModel& model, const MilpModel::ShipmentVars& sv,
                                         std::span<const double> values) {
  std::set<std::size_t> used, reached;
  for (const auto& [m, var] : sv.x)
    if (values[var] > 0.5) used.insert(m);
  std::size_t at = sv.origin;
  while (at != sv.destination) {
    std::optional<std::size_t> next;
    for (std::size_t m : used)
      if (model.arc_ends[m].first == at && !reached.contains(m)) {
        next = m;
        break;
      }
    if (!next) break;
    reached.insert(*next);
    at = model.arc_ends[*next].second;
  }
  return reached;
}

}  // namespace detail

/// Checks an assignment (one value per model variable) against every row,
/// bound and integrality requirement at absolute tolerance `tol`. At points
/// where the x values are binary it also checks the definitional identities
/// y = x_m x_n and z = xi x. Used arcs that the route from the origin does not
/// reach are reported as a cycle warning.
inline FeasibilityReport check_solution(const MilpModel& model, std::span<const double> values, double tol = 1e-6) {
  if (values.size() != model.variables.size())
    throw Error("assignment has " + std::to_string(values.size()) + " values, model has " +
                std::to_string(model.variables.size()) + " variables");

  FeasibilityReport rep;
  rep.objective = objective_value(model, values);

  for (const auto& row : model.rows) {
    const double a = row_activity(row, values);
    double excess = 0.0;
    switch (row.sense) {
      case RowSense::le: excess = a - row.rhs; break;
      case RowSense::ge: excess = row.rhs - a; break;
      case RowSense::eq: excess = std::abs(a - row.rhs); break;
    }
    if (!(excess <= tol)) rep.violations.push_back({row.label, a, row.rhs, excess});
  }

  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    const auto& v = model.variables[i];
    const double val = values[i];
    if (!(val >= v.lower - tol)) rep.violations.push_back({"bound:" + v.name, val, v.lower, v.lower - val});
    if (!(val <= v.upper + tol)) rep.violations.push_back({"bound:" + v.name, val, v.upper, val - v.upper});
    if (v.integer && !detail::near_binary(val, tol))
      rep.violations.push_back({"int:" + v.name, val, std::round(val), std::abs(val - std::round(val))});
  }

  for (std::size_t g = 0; g < model.shipments.size(); ++g) {
    const auto& sv = model.shipments[g];
    const double xi = values[sv.xi];
    for (const auto& [mn, yvar] : sv.y) {
      const double xm = values[sv.x.at(mn.first)];
      const double xn = values[sv.x.at(mn.second)];
      if (!detail::near_binary(xm, tol) || !detail::near_binary(xn, tol)) continue;
      const double expect = std::round(xm) * std::round(xn);
      if (std::abs(values[yvar] - expect) > tol)
        rep.violations.push_back({"def:" + model.variables[yvar].name, values[yvar], expect,
                                  std::abs(values[yvar] - expect)});
    }
    for (const auto& [m, zvar] : sv.z) {
      const double x = values[sv.x.at(m)];
      if (!detail::near_binary(x, tol)) continue;
      const double expect = xi * std::round(x);
      if (std::abs(values[zvar] - expect) > tol)
        rep.violations.push_back({"def:" + model.variables[zvar].name, values[zvar], expect,
                                  std::abs(values[zvar] - expect)});
    }

    if (values[sv.r] > 0.5) {
      const auto reached = detail::trace_route(model, sv, values);
      std::size_t used = 0;
      for (const auto& [m, var] : sv.x) used += values[var] > 0.5;
      if (used > reached.size())
        rep.warnings.push_back("shipment " + std::to_string(g) + ": " + std::to_string(used - reached.size()) +
                               " used arc(s) lie on a cycle detached from the route");
    }
  }
  return rep;
}

/// Builds a full assignment from values keyed by variable name. Throws if any
/// variable is missing.
inline std::vector<double> assignment_from_names(const MilpModel& model,
                                                 const std::unordered_map<std::string, double>& named) {
  std::vector<double> values(model.variables.size());
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    auto it = named.find(model.variables[i].name);
    if (it == named.end()) throw Error("assignment is missing variable '" + model.variables[i].name + "'");
    values[i] = it->second;
  }
  return values;
}

}  // namespace ctt
