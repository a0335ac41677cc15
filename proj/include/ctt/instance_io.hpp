#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ctt/instance.hpp"
#include "ctt/solver.hpp"

// JSON instance and solution files. Field names are the stable interface.

namespace ctt {

using Json = nlohmann::json;

/// A document that does not match the instance or solution schema. `pointer`
/// is the JSON pointer of the offending value.
class InstanceFormatError : public Error {
 public:
  InstanceFormatError(std::string pointer, const std::string& what)
      : Error(pointer + ": " + what), pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

namespace detail {

class SchemaReader {
 public:
  SchemaReader(const Json& j, std::string ptr) : j_(j), ptr_(std::move(ptr)) {}

  const std::string& pointer() const noexcept { return ptr_; }

  [[noreturn]] void fail(const std::string& what) const { throw InstanceFormatError(ptr_.empty() ? "/" : ptr_, what); }

  void expect_object(std::initializer_list<std::string_view> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    for (const auto& [key, _] : j_.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || key == a;
      if (!ok) SchemaReader(j_[key], child_ptr(key)).fail("unknown key '" + key + "'");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  SchemaReader at(const std::string& key) const {
    if (!j_.contains(key)) fail("missing required key '" + key + "'");
    return SchemaReader(j_.at(key), child_ptr(key));
  }

  std::vector<SchemaReader> array() const {
    if (!j_.is_array()) fail("expected an array");
    std::vector<SchemaReader> out;
    for (std::size_t i = 0; i < j_.size(); ++i) out.emplace_back(j_[i], ptr_ + "/" + std::to_string(i));
    return out;
  }

  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }

  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("must be > 0");
    return v;
  }

  double non_negative() const {
    const double v = number();
    if (!(v >= 0.0)) fail("must be >= 0");
    return v;
  }

  const Json& raw() const noexcept { return j_; }

 private:
  std::string child_ptr(const std::string& key) const {
    std::string escaped;
    for (char c : key) {
      if (c == '~') escaped += "~0";
      else if (c == '/') escaped += "~1";
      else escaped += c;
    }
    return ptr_ + "/" + escaped;
  }

  const Json& j_;
  std::string ptr_;
};

}  // namespace detail

inline Json instance_to_json(const Instance& inst) {
  const auto& net = inst.network;
  Json doc;
  doc["nodes"] = Json::array();
  for (const auto& n : net.nodes())
    doc["nodes"].push_back({{"id", n.id}, {"kind", std::string(to_string(n.kind))}, {"name", n.name}});

  doc["arcs"] = Json::array();
  for (const auto& a : net.arcs()) {
    Json ja = {{"id", a.id},
               {"head", a.head},
               {"tail", a.tail},
               {"class", std::string(to_string(a.klass))},
               {"length_km", a.length_km},
               {"travel_time_h", a.travel_time_h}};
    ja["capacity"] = a.capacity ? Json(*a.capacity) : Json("unbounded");
    if (a.express_train_id) ja["express_train_id"] = *a.express_train_id;
    doc["arcs"].push_back(std::move(ja));
  }

  const auto& tt = net.transfers();
  Json overrides = Json::array();
  for (const auto& [key, hours] : tt.overrides)
    overrides.push_back({{"from_arc", key.first}, {"to_arc", key.second}, {"transfer_h", hours}});
  doc["transfers"] = {
      {"defaults", {{"reclassification_h", tt.default_reclassification_h}, {"block_swap_h", tt.default_block_swap_h}}},
      {"overrides", std::move(overrides)}};

  doc["express_trains"] = Json::array();
  for (const auto& t : net.express_trains())
    doc["express_trains"].push_back({{"id", t.id}, {"fixed_cost", t.fixed_cost}, {"per_km_cost", t.per_km_cost}});

  doc["shipments"] = Json::array();
  for (const auto& s : inst.shipments)
    doc["shipments"].push_back({{"id", s.id},
                                {"origin", s.origin},
                                {"destination", s.destination},
                                {"volume_cars", s.volume_cars},
                                {"revenue_per_car", s.revenue_per_car},
                                {"due_date_h", s.due_date_h}});

  doc["params"] = {{"lambda", inst.lambda_cost}, {"big_m", inst.big_m}};
  return doc;
}

/// Parses an instance document. Schema violations throw InstanceFormatError;
/// semantic checks (dangling references, duplicate ids, ...) are left to
/// validate_instance. Express train route lengths are derived from arcs.
inline Instance instance_from_json(const Json& doc) {
  using detail::SchemaReader;
  const SchemaReader root(doc, "");
  root.expect_object({"nodes", "arcs", "transfers", "express_trains", "shipments", "params"});

  std::vector<Node> nodes;
  for (const auto& jn : root.at("nodes").array()) {
    jn.expect_object({"id", "kind", "name"});
    Node n;
    n.id = jn.at("id").str();
    const auto kind_reader = jn.at("kind");
    const auto kind = parse_node_kind(kind_reader.str());
    if (!kind) kind_reader.fail("unknown node kind '" + kind_reader.str() + "'");
    n.kind = *kind;
    n.name = jn.has("name") ? jn.at("name").str() : n.id;
    nodes.push_back(std::move(n));
  }

  std::vector<ServiceArc> arcs;
  for (const auto& ja : root.at("arcs").array()) {
    ja.expect_object({"id", "head", "tail", "class", "capacity", "length_km", "travel_time_h", "express_train_id"});
    ServiceArc a;
    a.id = ja.at("id").str();
    a.head = ja.at("head").str();
    a.tail = ja.at("tail").str();
    const auto class_reader = ja.at("class");
    const auto klass = parse_arc_class(class_reader.str());
    if (!klass) class_reader.fail("unknown arc class '" + class_reader.str() + "'");
    a.klass = *klass;
    const auto cap = ja.at("capacity");
    if (cap.raw().is_string()) {
      if (cap.str() != "unbounded") cap.fail("capacity must be a number or \"unbounded\"");
    } else {
      a.capacity = cap.non_negative();
    }
    a.length_km = ja.at("length_km").positive();
    a.travel_time_h = ja.at("travel_time_h").positive();
    if (ja.has("express_train_id")) a.express_train_id = ja.at("express_train_id").str();
    arcs.push_back(std::move(a));
  }

  TransferTable tt;
  {
    const auto jt = root.at("transfers");
    jt.expect_object({"defaults", "overrides"});
    const auto jd = jt.at("defaults");
    jd.expect_object({"reclassification_h", "block_swap_h"});
    tt.default_reclassification_h = jd.at("reclassification_h").non_negative();
    tt.default_block_swap_h = jd.at("block_swap_h").non_negative();
    if (jt.has("overrides")) {
      for (const auto& jo : jt.at("overrides").array()) {
        jo.expect_object({"from_arc", "to_arc", "transfer_h"});
        const auto key = std::pair{jo.at("from_arc").str(), jo.at("to_arc").str()};
        if (tt.overrides.contains(key)) jo.fail("duplicate transfer override");
        tt.overrides[key] = jo.at("transfer_h").non_negative();
      }
    }
  }

  std::vector<ExpressTrain> trains;
  if (root.has("express_trains")) {
    for (const auto& jx : root.at("express_trains").array()) {
      jx.expect_object({"id", "fixed_cost", "per_km_cost"});
      ExpressTrain t;
      t.id = jx.at("id").str();
      t.fixed_cost = jx.at("fixed_cost").non_negative();
      t.per_km_cost = jx.at("per_km_cost").non_negative();
      trains.push_back(std::move(t));
    }
  }

  Instance inst;
  inst.network = with_derived_route_lengths(ServiceNetwork(std::move(nodes), std::move(arcs), tt, std::move(trains)));

  for (const auto& js : root.at("shipments").array()) {
    js.expect_object({"id", "origin", "destination", "volume_cars", "revenue_per_car", "due_date_h"});
    Shipment s;
    s.id = js.at("id").str();
    s.origin = js.at("origin").str();
    s.destination = js.at("destination").str();
    s.volume_cars = js.at("volume_cars").positive();
    s.revenue_per_car = js.at("revenue_per_car").non_negative();
    s.due_date_h = js.at("due_date_h").non_negative();
    inst.shipments.push_back(std::move(s));
  }

  const auto jp = root.at("params");
  jp.expect_object({"lambda", "big_m"});
  inst.lambda_cost = jp.at("lambda").non_negative();
  if (jp.has("big_m")) {
    const auto bm = jp.at("big_m");
    inst.big_m = bm.positive();
  }
  return inst;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InstanceFormatError("/", std::string("not valid JSON: ") + e.what());
  }
}

inline void write_json_file(const Json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline Instance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

inline void save_instance(const Instance& inst, const std::string& path) {
  write_json_file(instance_to_json(inst), path);
}

inline std::string dump_instance(const Instance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

inline Json solution_to_json(const Instance& inst, const Solution& sol) {
  const auto& net = inst.network;
  Json doc;
  doc["shipments"] = Json::array();
  for (std::size_t g = 0; g < sol.shipments.size(); ++g) {
    const auto& s = inst.shipments[g];
    const auto& d = sol.shipments[g];
    Json js = {{"id", s.id},
               {"xi", d.xi},
               {"admitted_cars", s.volume_cars * d.xi},
               {"unadmitted_cars", s.volume_cars - s.volume_cars * d.xi},
               {"due_date_h", s.due_date_h}};
    if (d.routed()) {
      js["chain"] = arc_ids(net, d.chain->arcs);
      js["time_used_h"] = d.chain->total_time_h;
    } else {
      js["chain"] = "rejected";
      js["time_used_h"] = 0.0;
    }
    doc["shipments"].push_back(std::move(js));
  }

  const auto flows = arc_flows(inst, sol);
  doc["arcs"] = Json::array();
  for (std::size_t m = 0; m < net.arc_count(); ++m) {
    const auto& a = net.arcs()[m];
    doc["arcs"].push_back({{"id", a.id},
                           {"flow_cars", flows[m]},
                           {"capacity", a.capacity ? Json(*a.capacity) : Json("unbounded")}});
  }

  const auto cost = fixed_express_cost(inst);
  doc["objective"] = {{"gross", sol.objective_gross},
                      {"express_constant", sol.constant_offset},
                      {"net", sol.objective_net},
                      {"eq10_lhs", cost.arc_side},
                      {"eq10_rhs", cost.train_side}};
  doc["solver"] = {{"status", std::string(to_string(sol.status))},
                   {"bound_gap", sol.bound_gap},
                   {"nodes_explored", sol.nodes_explored}};
  return doc;
}

/// Reads a solution document back against its instance. Chains are
/// re-derived from arc ids, so a tampered time or count field cannot hide a
/// due-date violation.
inline Solution solution_from_json(const Instance& inst, const Json& doc) {
  using detail::SchemaReader;
  const SchemaReader root(doc, "");
  root.expect_object({"shipments", "arcs", "objective", "solver"});

  Solution sol;
  sol.shipments.resize(inst.shipments.size());
  std::vector<char> seen(inst.shipments.size(), 0);
  for (const auto& js : root.at("shipments").array()) {
    js.expect_object({"id", "chain", "xi", "admitted_cars", "unadmitted_cars", "time_used_h", "due_date_h"});
    const auto id_reader = js.at("id");
    const auto g = find_shipment(inst, id_reader.str());
    if (!g) id_reader.fail("unknown shipment '" + id_reader.str() + "'");
    if (seen[*g]) id_reader.fail("shipment listed twice");
    seen[*g] = 1;
    auto& d = sol.shipments[*g];
    d.xi = js.at("xi").number();
    const auto chain = js.at("chain");
    if (chain.raw().is_string()) {
      if (chain.str() != "rejected") chain.fail("chain must be an array of arc ids or \"rejected\"");
    } else {
      std::vector<ArcIndex> arcs;
      for (const auto& ja : chain.array()) {
        const auto m = inst.network.find_arc(ja.str());
        if (!m) ja.fail("unknown arc '" + ja.str() + "'");
        arcs.push_back(*m);
      }
      try {
        d.chain = chain_stats(inst, *g, arcs);
      } catch (const MalformedChainError& e) {
        chain.fail(e.what());
      }
    }
  }
  for (std::size_t g = 0; g < seen.size(); ++g)
    if (!seen[g]) root.at("shipments").fail("shipment '" + inst.shipments[g].id + "' missing");

  const auto jo = root.at("objective");
  jo.expect_object({"gross", "express_constant", "net", "eq10_lhs", "eq10_rhs"});
  sol.objective_gross = jo.at("gross").number();
  sol.constant_offset = jo.at("express_constant").number();
  sol.objective_net = jo.at("net").number();

  const auto jsv = root.at("solver");
  jsv.expect_object({"status", "bound_gap", "nodes_explored"});
  const auto st = jsv.at("status");
  const auto status = parse_solve_status(st.str());
  if (!status) st.fail("unknown status '" + st.str() + "'");
  sol.status = *status;
  sol.bound_gap = jsv.at("bound_gap").non_negative();
  sol.nodes_explored = static_cast<std::size_t>(jsv.at("nodes_explored").non_negative());
  return sol;
}

inline void save_solution(const Instance& inst, const Solution& sol, const std::string& path) {
  write_json_file(solution_to_json(inst, sol), path);
}

inline Solution load_solution(const Instance& inst, const std::string& path) {
  return solution_from_json(inst, read_json_file(path));
}

}  // namespace ctt
