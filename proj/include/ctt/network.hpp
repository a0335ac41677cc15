#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctt/common.hpp"

namespace ctt {

enum class NodeKind { classification_yard, logistics_center, enterprise_siding };

enum class ArcClass { local, shuttle, through, express };

enum class TransferKind { reclassification, block_swap };

inline std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::classification_yard: return "classification_yard";
    case NodeKind::logistics_center: return "logistics_center";
    case NodeKind::enterprise_siding: return "enterprise_siding";
  }
  return "?";
}

inline std::string_view to_string(ArcClass c) {
  switch (c) {
    case ArcClass::local: return "local";
    case ArcClass::shuttle: return "shuttle";
    case ArcClass::through: return "through";
    case ArcClass::express: return "express";
  }
  return "?";
}

inline std::string_view to_string(TransferKind k) {
  return k == TransferKind::block_swap ? "block_swap" : "reclassification";
}

inline std::optional<NodeKind> parse_node_kind(std::string_view s) {
  if (s == "classification_yard") return NodeKind::classification_yard;
  if (s == "logistics_center") return NodeKind::logistics_center;
  if (s == "enterprise_siding") return NodeKind::enterprise_siding;
  return std::nullopt;
}

inline std::optional<ArcClass> parse_arc_class(std::string_view s) {
  if (s == "local") return ArcClass::local;
  if (s == "shuttle") return ArcClass::shuttle;
  if (s == "through") return ArcClass::through;
  if (s == "express") return ArcClass::express;
  return std::nullopt;
}

struct Node {
  std::string id;
  NodeKind kind = NodeKind::classification_yard;
  std::string name;

  friend bool operator==(const Node&, const Node&) = default;
};

/// One directed train-service segment. `head` is the start node s_m and
/// `tail` the end node t_m. An empty `capacity` means unbounded, which is only
/// legal on regular (non-express) arcs: overflow beyond an express train's
/// capacity is assumed to ride a regular train.
struct ServiceArc {
  std::string id;
  std::string head;
  std::string tail;
  ArcClass klass = ArcClass::local;
  std::optional<double> capacity;  // cars
  double length_km = 0.0;
  double travel_time_h = 0.0;
  std::optional<std::string> express_train_id;

  bool capacitated() const noexcept { return capacity.has_value(); }

  friend bool operator==(const ServiceArc&, const ServiceArc&) = default;
};

struct TransferTable {
  double default_reclassification_h = 0.0;
  double default_block_swap_h = 0.0;
  // Keyed by (from arc id, to arc id).
  std::map<std::pair<std::string, std::string>, double> overrides;

  friend bool operator==(const TransferTable&, const TransferTable&) = default;
};

struct ExpressTrain {
  std::string id;
  double fixed_cost = 0.0;
  double per_km_cost = 0.0;
  double route_length_km = 0.0;

  friend bool operator==(const ExpressTrain&, const ExpressTrain&) = default;
};

class ServiceNetwork {
 public:
  ServiceNetwork() = default;

  ServiceNetwork(std::vector<Node> nodes, std::vector<ServiceArc> arcs, TransferTable transfers,
                 std::vector<ExpressTrain> express_trains)
      : nodes_(std::move(nodes)),
        arcs_(std::move(arcs)),
        transfers_(std::move(transfers)),
        express_trains_(std::move(express_trains)) {
    index();
  }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<ServiceArc>& arcs() const noexcept { return arcs_; }
  const TransferTable& transfers() const noexcept { return transfers_; }
  const std::vector<ExpressTrain>& express_trains() const noexcept { return express_trains_; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t arc_count() const noexcept { return arcs_.size(); }

  const Node& node(NodeIndex i) const { return nodes_.at(i.value); }
  const ServiceArc& arc(ArcIndex i) const { return arcs_.at(i.value); }

  std::optional<NodeIndex> find_node(std::string_view id) const {
    if (auto it = node_lookup_.find(std::string(id)); it != node_lookup_.end()) return it->second;
    return std::nullopt;
  }

  std::optional<ArcIndex> find_arc(std::string_view id) const {
    if (auto it = arc_lookup_.find(std::string(id)); it != arc_lookup_.end()) return it->second;
    return std::nullopt;
  }

  const ExpressTrain* find_express_train(std::string_view id) const {
    for (const auto& t : express_trains_)
      if (t.id == id) return &t;
    return nullptr;
  }

  // Endpoint accessors assume a network whose arcs reference existing nodes.
  NodeIndex head(ArcIndex m) const { return resolved(heads_.at(m.value), m); }
  NodeIndex tail(ArcIndex m) const { return resolved(tails_.at(m.value), m); }

  const std::vector<ArcIndex>& out_arcs(NodeIndex k) const { return out_.at(k.value); }
  const std::vector<ArcIndex>& in_arcs(NodeIndex k) const { return in_.at(k.value); }

  bool endpoints_resolved(ArcIndex m) const {
    return heads_.at(m.value).has_value() && tails_.at(m.value).has_value();
  }

  /// Arcs of one express train in route order; empty if they do not form a
  /// single head-to-tail sequence.
  std::vector<ArcIndex> express_route(std::string_view train_id) const;

  friend bool operator==(const ServiceNetwork& a, const ServiceNetwork& b) {
    return a.nodes_ == b.nodes_ && a.arcs_ == b.arcs_ && a.transfers_ == b.transfers_ &&
           a.express_trains_ == b.express_trains_;
  }

 private:
  NodeIndex resolved(const std::optional<NodeIndex>& n, ArcIndex m) const {
    if (!n) throw Error("arc '" + arcs_.at(m.value).id + "' references an unknown node");
    return *n;
  }

  void index() {
    for (std::size_t i = 0; i < nodes_.size(); ++i) node_lookup_.try_emplace(nodes_[i].id, NodeIndex{i});
    for (std::size_t i = 0; i < arcs_.size(); ++i) arc_lookup_.try_emplace(arcs_[i].id, ArcIndex{i});
    out_.assign(nodes_.size(), {});
    in_.assign(nodes_.size(), {});
    heads_.resize(arcs_.size());
    tails_.resize(arcs_.size());
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      heads_[i] = find_node(arcs_[i].head);
      tails_[i] = find_node(arcs_[i].tail);
      if (heads_[i]) out_[heads_[i]->value].push_back(ArcIndex{i});
      if (tails_[i]) in_[tails_[i]->value].push_back(ArcIndex{i});
    }
  }

  std::vector<Node> nodes_;
  std::vector<ServiceArc> arcs_;
  TransferTable transfers_;
  std::vector<ExpressTrain> express_trains_;

  std::unordered_map<std::string, NodeIndex> node_lookup_;
  std::unordered_map<std::string, ArcIndex> arc_lookup_;
  std::vector<std::optional<NodeIndex>> heads_;
  std::vector<std::optional<NodeIndex>> tails_;
  std::vector<std::vector<ArcIndex>> out_;
  std::vector<std::vector<ArcIndex>> in_;
};

inline std::vector<ArcIndex> ServiceNetwork::express_route(std::string_view train_id) const {
  std::vector<ArcIndex> members;
  for (std::size_t i = 0; i < arcs_.size(); ++i)
    if (arcs_[i].express_train_id && *arcs_[i].express_train_id == train_id) members.push_back(ArcIndex{i});
  if (members.empty()) return {};
  for (ArcIndex m : members)
    if (!endpoints_resolved(m)) return {};

  // The route starts at the unique member whose head is no member's tail.
  std::optional<ArcIndex> first;
  for (ArcIndex m : members) {
    bool fed = false;
    for (ArcIndex p : members) fed = fed || tail(p) == head(m);
    if (!fed) {
      if (first) return {};
      first = m;
    }
  }
  if (!first) return {};

  std::vector<ArcIndex> route{*first};
  std::set<std::size_t> seen_nodes{head(*first).value};
  std::set<std::size_t> used{first->value};
  while (route.size() < members.size()) {
    const NodeIndex at = tail(route.back());
    if (!seen_nodes.insert(at.value).second) return {};
    std::optional<ArcIndex> next;
    for (ArcIndex m : members) {
      if (used.contains(m.value) || head(m) != at) continue;
      if (next) return {};  // branching
      next = m;
    }
    if (!next) return {};
    route.push_back(*next);
    used.insert(next->value);
  }
  if (!seen_nodes.insert(tail(route.back()).value).second) return {};
  return route;
}

inline double express_route_length(const ServiceNetwork& net, std::string_view train_id) {
  double total = 0.0;
  for (const auto& a : net.arcs())
    if (a.express_train_id && *a.express_train_id == train_id) total += a.length_km;
  return total;
}

/// Returns a copy of `net` with every express train's route_length_km set to
/// the summed length of its arcs.
inline ServiceNetwork with_derived_route_lengths(const ServiceNetwork& net) {
  auto trains = net.express_trains();
  for (auto& t : trains) t.route_length_km = express_route_length(net, t.id);
  return ServiceNetwork(net.nodes(), net.arcs(), net.transfers(), std::move(trains));
}

/// Structural well-formedness. Returns an empty list iff every node, arc,
/// transfer and express-train invariant holds.
inline ViolationList validate_network(const ServiceNetwork& net) {
  ViolationList out;
  auto add = [&out](std::string entity, std::string rule, std::string msg) {
    out.push_back({std::move(entity), std::move(rule), std::move(msg)});
  };

  std::set<std::string> seen;
  for (const auto& n : net.nodes()) {
    if (n.id.empty()) add("node", "node-id", "node id is empty");
    if (!seen.insert(n.id).second) add(n.id, "node-id-unique", "duplicate node id");
  }

  seen.clear();
  std::set<std::string> train_ids;
  for (const auto& t : net.express_trains()) {
    if (!train_ids.insert(t.id).second) add(t.id, "train-id-unique", "duplicate express train id");
    if (!(t.fixed_cost >= 0.0) || !std::isfinite(t.fixed_cost))
      add(t.id, "train-cost", "fixed_cost must be finite and >= 0");
    if (!(t.per_km_cost >= 0.0) || !std::isfinite(t.per_km_cost))
      add(t.id, "train-cost", "per_km_cost must be finite and >= 0");
  }

  for (std::size_t i = 0; i < net.arc_count(); ++i) {
    const auto& a = net.arcs()[i];
    if (!seen.insert(a.id).second) add(a.id, "arc-id-unique", "duplicate arc id");
    const bool head_ok = net.find_node(a.head).has_value();
    const bool tail_ok = net.find_node(a.tail).has_value();
    if (!head_ok) add(a.id, "arc-endpoint", "head node '" + a.head + "' does not exist");
    if (!tail_ok) add(a.id, "arc-endpoint", "tail node '" + a.tail + "' does not exist");
    if (a.head == a.tail) add(a.id, "arc-loop", "head and tail coincide");
    if (!(a.length_km > 0.0) || !std::isfinite(a.length_km)) add(a.id, "arc-length", "length must be finite and > 0");
    if (!(a.travel_time_h > 0.0) || !std::isfinite(a.travel_time_h))
      add(a.id, "arc-time", "travel time must be finite and > 0");
    if (a.capacity && (!(*a.capacity >= 0.0) || !std::isfinite(*a.capacity)))
      add(a.id, "arc-capacity", "capacity must be finite and >= 0");

    const bool is_express = a.klass == ArcClass::express;
    if (is_express != a.express_train_id.has_value())
      add(a.id, "express-train-id", "express_train_id must be present exactly on express arcs");
    if (is_express && !a.capacity) add(a.id, "express-capacity", "express arcs must be capacitated");
    if (a.express_train_id && !train_ids.contains(*a.express_train_id))
      add(a.id, "express-train-ref", "unknown express train '" + *a.express_train_id + "'");
  }

  for (const auto& t : net.express_trains()) {
    bool has_arcs = false;
    for (const auto& a : net.arcs()) has_arcs = has_arcs || (a.express_train_id && *a.express_train_id == t.id);
    if (!has_arcs) {
      add(t.id, "train-route", "express train has no arcs");
      continue;
    }
    if (net.express_route(t.id).empty())
      add(t.id, "train-route", "arcs do not form one connected simple head-to-tail sequence");
    const double length = express_route_length(net, t.id);
    if (std::abs(length - t.route_length_km) > 1e-9)
      add(t.id, "train-length", "route_length " + std::to_string(t.route_length_km) +
                                    " km differs from summed arc length " + std::to_string(length) + " km");
  }

  const auto& tt = net.transfers();
  if (!(tt.default_reclassification_h >= 0.0) || !std::isfinite(tt.default_reclassification_h))
    add("transfers", "transfer-time", "default reclassification time must be finite and >= 0");
  if (!(tt.default_block_swap_h >= 0.0) || !std::isfinite(tt.default_block_swap_h))
    add("transfers", "transfer-time", "default block swap time must be finite and >= 0");
  for (const auto& [key, hours] : tt.overrides) {
    const std::string entity = key.first + "->" + key.second;
    const auto m = net.find_arc(key.first);
    const auto n = net.find_arc(key.second);
    if (!m || !n) {
      add(entity, "transfer-ref", "transfer override references an unknown arc");
      continue;
    }
    if (net.arc(*m).tail != net.arc(*n).head)
      add(entity, "transfer-adjacency", "transfer override keys a non-adjacent arc pair");
    if (!(hours >= 0.0) || !std::isfinite(hours)) add(entity, "transfer-time", "transfer time must be finite and >= 0");
  }
  return out;
}

/// Handling event when a car moves from arc m onto arc n at their junction:
/// a block swap if both arcs belong to the same express train and the
/// junction is a logistics center, a reclassification otherwise.
inline TransferKind transfer_kind(const ServiceNetwork& net, ArcIndex m, ArcIndex n) {
  if (net.tail(m) != net.head(n))
    throw MalformedChainError("arcs '" + net.arc(m).id + "' and '" + net.arc(n).id + "' are not adjacent");
  const auto& am = net.arc(m);
  const auto& an = net.arc(n);
  const bool same_train = am.express_train_id && an.express_train_id && *am.express_train_id == *an.express_train_id;
  if (same_train && net.node(net.tail(m)).kind == NodeKind::logistics_center) return TransferKind::block_swap;
  return TransferKind::reclassification;
}

/// tau_mn: the explicit table entry if keyed, else the default for the
/// transfer kind.
inline double transfer_time(const ServiceNetwork& net, ArcIndex m, ArcIndex n) {
  const TransferKind kind = transfer_kind(net, m, n);
  const auto& tt = net.transfers();
  if (auto it = tt.overrides.find({net.arc(m).id, net.arc(n).id}); it != tt.overrides.end()) return it->second;
  return kind == TransferKind::block_swap ? tt.default_block_swap_h : tt.default_reclassification_h;
}

}  // namespace ctt
