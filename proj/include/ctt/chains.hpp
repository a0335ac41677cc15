#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "ctt/instance.hpp"

namespace ctt {

inline constexpr int kDefaultMaxArcs = 8;

/// A service chain (transportation strategy): arcs from a shipment's origin to
/// its destination, with the total time spent on arcs and at junctions.
struct ServiceChain {
  std::size_t shipment = 0;
  std::vector<ArcIndex> arcs;
  double total_time_h = 0.0;
  int reclassifications = 0;
  int block_swaps = 0;

  friend bool operator==(const ServiceChain&, const ServiceChain&) = default;
};

inline std::vector<std::string> arc_ids(const ServiceNetwork& net, std::span<const ArcIndex> arcs) {
  std::vector<std::string> ids;
  ids.reserve(arcs.size());
  for (ArcIndex m : arcs) ids.push_back(net.arc(m).id);
  return ids;
}

inline std::string format_chain(const ServiceNetwork& net, std::span<const ArcIndex> arcs) {
  std::string out;
  for (ArcIndex m : arcs) {
    if (!out.empty()) out += " -> ";
    out += net.arc(m).id;
  }
  return out;
}

/// Lexicographic order on the arc-id sequences of two chains.
inline bool chain_id_less(const ServiceNetwork& net, std::span<const ArcIndex> a, std::span<const ArcIndex> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [&net](ArcIndex x, ArcIndex y) {
    return net.arc(x).id < net.arc(y).id;
  });
}

/// Fills in time and handling counts for an arc sequence. Every junction
/// between consecutive arcs is one handling event whose kind comes from
/// transfer_kind; arriving at the destination adds none.
inline ServiceChain chain_stats(const ServiceNetwork& net, std::size_t shipment, std::span<const ArcIndex> arcs) {
  ServiceChain c;
  c.shipment = shipment;
  c.arcs.assign(arcs.begin(), arcs.end());
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    c.total_time_h += net.arc(arcs[k]).travel_time_h;
    if (k == 0) continue;
    const ArcIndex m = arcs[k - 1];
    const ArcIndex n = arcs[k];
    const TransferKind kind = transfer_kind(net, m, n);  // throws on a gap
    c.total_time_h += transfer_time(net, m, n);
    if (kind == TransferKind::block_swap)
      ++c.block_swaps;
    else
      ++c.reclassifications;
  }
  return c;
}

/// As above, but also checks that the chain runs from the shipment's origin
/// to its destination.
inline ServiceChain chain_stats(const Instance& inst, std::size_t shipment, std::span<const ArcIndex> arcs) {
  const auto& net = inst.network;
  const auto& s = inst.shipments.at(shipment);
  if (arcs.empty()) throw MalformedChainError("empty chain for shipment '" + s.id + "'");
  if (net.arc(arcs.front()).head != s.origin)
    throw MalformedChainError("chain for '" + s.id + "' does not start at origin " + s.origin);
  if (net.arc(arcs.back()).tail != s.destination)
    throw MalformedChainError("chain for '" + s.id + "' does not end at destination " + s.destination);
  return chain_stats(net, shipment, arcs);
}

namespace detail {

struct ChainSearch {
  const ServiceNetwork& net;
  std::size_t shipment;
  NodeIndex destination;
  double due_date;
  std::size_t max_arcs;

  std::vector<ArcIndex> path;
  std::vector<char> on_path;  // per node
  std::vector<ServiceChain> found;

  void extend(NodeIndex at, double elapsed) {
    for (ArcIndex n : net.out_arcs(at)) {
      const NodeIndex next = net.tail(n);
      if (on_path[next.value]) continue;
      double t = elapsed + net.arc(n).travel_time_h;
      if (!path.empty()) t += transfer_time(net, path.back(), n);
      if (t > due_date) continue;  // times are positive, so no extension can recover

      path.push_back(n);
      if (next == destination) {
        found.push_back(chain_stats(net, shipment, path));
      } else if (path.size() < max_arcs) {
        on_path[next.value] = 1;
        extend(next, t);
        on_path[next.value] = 0;
      }
      path.pop_back();
    }
  }
};

}  // namespace detail

/// All simple chains from the shipment's origin to its destination with at
/// most `max_arcs` arcs whose total time meets the due date. Sorted
/// lexicographically by arc-id sequence.
inline std::vector<ServiceChain> enumerate_chains(const ServiceNetwork& net, const Shipment& s, std::size_t shipment,
                                                  int max_arcs = kDefaultMaxArcs) {
  if (max_arcs < 1) throw Error("max_arcs must be >= 1");
  const auto origin = net.find_node(s.origin);
  const auto destination = net.find_node(s.destination);
  if (!origin || !destination) throw Error("shipment '" + s.id + "' references an unknown node");
  if (*origin == *destination) return {};

  detail::ChainSearch search{net, shipment, *destination, s.due_date_h, static_cast<std::size_t>(max_arcs), {}, {}, {}};
  search.on_path.assign(net.node_count(), 0);
  search.on_path[origin->value] = 1;
  search.extend(*origin, 0.0);

  std::sort(search.found.begin(), search.found.end(),
            [&net](const ServiceChain& a, const ServiceChain& b) { return chain_id_less(net, a.arcs, b.arcs); });
  return std::move(search.found);
}

inline std::vector<ServiceChain> enumerate_chains(const Instance& inst, std::size_t shipment,
                                                  int max_arcs = kDefaultMaxArcs) {
  return enumerate_chains(inst.network, inst.shipments.at(shipment), shipment, max_arcs);
}

}  // namespace ctt
