#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ctt/chains.hpp"
#include "ctt/instance.hpp"

namespace ctt {

struct GeneratorProfile {
  std::string name = "default";
  double feasible_lo = 0.6;  // share of shipments given at least one on-time chain
  double feasible_hi = 0.9;
  double through_probability = 0.5;
  int max_express_trains = 3;
  bool two_way_locals = true;  // false: only the local arcs a forward route can use
  double capacity_scale = 1.0;
};

inline std::vector<std::string> generator_profile_names() { return {"default", "compact", "tight"}; }

inline std::optional<GeneratorProfile> generator_profile(std::string_view name) {
  GeneratorProfile p;
  p.name = std::string(name);
  if (name == "default") return p;
  if (name == "compact") {
    p.through_probability = 0.35;
    p.max_express_trains = 1;
    p.two_way_locals = false;
    return p;
  }
  if (name == "tight") {
    p.capacity_scale = 0.4;
    return p;
  }
  return std::nullopt;
}

namespace detail {

// Draws are built from raw mt19937_64 output so that a seed gives the same
// instance on every standard library.
class GeneratorRng {
 public:
  explicit GeneratorRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  long integer(long lo, long hi) { return lo + static_cast<long>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool chance(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[static_cast<std::size_t>(integer(0, static_cast<long>(i - 1)))]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

/// Seeded random instance on a corridor of yards. Sidings hang off yards by
/// local arcs, shuttles link adjacent yards, through trains skip one or two
/// yards, and express trains run between logistics centers attached to yards
/// (block swaps at the intermediate centers). Travel times come from the
/// speed ladder: 50 km/h for regular trains, 160/120/80 km/h for express.
/// Express costs satisfy lambda * sum(C_m L_m) = sum(fixed + per_km * length)
/// per train. Due dates are drawn around each shipment's fastest chain so that
/// a profile-controlled share of shipments has an on-time chain.
inline Instance generate(std::uint64_t seed, int n_yards, int n_centers, int n_shipments,
                         const GeneratorProfile& profile = {}) {
  if (n_yards < 1 || n_centers < 1 || n_shipments < 1) throw Error("generator sizes must be >= 1");
  detail::GeneratorRng rng(seed);
  constexpr double regular_kmh = 50.0;
  constexpr double express_ladder_kmh[] = {160.0, 120.0, 80.0};

  std::vector<Node> nodes;
  std::vector<ServiceArc> arcs;
  std::vector<double> yard_pos(static_cast<std::size_t>(n_yards), 0.0);
  for (int i = 0; i < n_yards; ++i) {
    nodes.push_back({"Y" + std::to_string(i + 1), NodeKind::classification_yard, "yard " + std::to_string(i + 1)});
    if (i > 0) yard_pos[i] = yard_pos[i - 1] + static_cast<double>(rng.integer(80, 250));
  }
  auto yard = [](int i) { return "Y" + std::to_string(i + 1); };
  auto capacity = [&](long lo, long hi) { return std::round(static_cast<double>(rng.integer(lo, hi)) * profile.capacity_scale); };

  auto add_arc = [&](std::string id, std::string head, std::string tail, ArcClass klass, double length,
                     std::optional<double> cap, double kmh, std::optional<std::string> train = std::nullopt) {
    ServiceArc a;
    a.id = std::move(id);
    a.head = std::move(head);
    a.tail = std::move(tail);
    a.klass = klass;
    a.length_km = length;
    a.capacity = cap;
    a.travel_time_h = length / kmh;
    a.express_train_id = std::move(train);
    arcs.push_back(std::move(a));
  };
  int local_count = 0;
  auto local = [&](const std::string& head, const std::string& tail) {
    add_arc("L" + std::to_string(++local_count), head, tail, ArcClass::local,
            static_cast<double>(rng.integer(5, 30)), std::nullopt, regular_kmh);
  };

  // Sidings in corridor order; a siding can originate if something lies
  // downstream and terminate if something lies upstream.
  struct Siding {
    std::string id;
    int yard;
    bool originates;
    bool terminates;
  };
  std::vector<Siding> sidings;
  if (n_yards == 1) {
    sidings = {{"S1a", 0, true, false}, {"S1b", 0, false, true}};
  } else {
    for (int i = 0; i < n_yards; ++i) sidings.push_back({"S" + std::to_string(i + 1), i, i + 1 < n_yards, i > 0});
  }
  for (const auto& s : sidings) {
    nodes.push_back({s.id, NodeKind::enterprise_siding, "siding " + s.id});
    if (s.originates || profile.two_way_locals) local(s.id, yard(s.yard));
    if (s.terminates || profile.two_way_locals) local(yard(s.yard), s.id);
  }

  for (int i = 0; i + 1 < n_yards; ++i)
    add_arc("H" + std::to_string(i + 1), yard(i), yard(i + 1), ArcClass::shuttle,
            yard_pos[i + 1] - yard_pos[i], capacity(30, 120), regular_kmh);
  int through_count = 0;
  for (int i = 0; i + 2 < n_yards; ++i)
    for (int span = 2; span <= 3 && i + span < n_yards; ++span)
      if (rng.chance(profile.through_probability))
        add_arc("T" + std::to_string(++through_count), yard(i), yard(i + span), ArcClass::through,
                yard_pos[i + span] - yard_pos[i], capacity(40, 150), regular_kmh);

  // Logistics centers spread along the corridor, each attached to one yard.
  std::vector<int> center_yard(static_cast<std::size_t>(n_centers));
  for (int j = 0; j < n_centers; ++j) {
    center_yard[j] = n_centers == 1 ? 0 : static_cast<int>(std::lround(double(j) * (n_yards - 1) / (n_centers - 1)));
    nodes.push_back({"C" + std::to_string(j + 1), NodeKind::logistics_center, "center " + std::to_string(j + 1)});
  }
  auto center = [](int j) { return "C" + std::to_string(j + 1); };

  Instance inst;
  inst.lambda_cost = static_cast<double>(rng.integer(20, 100)) / 100.0;

  std::vector<ExpressTrain> trains;
  std::vector<bool> boards(static_cast<std::size_t>(n_centers), false), alights(boards);
  const int n_trains = n_centers >= 2 ? static_cast<int>(rng.integer(1, std::max(1, profile.max_express_trains))) : 0;
  for (int k = 0; k < n_trains; ++k) {
    int first = static_cast<int>(rng.integer(0, n_centers - 2));
    int last = static_cast<int>(rng.integer(first + 1, n_centers - 1));
    if (k == 0) {
      first = 0;
      last = n_centers - 1;
    }
    const std::string train = "E" + std::to_string(k + 1);
    const double kmh = express_ladder_kmh[rng.integer(0, 2)];
    const double cap = std::max(1.0, capacity(15, 60));
    for (int j = first; j < last; ++j) {
      const double length = std::max(5.0, yard_pos[center_yard[j + 1]] - yard_pos[center_yard[j]]) +
                            static_cast<double>(rng.integer(0, 20));
      add_arc(train + "." + std::to_string(j - first + 1), center(j), center(j + 1), ArcClass::express, length, cap,
              kmh, train);
    }
    boards[first] = true;
    alights[last] = true;
    trains.push_back({train, 0.0, 0.0, 0.0});
  }
  for (int j = 0; j < n_centers; ++j) {
    if (boards[j] || profile.two_way_locals) local(yard(center_yard[j]), center(j));
    if (alights[j] || profile.two_way_locals) local(center(j), yard(center_yard[j]));
  }

  TransferTable transfers;
  transfers.default_reclassification_h = static_cast<double>(rng.integer(4, 10));
  transfers.default_block_swap_h = static_cast<double>(rng.integer(1, 3));

  // Express costs: pick per-km, then fixed cost closes the identity exactly.
  {
    ServiceNetwork draft = with_derived_route_lengths(ServiceNetwork(nodes, arcs, transfers, trains));
    for (auto& t : trains) {
      double weighted = 0.0;
      double min_cap = std::numeric_limits<double>::infinity();
      for (const auto& a : arcs)
        if (a.express_train_id && *a.express_train_id == t.id) {
          weighted += *a.capacity * a.length_km;
          min_cap = std::min(min_cap, *a.capacity);
        }
      t.route_length_km = draft.find_express_train(t.id)->route_length_km;
      t.per_km_cost = std::floor(inst.lambda_cost * min_cap * rng.uniform(0.2, 0.8) * 100.0) / 100.0;
      t.fixed_cost = inst.lambda_cost * weighted - t.per_km_cost * t.route_length_km;
    }
  }
  inst.network = ServiceNetwork(std::move(nodes), std::move(arcs), transfers, std::move(trains));

  // Shipments between an originating siding and a terminating one downstream.
  std::vector<std::size_t> origins;
  for (std::size_t i = 0; i < sidings.size(); ++i)
    if (sidings[i].originates) origins.push_back(i);
  for (int g = 0; g < n_shipments; ++g) {
    const auto& o = sidings[origins[static_cast<std::size_t>(rng.integer(0, static_cast<long>(origins.size()) - 1))]];
    std::vector<std::size_t> dests;
    for (std::size_t i = 0; i < sidings.size(); ++i)
      if (sidings[i].terminates && sidings[i].yard >= o.yard && sidings[i].id != o.id) dests.push_back(i);
    const auto& d = sidings[dests[static_cast<std::size_t>(rng.integer(0, static_cast<long>(dests.size()) - 1))]];
    Shipment s;
    s.id = "G" + std::to_string(g + 1);
    s.origin = o.id;
    s.destination = d.id;
    s.volume_cars = static_cast<double>(rng.integer(5, 40));
    s.revenue_per_car = static_cast<double>(rng.integer(300, 1200));
    s.due_date_h = std::numeric_limits<double>::infinity();
    inst.shipments.push_back(std::move(s));
  }

  const double share = rng.uniform(profile.feasible_lo, profile.feasible_hi);
  const auto on_time = static_cast<std::size_t>(
      std::min<double>(n_shipments, std::ceil(share * static_cast<double>(n_shipments) - 1e-9)));
  std::vector<std::size_t> order(inst.shipments.size());
  for (std::size_t g = 0; g < order.size(); ++g) order[g] = g;
  rng.shuffle(order);
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto& s = inst.shipments[order[k]];
    double fastest = std::numeric_limits<double>::infinity();
    for (const auto& c : enumerate_chains(inst, order[k])) fastest = std::min(fastest, c.total_time_h);
    if (!std::isfinite(fastest)) fastest = 24.0;
    if (k < on_time)
      s.due_date_h = std::ceil(fastest * rng.uniform(1.1, 1.8) * 2.0) / 2.0;
    else
      s.due_date_h = std::max(0.5, std::floor(fastest * rng.uniform(0.4, 0.9) * 2.0) / 2.0);
  }
  return inst;
}

}  // namespace ctt
