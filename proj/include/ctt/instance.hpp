#pragma once

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "ctt/network.hpp"

namespace ctt {

/// An origin-destination demand of `volume_cars` cars paying
/// `revenue_per_car` each, to be delivered within `due_date_h` hours.
struct Shipment {
  std::string id;
  std::string origin;
  std::string destination;
  double volume_cars = 0.0;
  double revenue_per_car = 0.0;
  double due_date_h = 0.0;

  double full_value() const noexcept { return revenue_per_car * volume_cars; }

  friend bool operator==(const Shipment&, const Shipment&) = default;
};

struct Instance {
  ServiceNetwork network;
  std::vector<Shipment> shipments;
  double lambda_cost = 0.0;  // express cost per car-km
  double big_m = 1e6;        // M linking arc use to a positive admitted fraction

  friend bool operator==(const Instance&, const Instance&) = default;
};

inline ViolationList validate_instance(const Instance& inst) {
  ViolationList out = validate_network(inst.network);
  auto add = [&out](std::string entity, std::string rule, std::string msg) {
    out.push_back({std::move(entity), std::move(rule), std::move(msg)});
  };

  if (!(inst.lambda_cost >= 0.0) || !std::isfinite(inst.lambda_cost))
    add("instance", "lambda", "lambda must be finite and >= 0");
  if (!(inst.big_m >= 1.0) || !std::isfinite(inst.big_m)) add("instance", "big-m", "big_m must be finite and >= 1");

  std::set<std::string> ids;
  for (const auto& s : inst.shipments) {
    if (!ids.insert(s.id).second) add(s.id, "shipment-id-unique", "duplicate shipment id");
    if (!inst.network.find_node(s.origin)) add(s.id, "shipment-endpoint", "origin '" + s.origin + "' does not exist");
    if (!inst.network.find_node(s.destination))
      add(s.id, "shipment-endpoint", "destination '" + s.destination + "' does not exist");
    if (s.origin == s.destination) add(s.id, "shipment-od", "origin equals destination");
    if (!(s.volume_cars > 0.0) || !std::isfinite(s.volume_cars)) add(s.id, "shipment-volume", "volume must be > 0");
    if (!(s.revenue_per_car >= 0.0) || !std::isfinite(s.revenue_per_car))
      add(s.id, "shipment-revenue", "revenue per car must be >= 0");
    if (!(s.due_date_h > 0.0) || !std::isfinite(s.due_date_h)) add(s.id, "shipment-due-date", "due date must be > 0");
  }
  return out;
}

inline void require_valid(const Instance& inst) {
  if (auto v = validate_instance(inst); !v.empty()) throw InvalidInstanceError(std::move(v));
}

/// The two parameterizations of the scheduled express-train operating cost:
/// per car-km over express arc capacity, and per train (fixed plus per km).
/// They are supposed to agree; `discrepancy` is arc_side - train_side.
struct ExpressCostReport {
  double arc_side = 0.0;
  double train_side = 0.0;
  double discrepancy = 0.0;
};

inline ExpressCostReport fixed_express_cost(const Instance& inst) {
  ExpressCostReport r;
  for (const auto& a : inst.network.arcs())
    if (a.klass == ArcClass::express && a.capacity) r.arc_side += *a.capacity * a.length_km;
  r.arc_side *= inst.lambda_cost;
  for (const auto& t : inst.network.express_trains()) r.train_side += t.fixed_cost + t.per_km_cost * t.route_length_km;
  r.discrepancy = r.arc_side - r.train_side;
  return r;
}

inline std::optional<std::size_t> find_shipment(const Instance& inst, std::string_view id) {
  for (std::size_t g = 0; g < inst.shipments.size(); ++g)
    if (inst.shipments[g].id == id) return g;
  return std::nullopt;
}

}  // namespace ctt
