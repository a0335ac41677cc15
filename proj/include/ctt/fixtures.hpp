#pragma once

#include <string>
#include <vector>

#include "ctt/instance.hpp"

// The mixed scheduled/unscheduled service network with yards 1'..6', logistics
// centers 1'', 3'', 5'', 6'', enterprise sidings s, s', t and 23 service arcs.
//
// Arc numbering and the adjacencies used by the worked strategies are fixed;
// lengths, capacities, costs and demands are our own parameterization.
// Regular trains run at 50 km/h, the express at 160 km/h. Defaults: 6 h per
// reclassification, 1.5 h per block swap.

namespace ctt {

enum class MixedNetworkVariant {
  generous,  // every worked strategy meets its due date; capacity is ample
  tight,     // Arc3 cannot carry both shipments; the detours are narrow
};

inline Instance mixed_network_instance(MixedNetworkVariant variant = MixedNetworkVariant::generous) {
  const bool tight = variant == MixedNetworkVariant::tight;
  constexpr double regular_kmh = 50.0;
  constexpr double express_kmh = 160.0;

  using K = NodeKind;
  std::vector<Node> nodes = {
      {"1'", K::classification_yard, "yard 1'"},      {"2'", K::classification_yard, "yard 2'"},
      {"3'", K::classification_yard, "yard 3'"},      {"4'", K::classification_yard, "yard 4'"},
      {"5'", K::classification_yard, "yard 5'"},      {"6'", K::classification_yard, "yard 6'"},
      {"1''", K::logistics_center, "center 1''"},     {"3''", K::logistics_center, "center 3''"},
      {"5''", K::logistics_center, "center 5''"},     {"6''", K::logistics_center, "center 6''"},
      {"s", K::enterprise_siding, "enterprise s"},    {"s'", K::enterprise_siding, "enterprise s'"},
      {"t", K::enterprise_siding, "enterprise t"},
  };

  const double express_cap = tight ? 10.0 : 40.0;
  const double through_cap = tight ? 40.0 : 120.0;
  const double detour_cap = tight ? 15.0 : 80.0;

  struct Spec {
    const char* id;
    const char* head;
    const char* tail;
    ArcClass klass;
    double length_km;
    std::optional<double> capacity;
  };
  using C = ArcClass;
  const std::optional<double> unbounded;
  const std::vector<Spec> specs = {
      {"Arc1", "1'", "3'", C::through, 300, through_cap},
      {"Arc2", "4'", "3'", C::shuttle, 140, 80.0},
      {"Arc3", "3'", "6'", C::through, 350, through_cap},
      {"Arc4", "s", "1'", C::local, 20, unbounded},
      {"Arc5", "1'", "2'", C::shuttle, 150, 80.0},
      {"Arc6", "2'", "3'", C::shuttle, 160, 80.0},
      {"Arc7", "3'", "5'", C::shuttle, 170, detour_cap},
      {"Arc8", "5'", "6'", C::shuttle, 190, detour_cap},
      {"Arc9", "6'", "t", C::local, 25, unbounded},
      {"Arc10", "s", "1''", C::local, 25, unbounded},
      {"Arc11", "1''", "3''", C::express, 310, express_cap},
      {"Arc12", "3''", "5''", C::express, 175, express_cap},
      {"Arc13", "5''", "6''", C::express, 195, express_cap},
      {"Arc14", "6''", "t", C::local, 20, unbounded},
      {"Arc15", "1'", "1''", C::local, 10, unbounded},
      {"Arc16", "1''", "1'", C::local, 10, unbounded},
      {"Arc17", "3''", "3'", C::local, 10, unbounded},
      {"Arc18", "3'", "3''", C::local, 10, unbounded},
      {"Arc19", "5'", "5''", C::local, 10, unbounded},
      {"Arc20", "5''", "5'", C::local, 10, unbounded},
      {"Arc21", "6'", "6''", C::local, 10, unbounded},
      {"Arc22", "6''", "6'", C::local, 10, unbounded},
      {"Arc23", "s'", "4'", C::local, 30, unbounded},
  };

  std::vector<ServiceArc> arcs;
  for (const auto& s : specs) {
    ServiceArc a;
    a.id = s.id;
    a.head = s.head;
    a.tail = s.tail;
    a.klass = s.klass;
    a.length_km = s.length_km;
    a.capacity = s.capacity;
    a.travel_time_h = s.length_km / (s.klass == C::express ? express_kmh : regular_kmh);
    if (s.klass == C::express) a.express_train_id = "E1";
    arcs.push_back(std::move(a));
  }

  TransferTable transfers;
  transfers.default_reclassification_h = 6.0;
  transfers.default_block_swap_h = 1.5;

  Instance inst;
  inst.lambda_cost = 0.5;
  // Per-train costs chosen so both cost parameterizations agree:
  // lambda * C * 680 km = fixed + per_km * 680 km.
  ExpressTrain e1;
  e1.id = "E1";
  e1.per_km_cost = tight ? 4.0 : 15.0;
  e1.fixed_cost = inst.lambda_cost * express_cap * 680.0 - e1.per_km_cost * 680.0;

  inst.network = with_derived_route_lengths(ServiceNetwork(std::move(nodes), std::move(arcs), transfers, {e1}));
  inst.shipments = {
      {"s-t", "s", "t", 30.0, 900.0, 72.0},
      {"s'-t", "s'", "t", 25.0, 800.0, 72.0},
  };
  return inst;
}

}  // namespace ctt
