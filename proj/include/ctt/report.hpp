#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "ctt/chains.hpp"
#include "ctt/solver.hpp"

namespace ctt {

namespace detail {

inline std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Money printed from integer micro-units, so the printed net is exactly the
// printed gross minus the printed constant.
inline std::int64_t to_micros(double v) { return std::llround(v * 1e6); }

inline std::string format_micros(std::int64_t micros) {
  const bool neg = micros < 0;
  const std::uint64_t mag = neg ? static_cast<std::uint64_t>(-(micros + 1)) + 1 : static_cast<std::uint64_t>(micros);
  return fmt("%s%llu.%06llu", neg ? "-" : "", static_cast<unsigned long long>(mag / 1000000),
             static_cast<unsigned long long>(mag % 1000000));
}

}  // namespace detail

struct ObjectiveLines {
  std::string gross;
  std::string constant;
  std::string net;
};

inline ObjectiveLines format_objective(const Solution& sol) {
  const auto g = detail::to_micros(sol.objective_gross);
  const auto c = detail::to_micros(sol.constant_offset);
  return {detail::format_micros(g), detail::format_micros(c), detail::format_micros(g - c)};
}

inline std::string format_chain_table(const Instance& inst, std::size_t shipment,
                                      const std::vector<ServiceChain>& chains) {
  using detail::fmt;
  const auto& s = inst.shipments.at(shipment);
  std::string out = fmt("shipment %s  %s -> %s  due %.3f h  (%zu chain(s))\n", s.id.c_str(), s.origin.c_str(),
                        s.destination.c_str(), s.due_date_h, chains.size());
  out += fmt("  %4s  %10s  %8s  %6s  %s\n", "#", "time_h", "reclass", "swaps", "chain");
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const auto& c = chains[i];
    out += fmt("  %4zu  %10.4f  %8d  %6d  ", i + 1, c.total_time_h, c.reclassifications, c.block_swaps);
    out += format_chain(inst.network, c.arcs) + "\n";
  }
  return out;
}

inline std::string format_report(const Instance& inst, const Solution& sol) {
  using detail::fmt;
  const auto& net = inst.network;
  std::string out = fmt("status: %s  nodes: %zu  bound gap: %.9g\n\n", std::string(to_string(sol.status)).c_str(),
                        sol.nodes_explored, sol.bound_gap);

  out += "shipments\n";
  out += fmt("  %-12s %8s %10s %10s %10s %10s  %s\n", "id", "xi", "admitted", "time_h", "due_h", "slack_h", "chain");
  for (std::size_t g = 0; g < sol.shipments.size(); ++g) {
    const auto& s = inst.shipments[g];
    const auto& d = sol.shipments[g];
    if (d.routed()) {
      out += fmt("  %-12s %8.6f %10.4f %10.4f %10.4f %10.4f  ", s.id.c_str(), d.xi, s.volume_cars * d.xi,
                 d.chain->total_time_h, s.due_date_h, s.due_date_h - d.chain->total_time_h);
      out += format_chain(net, d.chain->arcs) + "\n";
    } else {
      out += fmt("  %-12s %8.6f %10.4f %10s %10.4f %10s  rejected\n", s.id.c_str(), 0.0, 0.0, "-", s.due_date_h, "-");
    }
  }

  out += "\narc utilization (arcs carrying flow)\n";
  out += fmt("  %-10s %10s %10s %8s\n", "arc", "flow", "capacity", "util");
  const auto flows = arc_flows(inst, sol);
  for (std::size_t m = 0; m < net.arc_count(); ++m) {
    if (flows[m] <= 0.0) continue;
    const auto& a = net.arcs()[m];
    if (a.capacity)
      out += fmt("  %-10s %10.4f %10.4f %7.1f%%\n", a.id.c_str(), flows[m], *a.capacity,
                 *a.capacity > 0 ? 100.0 * flows[m] / *a.capacity : 0.0);
    else
      out += fmt("  %-10s %10.4f %10s %8s\n", a.id.c_str(), flows[m], "unbounded", "-");
  }

  const auto obj = format_objective(sol);
  const auto cost = fixed_express_cost(inst);
  out += "\nobjective\n";
  out += "  gross revenue              " + obj.gross + "\n";
  out += "  express constant           " + obj.constant + "\n";
  out += "  net income                 " + obj.net + "\n";
  out += fmt("  express cost per car-km    %.6f\n", cost.arc_side);
  out += fmt("  express cost per train     %.6f\n", cost.train_side);
  out += fmt("  cost discrepancy           %.9g\n", cost.discrepancy);
  return out;
}

}  // namespace ctt
