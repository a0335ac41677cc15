#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "ctt/chains.hpp"
#include "ctt/instance.hpp"
#include "ctt/milp.hpp"
#include "ctt/simplex.hpp"

namespace ctt {

struct SolverOptions {
  int max_arcs = kDefaultMaxArcs;
  double tol = 1e-6;                     // absolute, on the objective
  std::size_t node_budget = 50'000'000;  // branch-and-bound nodes
  std::size_t oracle_cap = 1'000'000;    // chain combinations
  bool single_worker = true;
  unsigned workers = 0;  // 0: hardware concurrency (parallel mode only)
};

enum class SolveStatus { optimal, infeasible_trivial, aborted };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible_trivial: return "infeasible-trivial";
    case SolveStatus::aborted: return "aborted";
  }
  return "?";
}

inline std::optional<SolveStatus> parse_solve_status(std::string_view s) {
  if (s == "optimal") return SolveStatus::optimal;
  if (s == "infeasible-trivial") return SolveStatus::infeasible_trivial;
  if (s == "aborted") return SolveStatus::aborted;
  return std::nullopt;
}

struct ShipmentDecision {
  std::optional<ServiceChain> chain;  // empty: rejected
  double xi = 0.0;

  bool routed() const noexcept { return chain.has_value(); }
};

struct Solution {
  std::vector<ShipmentDecision> shipments;
  double objective_gross = 0.0;   // sum of R_g N_g xi_g
  double constant_offset = 0.0;   // express-train organization cost
  double objective_net = 0.0;     // gross - constant_offset
  SolveStatus status = SolveStatus::optimal;
  double bound_gap = 0.0;
  std::size_t nodes_explored = 0;
};

class OracleRefusedError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kRejected = -1;

/// Per-shipment due-date-feasible chains plus the value each would earn if it
/// had the network to itself.
struct ChainCatalog {
  std::vector<std::vector<ServiceChain>> chains;
  std::vector<std::vector<double>> standalone;  // -inf if infeasible even alone

  std::size_t shipment_count() const noexcept { return chains.size(); }
};

struct Evaluation {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> xi;  // per shipment, 0 when rejected
};

/// Solves the admitted-fraction LP for a fixed chain choice per shipment
/// (kRejected for none). Routed shipments get xi in [1/big_m, 1].
inline Evaluation evaluate_choice(const Instance& inst, const ChainCatalog& cat, std::span<const int> choice) {
  const auto& net = inst.network;
  std::vector<std::size_t> routed;
  for (std::size_t g = 0; g < choice.size(); ++g)
    if (choice[g] != kRejected) routed.push_back(g);

  std::vector<std::size_t> capacity_arcs;
  {
    std::vector<char> seen(net.arc_count(), 0);
    for (std::size_t g : routed)
      for (ArcIndex m : cat.chains[g][static_cast<std::size_t>(choice[g])].arcs)
        if (!seen[m.value] && net.arc(m).capacitated()) {
          seen[m.value] = 1;
          capacity_arcs.push_back(m.value);
        }
    std::sort(capacity_arcs.begin(), capacity_arcs.end());
  }

  LpSubproblem sub;
  const double xi_min = 1.0 / inst.big_m;
  for (std::size_t g : routed) {
    sub.objective.push_back(inst.shipments[g].full_value());
    sub.lower.push_back(xi_min);
    sub.upper.push_back(1.0);
  }
  for (std::size_t m : capacity_arcs) {
    std::vector<double> row(routed.size(), 0.0);
    for (std::size_t j = 0; j < routed.size(); ++j) {
      const auto& arcs = cat.chains[routed[j]][static_cast<std::size_t>(choice[routed[j]])].arcs;
      if (std::find(arcs.begin(), arcs.end(), ArcIndex{m}) != arcs.end())
        row[j] = inst.shipments[routed[j]].volume_cars;
    }
    sub.rows.push_back(std::move(row));
    sub.rhs.push_back(*net.arcs()[m].capacity);
  }

  Evaluation ev;
  const LpResult lp = solve_lp(sub);
  if (lp.status != LpStatus::optimal) return ev;
  ev.feasible = true;
  ev.value = lp.objective;
  ev.xi.assign(choice.size(), 0.0);
  for (std::size_t j = 0; j < routed.size(); ++j) ev.xi[routed[j]] = lp.values[j];
  return ev;
}

inline ChainCatalog build_catalog(const Instance& inst, int max_arcs) {
  ChainCatalog cat;
  const std::size_t G = inst.shipments.size();
  cat.chains.resize(G);
  cat.standalone.resize(G);
  for (std::size_t g = 0; g < G; ++g) {
    cat.chains[g] = enumerate_chains(inst, g, max_arcs);
    std::vector<int> choice(G, kRejected);
    for (std::size_t c = 0; c < cat.chains[g].size(); ++c) {
      choice[g] = static_cast<int>(c);
      const Evaluation ev = evaluate_choice(inst, cat, choice);
      cat.standalone[g].push_back(ev.feasible ? ev.value : -std::numeric_limits<double>::infinity());
    }
  }
  return cat;
}

inline Solution make_solution(const Instance& inst, const ChainCatalog& cat, std::span<const int> choice,
                              std::span<const double> xi) {
  Solution sol;
  sol.shipments.resize(choice.size());
  for (std::size_t g = 0; g < choice.size(); ++g) {
    if (choice[g] == kRejected) continue;
    sol.shipments[g].chain = cat.chains[g][static_cast<std::size_t>(choice[g])];
    sol.shipments[g].xi = xi[g];
    sol.objective_gross += inst.shipments[g].full_value() * xi[g];
  }
  sol.constant_offset = fixed_express_cost(inst).arc_side;
  sol.objective_net = sol.objective_gross - sol.constant_offset;
  return sol;
}

inline double best_standalone(const ChainCatalog& cat, std::size_t g) {
  double best = 0.0;
  for (double v : cat.standalone[g])
    if (std::isfinite(v)) best = std::max(best, v);
  return best;
}

struct NodeBound {
  Evaluation fixed;  // fraction LP over the shipments already assigned
  double bound = -std::numeric_limits<double>::infinity();
};

/// Upper bound on any completion of a partial assignment: the fraction LP
/// over assigned shipments (open ones held at kRejected in `choice`) plus the
/// best standalone value of each open shipment. Dropping the open shipments
/// only frees capacity, so the LP part cannot be beaten by a completion.
inline NodeBound node_bound(const Instance& inst, const ChainCatalog& cat, std::span<const int> choice,
                            std::span<const std::size_t> open) {
  NodeBound nb;
  nb.fixed = evaluate_choice(inst, cat, choice);
  if (!nb.fixed.feasible) return nb;
  nb.bound = nb.fixed.value;
  for (std::size_t g : open) nb.bound += best_standalone(cat, g);
  return nb;
}

namespace detail {

inline bool nothing_routable(const ChainCatalog& cat) {
  if (cat.shipment_count() == 0) return false;
  for (const auto& values : cat.standalone)
    for (double v : values)
      if (std::isfinite(v)) return false;
  return true;
}

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, const ChainCatalog& cat, const SolverOptions& opts)
      : inst_(inst), cat_(cat), opts_(opts) {
    const std::size_t G = cat.shipment_count();
    order_.resize(G);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return inst.shipments[a].full_value() > inst.shipments[b].full_value();
    });

    // Viable chains by decreasing standalone value, then id order; rejection last.
    options_.resize(G);
    for (std::size_t g = 0; g < G; ++g) {
      for (std::size_t c = 0; c < cat.chains[g].size(); ++c)
        if (std::isfinite(cat.standalone[g][c])) options_[g].push_back(static_cast<int>(c));
      std::stable_sort(options_[g].begin(), options_[g].end(),
                       [&](int a, int b) { return cat.standalone[g][a] > cat.standalone[g][b]; });
      options_[g].push_back(kRejected);
    }
  }

  Solution run() {
    const std::size_t G = cat_.shipment_count();
    best_choice_.assign(G, kRejected);
    best_xi_.assign(G, 0.0);
    incumbent_.store(0.0);  // rejecting everything is always feasible

    std::vector<int> root(G, kRejected);
    std::vector<std::vector<int>> tasks;
    if (G == 0 || opts_.single_worker) {
      tasks.push_back({});
    } else {
      for (int c : options_[order_[0]]) tasks.push_back({c});
    }

    auto work = [&](Worker& w) {
      for (;;) {
        const std::size_t t = next_task_.fetch_add(1);
        if (t >= tasks.size()) return;
        std::vector<int> choice = root;
        for (std::size_t k = 0; k < tasks[t].size(); ++k) choice[order_[k]] = tasks[t][k];
        dfs(w, tasks[t].size(), choice);
      }
    };

    std::vector<Worker> workers;
    if (opts_.single_worker || tasks.size() <= 1) {
      workers.resize(1);
      work(workers[0]);
    } else {
      unsigned n = opts_.workers ? opts_.workers : std::max(1u, std::thread::hardware_concurrency());
      n = std::min<unsigned>(n, static_cast<unsigned>(tasks.size()));
      workers.resize(n);
      std::vector<std::thread> threads;
      for (unsigned i = 0; i < n; ++i) threads.emplace_back(work, std::ref(workers[i]));
      for (auto& th : threads) th.join();
    }

    Solution sol = make_solution(inst_, cat_, best_choice_, best_xi_);
    double open = -std::numeric_limits<double>::infinity();
    for (const auto& w : workers) open = std::max(open, w.unresolved_bound);
    sol.nodes_explored = nodes_.load();
    sol.bound_gap = std::max(0.0, open - incumbent_.load());
    sol.status = aborted_.load() ? SolveStatus::aborted : SolveStatus::optimal;
    if (sol.status == SolveStatus::optimal && nothing_routable(cat_)) sol.status = SolveStatus::infeasible_trivial;
    return sol;
  }

 private:
  struct Worker {
    // Largest bound among subtrees discarded without proof they are beaten
    // by more than tol: pruned within tol, or cut off by the node budget.
    double unresolved_bound = -std::numeric_limits<double>::infinity();
  };

  void dfs(Worker& w, std::size_t depth, std::vector<int>& choice) {
    nodes_.fetch_add(1);
    const NodeBound nb = node_bound(inst_, cat_, choice, std::span(order_).subspan(depth));
    if (!nb.fixed.feasible) return;
    const Evaluation& ev = nb.fixed;
    const double bound = nb.bound;

    if (depth == order_.size()) {
      offer(choice, ev);
      return;
    }
    if (bound <= incumbent_.load() + opts_.tol) {
      w.unresolved_bound = std::max(w.unresolved_bound, bound);
      return;
    }
    const std::size_t g = order_[depth];
    for (int c : options_[g]) {
      if (aborted_.load() || nodes_.load() >= opts_.node_budget) {
        aborted_.store(true);
        w.unresolved_bound = std::max(w.unresolved_bound, bound);
        break;
      }
      choice[g] = c;
      dfs(w, depth + 1, choice);
    }
    choice[g] = kRejected;
  }

  void offer(std::span<const int> choice, const Evaluation& ev) {
    std::lock_guard lock(mutex_);
    if (ev.value > incumbent_.load()) {
      incumbent_.store(ev.value);
      best_choice_.assign(choice.begin(), choice.end());
      best_xi_ = ev.xi;
    }
  }

  const Instance& inst_;
  const ChainCatalog& cat_;
  const SolverOptions& opts_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<int>> options_;

  std::atomic<double> incumbent_{0.0};
  std::atomic<std::size_t> nodes_{0};
  std::atomic<std::size_t> next_task_{0};
  std::atomic<bool> aborted_{false};
  std::mutex mutex_;
  std::vector<int> best_choice_;
  std::vector<double> best_xi_;
};

}  // namespace detail

/// Exact solve by branch-and-bound over one chain (or rejection) per
/// shipment. Shipments are branched in decreasing R_g N_g; a node's bound is
/// the fraction LP over the fixed shipments plus each open shipment's best
/// standalone value. Leaves solve the fraction LP exactly.
inline Solution solve(const Instance& inst, const SolverOptions& opts = {}) {
  require_valid(inst);
  const ChainCatalog cat = build_catalog(inst, opts.max_arcs);
  return detail::BranchAndBound(inst, cat, opts).run();
}

inline double combination_count(const ChainCatalog& cat) {
  double n = 1.0;
  for (const auto& c : cat.chains) n *= static_cast<double>(c.size() + 1);
  return n;
}

/// Exhaustive enumeration of every chain combination, in lexicographic order
/// of chain-index tuples with rejection as the last option of each shipment.
/// The first best value found wins ties. Refuses instances above the cap.
inline Solution oracle(const Instance& inst, const SolverOptions& opts = {}) {
  require_valid(inst);
  const ChainCatalog cat = build_catalog(inst, opts.max_arcs);
  const double combos = combination_count(cat);
  if (combos > static_cast<double>(opts.oracle_cap))
    throw OracleRefusedError("oracle refused: " + std::to_string(static_cast<long double>(combos)) +
                             " chain combinations exceed the cap of " + std::to_string(opts.oracle_cap));

  const std::size_t G = cat.shipment_count();
  std::vector<std::size_t> digit(G, 0);
  std::vector<int> choice(G);
  std::vector<int> best_choice(G, kRejected);
  std::vector<double> best_xi(G, 0.0);
  double best = -std::numeric_limits<double>::infinity();
  std::size_t evaluated = 0;

  for (;;) {
    for (std::size_t g = 0; g < G; ++g)
      choice[g] = digit[g] == cat.chains[g].size() ? kRejected : static_cast<int>(digit[g]);
    const Evaluation ev = evaluate_choice(inst, cat, choice);
    ++evaluated;
    if (ev.feasible && ev.value > best + 1e-9) {
      best = ev.value;
      best_choice = choice;
      best_xi = ev.xi;
    }
    bool carry = true;
    for (std::size_t g = G; carry && g-- > 0;) {
      carry = ++digit[g] > cat.chains[g].size();
      if (carry) digit[g] = 0;
    }
    if (carry) break;
  }

  Solution sol = make_solution(inst, cat, best_choice, best_xi);
  sol.nodes_explored = evaluated;
  sol.status = detail::nothing_routable(cat) ? SolveStatus::infeasible_trivial : SolveStatus::optimal;
  return sol;
}

/// Per-arc admitted flow: sum of N_g xi_g over shipments whose chain uses the arc.
inline std::vector<double> arc_flows(const Instance& inst, const Solution& sol) {
  std::vector<double> flow(inst.network.arc_count(), 0.0);
  for (std::size_t g = 0; g < sol.shipments.size(); ++g) {
    const auto& d = sol.shipments[g];
    if (!d.routed()) continue;
    for (ArcIndex m : d.chain->arcs) flow[m.value] += inst.shipments[g].volume_cars * d.xi;
  }
  return flow;
}

/// Expresses a chain solution as a full MILP assignment: x from chain arcs,
/// y = x_m x_n, z = xi x, r = 1 for routed shipments.
inline std::vector<double> lift_solution(const MilpModel& model, const Solution& sol) {
  if (sol.shipments.size() != model.shipments.size()) throw Error("solution and model disagree on shipment count");
  std::vector<double> values(model.variables.size(), 0.0);
  for (std::size_t g = 0; g < sol.shipments.size(); ++g) {
    const auto& sv = model.shipments[g];
    const auto& d = sol.shipments[g];
    values[sv.xi] = d.xi;
    if (!d.routed()) continue;
    values[sv.r] = 1.0;
    for (ArcIndex m : d.chain->arcs) {
      auto it = sv.x.find(m.value);
      if (it == sv.x.end())
        throw Error("chain arc '" + model.arc_ids[m.value] + "' has no variable for shipment " + std::to_string(g));
      values[it->second] = 1.0;
    }
  }
  for (const auto& v : model.variables) {
    const auto& sv = model.shipments[v.ref.shipment];
    if (v.ref.kind == VarKind::y)
      values[*model.find(v.ref)] = values[sv.x.at(v.ref.arc)] * values[sv.x.at(v.ref.next_arc)];
    else if (v.ref.kind == VarKind::z)
      values[*model.find(v.ref)] = values[sv.xi] * values[sv.x.at(v.ref.arc)];
  }
  return values;
}

}  // namespace ctt
