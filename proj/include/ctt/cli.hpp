#pragma once

#include <cstdint>
#include <iostream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ctt/chains.hpp"
#include "ctt/generator.hpp"
#include "ctt/instance_io.hpp"
#include "ctt/lp_format.hpp"
#include "ctt/milp.hpp"
#include "ctt/report.hpp"
#include "ctt/solver.hpp"

namespace ctt::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailed = 1,
  kInfeasibleOrAborted = 2,
  kIoOrUsage = 3,
};

struct CliConfig {
  std::string subcommand;
  std::string instance_path;
  std::string solution_path;  // check: input; solve/oracle: output
  std::string output_path;
  std::string lp_path;
  std::string shipment;
  int max_arcs = kDefaultMaxArcs;
  double tol = 1e-6;
  std::size_t node_budget = SolverOptions{}.node_budget;
  std::size_t oracle_cap = SolverOptions{}.oracle_cap;
  std::uint64_t seed = 1;
  int yards = 6;
  int centers = 3;
  int shipments = 8;
  std::string profile = "default";
  bool relax_y = false;
  bool single_worker = true;
  unsigned workers = 0;
  bool json = false;
};

namespace detail {

inline SolverOptions solver_options(const CliConfig& cfg) {
  SolverOptions o;
  o.max_arcs = cfg.max_arcs;
  o.tol = cfg.tol;
  o.node_budget = cfg.node_budget;
  o.oracle_cap = cfg.oracle_cap;
  o.single_worker = cfg.single_worker;
  o.workers = cfg.workers;
  return o;
}

inline void print_violations(const ViolationList& vs, std::ostream& err) {
  for (const auto& v : vs) err << "  " << to_string(v) << "\n";
}

inline int cmd_validate(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(cfg.instance_path);
  const auto vs = validate_instance(inst);
  if (vs.empty()) {
    out << cfg.instance_path << ": valid (" << inst.network.node_count() << " nodes, " << inst.network.arc_count()
        << " arcs, " << inst.shipments.size() << " shipments)\n";
    const auto cost = fixed_express_cost(inst);
    out << "express cost per car-km " << cost.arc_side << ", per train " << cost.train_side << ", discrepancy "
        << cost.discrepancy << "\n";
    return kOk;
  }
  err << cfg.instance_path << ": " << vs.size() << " violation(s)\n";
  print_violations(vs, err);
  return kValidationFailed;
}

inline int cmd_enumerate(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(cfg.instance_path);
  require_valid(inst);
  std::vector<std::size_t> which;
  if (!cfg.shipment.empty()) {
    const auto g = find_shipment(inst, cfg.shipment);
    if (!g) {
      err << "unknown shipment '" << cfg.shipment << "'\n";
      return kIoOrUsage;
    }
    which.push_back(*g);
  } else {
    for (std::size_t g = 0; g < inst.shipments.size(); ++g) which.push_back(g);
  }

  Json doc = Json::array();
  for (std::size_t g : which) {
    const auto chains = enumerate_chains(inst, g, cfg.max_arcs);
    if (!cfg.json) {
      out << format_chain_table(inst, g, chains) << "\n";
      continue;
    }
    Json js = {{"shipment", inst.shipments[g].id}, {"chains", Json::array()}};
    for (const auto& c : chains)
      js["chains"].push_back({{"arcs", arc_ids(inst.network, c.arcs)},
                              {"total_time_h", c.total_time_h},
                              {"reclassifications", c.reclassifications},
                              {"block_swaps", c.block_swaps}});
    doc.push_back(std::move(js));
  }
  if (cfg.json) out << doc.dump(2) << "\n";
  return kOk;
}

inline int finish_solution(const CliConfig& cfg, const Instance& inst, const Solution& sol, std::ostream& out,
                           std::ostream& err) {
  if (!cfg.output_path.empty()) save_solution(inst, sol, cfg.output_path);
  out << format_report(inst, sol);
  if (sol.status == SolveStatus::optimal) return kOk;
  err << "solver status: " << to_string(sol.status) << "\n";
  return kInfeasibleOrAborted;
}

inline int cmd_solve(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(cfg.instance_path);
  if (!cfg.lp_path.empty()) export_lp(build_milp(inst, {cfg.max_arcs, cfg.relax_y}), cfg.lp_path);
  return finish_solution(cfg, inst, solve(inst, solver_options(cfg)), out, err);
}

inline int cmd_oracle(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(cfg.instance_path);
  return finish_solution(cfg, inst, oracle(inst, solver_options(cfg)), out, err);
}

inline int cmd_export_lp(const CliConfig& cfg, std::ostream& out, std::ostream&) {
  const Instance inst = load_instance(cfg.instance_path);
  const MilpModel model = build_milp(inst, {cfg.max_arcs, cfg.relax_y});
  if (cfg.output_path.empty() || cfg.output_path == "-")
    write_lp(model, out);
  else
    export_lp(model, cfg.output_path);
  return kOk;
}

inline int cmd_gen(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto profile = generator_profile(cfg.profile);
  if (!profile) {
    err << "unknown profile '" << cfg.profile << "'\n";
    return kIoOrUsage;
  }
  const Instance inst = generate(cfg.seed, cfg.yards, cfg.centers, cfg.shipments, *profile);
  if (cfg.output_path.empty() || cfg.output_path == "-")
    out << dump_instance(inst);
  else
    save_instance(inst, cfg.output_path);
  return kOk;
}

inline int cmd_check(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(cfg.instance_path);
  require_valid(inst);
  const Solution sol = load_solution(inst, cfg.solution_path);

  std::vector<std::string> problems;
  for (std::size_t g = 0; g < sol.shipments.size(); ++g) {
    const auto& d = sol.shipments[g];
    const auto& s = inst.shipments[g];
    if (d.routed() && d.chain->total_time_h > s.due_date_h + cfg.tol)
      problems.push_back("shipment " + s.id + ": chain takes " + std::to_string(d.chain->total_time_h) +
                         " h, due date " + std::to_string(s.due_date_h) + " h");
    if (d.routed() && static_cast<int>(d.chain->arcs.size()) > cfg.max_arcs)
      problems.push_back("shipment " + s.id + ": chain longer than --max-arcs");
    if (!d.routed() && d.xi != 0.0) problems.push_back("shipment " + s.id + ": rejected but xi != 0");
  }

  FeasibilityReport rep;
  if (problems.empty()) {
    const MilpModel model = build_milp(inst, {cfg.max_arcs, cfg.relax_y});
    rep = check_solution(model, lift_solution(model, sol), cfg.tol);
    for (const auto& v : rep.violations)
      problems.push_back(v.label + ": activity " + std::to_string(v.activity) + " vs rhs " + std::to_string(v.rhs) +
                         " (off by " + std::to_string(v.amount) + ")");
    if (std::abs(rep.objective - sol.objective_gross) > cfg.tol)
      problems.push_back("gross objective " + std::to_string(sol.objective_gross) + " differs from recomputed " +
                         std::to_string(rep.objective));
  }
  if (sol.objective_net != sol.objective_gross - sol.constant_offset)
    problems.push_back("net objective is not gross minus express constant");
  if (std::abs(sol.constant_offset - fixed_express_cost(inst).arc_side) > cfg.tol)
    problems.push_back("express constant differs from the instance's express cost");

  for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
  if (problems.empty()) {
    out << cfg.solution_path << ": feasible, gross " << format_objective(sol).gross << "\n";
    return kOk;
  }
  err << cfg.solution_path << ": " << problems.size() << " problem(s)\n";
  for (const auto& p : problems) err << "  " << p << "\n";
  return kValidationFailed;
}

}  // namespace detail

/// Entry point shared by the `ctt` executable and the tests. Diagnostics go
/// to `err`, reports and data to `out` or files.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CliConfig cfg;
  CLI::App app{"Car-to-train assignment on scheduled and unscheduled rail service networks", "ctt"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto add_max_arcs = [&](CLI::App* sub) {
    sub->add_option("--max-arcs", cfg.max_arcs, "Longest chain considered, in arcs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };
  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("instance", cfg.instance_path, "Instance JSON file")->required();
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "Absolute objective tolerance")->capture_default_str();
    sub->add_option("--node-budget", cfg.node_budget, "Branch-and-bound node limit")->capture_default_str();
    sub->add_option("--oracle-cap", cfg.oracle_cap, "Largest chain-combination count the oracle accepts")
        ->capture_default_str();
    sub->add_flag("--single-worker,!--parallel", cfg.single_worker, "Deterministic single-worker search")
        ->capture_default_str();
    sub->add_option("--workers", cfg.workers, "Worker threads in parallel mode (0: all cores)")->capture_default_str();
    sub->add_option("-o,--output", cfg.output_path, "Write the solution JSON here");
  };

  auto* validate = app.add_subcommand("validate", "Report structural and semantic problems in an instance");
  add_instance(validate);

  auto* enumerate = app.add_subcommand("enumerate-chains", "List the on-time service chains of each shipment");
  add_instance(enumerate);
  add_max_arcs(enumerate);
  enumerate->add_option("--shipment", cfg.shipment, "Only this shipment id");
  enumerate->add_flag("--json", cfg.json, "Emit JSON instead of a table");

  auto* solve_cmd = app.add_subcommand("solve", "Solve to optimality by branch-and-bound");
  add_instance(solve_cmd);
  add_max_arcs(solve_cmd);
  add_solver(solve_cmd);
  solve_cmd->add_option("--emit-lp", cfg.lp_path, "Also write the MILP in LP format");
  solve_cmd->add_flag("--relax-y", cfg.relax_y, "Emit transfer indicators as continuous [0,1]")->capture_default_str();

  auto* oracle_cmd = app.add_subcommand("oracle", "Solve by exhaustive enumeration of chain combinations");
  add_instance(oracle_cmd);
  add_max_arcs(oracle_cmd);
  add_solver(oracle_cmd);

  auto* export_cmd = app.add_subcommand("export-lp", "Write the linearized MILP in CPLEX LP format");
  add_instance(export_cmd);
  add_max_arcs(export_cmd);
  export_cmd->add_option("-o,--output", cfg.output_path, "Output file ('-' for stdout)")->capture_default_str();
  export_cmd->add_flag("--relax-y", cfg.relax_y, "Transfer indicators continuous in [0,1]")->capture_default_str();

  auto* gen = app.add_subcommand("gen", "Generate a seeded random instance");
  gen->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  gen->add_option("--yards", cfg.yards, "Classification yards")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--centers", cfg.centers, "Logistics centers")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--shipments", cfg.shipments, "Shipments")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--profile", cfg.profile, "Generator profile")
      ->check(CLI::IsMember(generator_profile_names()))
      ->capture_default_str();
  gen->add_option("-o,--output", cfg.output_path, "Output file ('-' for stdout)")->capture_default_str();

  auto* check = app.add_subcommand("check", "Verify a solution file against an instance");
  add_instance(check);
  check->add_option("solution", cfg.solution_path, "Solution JSON file")->required();
  check->add_option("--tol", cfg.tol, "Absolute feasibility tolerance")->capture_default_str();
  add_max_arcs(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help requests surface as CallForHelp on the subcommand.
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "usage error: " << e.what() << "\n";
    return kIoOrUsage;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  cfg.subcommand = chosen->get_name();
  try {
    if (chosen == validate) return detail::cmd_validate(cfg, out, err);
    if (chosen == enumerate) return detail::cmd_enumerate(cfg, out, err);
    if (chosen == solve_cmd) return detail::cmd_solve(cfg, out, err);
    if (chosen == oracle_cmd) return detail::cmd_oracle(cfg, out, err);
    if (chosen == export_cmd) return detail::cmd_export_lp(cfg, out, err);
    if (chosen == gen) return detail::cmd_gen(cfg, out, err);
    if (chosen == check) return detail::cmd_check(cfg, out, err);
  } catch (const InvalidInstanceError& e) {
    err << e.what() << "\n";
    detail::print_violations(e.violations(), err);
    return kValidationFailed;
  } catch (const OracleRefusedError& e) {
    err << e.what() << "\n";
    return kInfeasibleOrAborted;
  } catch (const InstanceFormatError& e) {
    err << "schema error at " << e.what() << "\n";
    return kIoOrUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIoOrUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailed;
  }
  return kIoOrUsage;
}

}  // namespace ctt::cli
