#include <gtest/gtest.h>

#include <filesystem>
#include <regex>
#include <sstream>

#include "ctt/cli.hpp"
#include "test_support.hpp"

namespace ctt {
namespace {

using test::data_path;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ctt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  std::filesystem::path tmp(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("ctt_cli_" + name);
    created_.push_back(p);
    return p;
  }
  void TearDown() override {
    for (const auto& p : created_) std::filesystem::remove(p);
  }

 private:
  std::vector<std::filesystem::path> created_;
};

TEST_F(CliTest, SolveMixedNetworkRoutesBothShipmentsFully) {
  const auto out = tmp("sol.json");
  const auto r = run_cli({"solve", data_path("mixed_network.json"), "-o", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("status: optimal"), std::string::npos);
  const auto doc = read_json_file(out.string());
  EXPECT_EQ(doc["solver"]["status"], "optimal");
  for (const auto& s : doc["shipments"]) {
    EXPECT_TRUE(s["chain"].is_array());
    EXPECT_EQ(s["xi"].get<double>(), 1.0);
  }
}

TEST_F(CliTest, EnumerateChainsForOneShipment) {
  const auto r = run_cli({"enumerate-chains", data_path("mixed_network.json"), "--shipment", "s-t"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* chain : {"Arc4 -> Arc1 -> Arc3 -> Arc9", "Arc4 -> Arc1 -> Arc7 -> Arc8 -> Arc9",
                            "Arc4 -> Arc5 -> Arc6 -> Arc7 -> Arc8 -> Arc9", "Arc10 -> Arc11 -> Arc12 -> Arc13 -> Arc14"})
    EXPECT_NE(r.out.find(chain), std::string::npos) << chain;
  EXPECT_EQ(r.out.find("s'-t"), std::string::npos);
}

TEST_F(CliTest, EnumerateChainsJson) {
  const auto r = run_cli({"enumerate-chains", data_path("mixed_network.json"), "--json", "--max-arcs", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = Json::parse(r.out);
  ASSERT_EQ(doc.size(), 2u);
  for (const auto& s : doc)
    for (const auto& c : s["chains"]) EXPECT_LE(c["arcs"].size(), 4u);
}

TEST_F(CliTest, UnknownShipmentIsUsageError) {
  EXPECT_EQ(run_cli({"enumerate-chains", data_path("mixed_network.json"), "--shipment", "nope"}).code, 3);
}

TEST_F(CliTest, OracleOverCapExitsTwo) {
  const auto r = run_cli({"oracle", data_path("mixed_network.json"), "--oracle-cap", "5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("refused"), std::string::npos);
}

TEST_F(CliTest, OracleMatchesSolveOnTightFixture) {
  const auto a = tmp("a.json"), b = tmp("b.json");
  ASSERT_EQ(run_cli({"solve", data_path("mixed_network_tight.json"), "-o", a.string()}).code, 0);
  ASSERT_EQ(run_cli({"oracle", data_path("mixed_network_tight.json"), "-o", b.string()}).code, 0);
  EXPECT_NEAR(read_json_file(a.string())["objective"]["gross"].get<double>(),
              read_json_file(b.string())["objective"]["gross"].get<double>(), 1e-6);
}

TEST_F(CliTest, SolveThenCheckPasses) {
  for (const std::string fixture : {"mixed_network.json", "mixed_network_tight.json"}) {
    const auto sol = tmp("check.json");
    ASSERT_EQ(run_cli({"solve", data_path(fixture), "-o", sol.string()}).code, 0);
    const auto r = run_cli({"check", data_path(fixture), sol.string()});
    EXPECT_EQ(r.code, 0) << r.err;
  }
  const auto inst = tmp("gen.json"), sol = tmp("gen_sol.json");
  for (int seed = 1; seed <= 5; ++seed) {
    ASSERT_EQ(run_cli({"gen", "--seed", std::to_string(seed), "-o", inst.string()}).code, 0);
    const int code = run_cli({"solve", inst.string(), "-o", sol.string(), "--parallel"}).code;
    ASSERT_TRUE(code == 0 || code == 2);
    EXPECT_EQ(run_cli({"check", inst.string(), sol.string()}).code, 0);
  }
}

TEST_F(CliTest, CheckCatchesOverCapacity) {
  const auto path = tmp("bad.json");
  const auto inst = mixed_network_instance(MixedNetworkVariant::tight);
  auto sol = solve(inst);
  for (auto& d : sol.shipments) d.xi = 1.0;
  sol.objective_gross = 47000.0;
  sol.objective_net = sol.objective_gross - sol.constant_offset;
  save_solution(inst, sol, path.string());
  const auto r = run_cli({"check", data_path("mixed_network_tight.json"), path.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("eq3_"), std::string::npos);
}

TEST_F(CliTest, PrintedNetIsGrossMinusConstant) {
  for (const std::string fixture : {"mixed_network.json", "mixed_network_tight.json"}) {
    const auto r = run_cli({"solve", data_path(fixture)});
    ASSERT_EQ(r.code, 0);
    std::smatch m;
    auto grab = [&](const char* label) {
      const std::regex re(std::string(label) + R"(\s+(-?\d+)\.(\d{6}))");
      EXPECT_TRUE(std::regex_search(r.out, m, re)) << label;
      return std::stoll(m[1].str()) * 1000000 + (m[1].str()[0] == '-' ? -1 : 1) * std::stoll(m[2].str());
    };
    EXPECT_EQ(grab("net income"), grab("gross revenue") - grab("express constant"));
  }
}

TEST_F(CliTest, ValidateReportsViolations) {
  auto doc = instance_to_json(mixed_network_instance());
  doc["shipments"][0]["origin"] = "t";
  const auto path = tmp("invalid.json");
  write_json_file(doc, path.string());
  const auto r = run_cli({"validate", path.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("shipment-od"), std::string::npos);
  EXPECT_EQ(run_cli({"solve", path.string()}).code, 1);
  EXPECT_EQ(run_cli({"validate", data_path("mixed_network.json")}).code, 0);
}

TEST_F(CliTest, InfeasibleTrivialExitsTwo) {
  auto doc = instance_to_json(mixed_network_instance());
  for (auto& s : doc["shipments"]) s["due_date_h"] = 1.0;
  const auto path = tmp("late.json");
  write_json_file(doc, path.string());
  const auto r = run_cli({"solve", path.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("infeasible-trivial"), std::string::npos);
}

TEST_F(CliTest, NodeBudgetAbortExitsTwo) {
  const auto inst = tmp("big.json");
  ASSERT_EQ(run_cli({"gen", "--seed", "3", "--yards", "8", "--centers", "4", "--shipments", "10", "-o",
                     inst.string()})
                .code,
            0);
  EXPECT_EQ(run_cli({"solve", inst.string(), "--node-budget", "3"}).code, 2);
}

TEST_F(CliTest, ExportLpToFileAndStdout) {
  const auto path = tmp("model.lp");
  ASSERT_EQ(run_cli({"export-lp", data_path("mixed_network.json"), "-o", path.string()}).code, 0);
  const auto r = run_cli({"export-lp", data_path("mixed_network.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(read_lp_file(path.string()), read_lp_string(r.out));
  EXPECT_EQ(r.out, to_lp_string(build_milp(mixed_network_instance())));
  const auto emitted = tmp("emitted.lp");
  ASSERT_EQ(run_cli({"solve", data_path("mixed_network.json"), "--emit-lp", emitted.string()}).code, 0);
  EXPECT_EQ(read_lp_file(emitted.string()), read_lp_string(r.out));
}

TEST_F(CliTest, GenIsDeterministic) {
  const auto a = run_cli({"gen", "--seed", "17", "--profile", "tight"});
  const auto b = run_cli({"gen", "--seed", "17", "--profile", "tight"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, dump_instance(generate(17, 6, 3, 8, *generator_profile("tight"))));
}

TEST_F(CliTest, UsageAndIoErrorsExitThree) {
  EXPECT_EQ(run_cli({}).code, 3);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 3);
  EXPECT_EQ(run_cli({"solve"}).code, 3);
  EXPECT_EQ(run_cli({"solve", "/nonexistent.json"}).code, 3);
  EXPECT_EQ(run_cli({"gen", "--profile", "bogus"}).code, 3);
  EXPECT_EQ(run_cli({"solve", data_path("mixed_network.json"), "--max-arcs", "0"}).code, 3);
}

TEST_F(CliTest, HelpShowsDefaults) {
  const auto top = run_cli({"--help"});
  EXPECT_EQ(top.code, 0);
  EXPECT_NE(top.out.find("enumerate-chains"), std::string::npos);
  const auto sub = run_cli({"solve", "--help"});
  EXPECT_EQ(sub.code, 0);
  for (const char* text : {"--max-arcs", "8", "--tol", "1e-06", "--node-budget", "50000000", "--oracle-cap",
                           "1000000", "--single-worker", "--relax-y", "--emit-lp"})
    EXPECT_NE(sub.out.find(text), std::string::npos) << text;
}

}  // namespace
}  // namespace ctt
