#include "finslergeo/errors.hpp"
#include "finslergeo/scenario.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

using namespace finslergeo;
using nlohmann::json;

namespace {

const std::string kScenarios = FINSLERGEO_SCENARIO_DIR;
const std::string kCli = FINSLERGEO_CLI_PATH;

struct Captured {
  int status = -1;
  std::string out;
};

Captured run_cli(const std::string& args) {
  Captured c;
  const std::string cmd = kCli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return c;
  std::array<char, 4096> buf{};
  size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) c.out.append(buf.data(), n);
  const int st = pclose(pipe);
  c.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return c;
}

std::string scenario(const std::string& name) { return kScenarios + "/" + name + ".json"; }

template <class E>
std::string error_message(const std::string& text) {
  try {
    parse_scenario_text(text);
  } catch (const E& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Scenario, DefaultsAreFilled) {
  const Scenario s = parse_scenario_text(R"({"model": "su2", "norm": {"kind": "euclidean"},
                                             "task": "integrate-geodesic"})");
  EXPECT_EQ(s.model.name, "su2");
  EXPECT_EQ(s.norm.dim, 3);
  EXPECT_EQ(s.seed, 0u);
  EXPECT_DOUBLE_EQ(s.params["T"].get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(s.params["step"].get<double>(), 1e-3);
  EXPECT_EQ(s.params["y0"], json({1.0, 0.0, 0.0}));
}

TEST(Scenario, RandersNormTooLarge) {
  const std::string msg = error_message<ValidationError>(
      R"({"model": "heisenberg3", "norm": {"kind": "randers", "b": [1.2, 0, 0]}, "task": "berwald"})");
  EXPECT_NE(msg.find("‖b‖ < 1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("1.2"), std::string::npos) << msg;
}

TEST(Scenario, DimensionMismatchNamesBoth) {
  const std::string msg = error_message<ValidationError>(
      R"({"model": "su2", "norm": {"kind": "randers", "a": [1, 0, 0, 1], "b": [0.1, 0]}, "task": "berwald"})");
  EXPECT_NE(msg.find('2'), std::string::npos) << msg;
  EXPECT_NE(msg.find('3'), std::string::npos) << msg;
  const std::string msg2 = error_message<ValidationError>(
      R"({"model": "su2", "norm": {"kind": "randers", "b": [0.1, 0]}, "task": "berwald"})");
  EXPECT_NE(msg2.find("dimension 2"), std::string::npos) << msg2;
  const std::string msg3 = error_message<ValidationError>(
      R"({"model": "su2", "norm": {"kind": "randers", "a": [1, 0, 0, 0, 1, 0, 0, 0, 1], "b": [0.1, 0]},
          "task": "berwald"})");
  EXPECT_NE(msg3.find("3x3"), std::string::npos) << msg3;
  EXPECT_NE(msg3.find("dimension 2"), std::string::npos) << msg3;
}

TEST(Scenario, ParseErrorsCarryPosition) {
  const std::string msg = error_message<ParseError>("{\n  \"model\": \"su2\",\n  \"task\" \"berwald\"\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_THROW(parse_scenario_text(R"({"model": "su2", "task": "berwald"})"), ParseError);
  EXPECT_NE(msg.find("column"), std::string::npos) << msg;
  const std::string typed = error_message<ParseError>(R"({"model": "su2", "norm": {"kind": "euclidean"}, "task": "berwald", "seed": "x"})");
  EXPECT_NE(typed.find("seed"), std::string::npos) << typed;
}

TEST(Scenario, RejectsUnknownNames) {
  EXPECT_THROW(parse_scenario_text(R"({"model": "so3", "norm": {"kind": "euclidean"}, "task": "berwald"})"), ValidationError);
  EXPECT_THROW(parse_scenario_text(R"({"model": "su2", "norm": {"kind": "euclidean"}, "task": "fly"})"), ValidationError);
  EXPECT_THROW(parse_scenario_text(R"({"model": "su2", "norm": {"kind": "euclidean"}, "task": "berwald", "colour": 1})"), ValidationError);
  EXPECT_THROW(parse_scenario_text(R"({"model": "su2", "norm": {"kind": "euclidean"}, "task": "berwald", "params": {"samples": 0}})"),
               ValidationError);
  EXPECT_THROW(parse_scenario_text(R"({"model": "su2", "norm": {"kind": "euclidean"}, "task": "integrate-geodesic",
                                   "params": {"y0": [1, 0]}})"),
               ValidationError);
}

TEST(Scenario, RoundTrip) {
  for (const auto& entry : std::filesystem::directory_iterator(kScenarios)) {
    const Scenario s = parse_scenario_file(entry.path().string());
    const Scenario back = parse_scenario_text(serialize(s));
    EXPECT_EQ(back, s) << entry.path();
    EXPECT_EQ(scenario_digest(back), scenario_digest(s));
  }
}

TEST(Scenario, InlineAlgebra) {
  // su(2) (+) R with the abelian factor as isotropy.
  const std::string text = R"({
    "model": {"algebra": {"dim": 4, "names": ["e1", "e2", "e3", "z"],
                          "brackets": [[1, 2, 3, 1], [2, 3, 1, 1], [3, 1, 2, 1]],
                          "m": [1, 2, 3], "h": [4]}},
    "norm": {"kind": "euclidean"},
    "task": "check-nat-reductive",
    "params": {"samples": 50, "tol": 1e-10},
    "seed": 5
  })";
  const Scenario s = parse_scenario_text(text);
  ASSERT_TRUE(s.model.algebra.has_value());
  EXPECT_EQ(s.norm.dim, 3);
  const RunReport rep = run(s);
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.body["model"], "inline");
  Scenario bad = s;
  bad.task = "integrate-geodesic";
  fill_defaults(bad);
  EXPECT_THROW(run(bad), ValidationError);
}

TEST(Run, DeterministicBodies) {
  for (const auto& name : {"h3_euclidean_geodesic_vectors", "su2_randers_integrate", "h3_randers_berwald"}) {
    const Scenario s = parse_scenario_file(scenario(name));
    EXPECT_EQ(run(s).machine(), run(s).machine()) << name;
  }
}

TEST(Run, SU2AllVectorsGeodesic) {
  const RunReport rep = run(parse_scenario_file(scenario("su2_biinvariant_geodesic_vectors")));
  EXPECT_TRUE(rep.passed);
  EXPECT_NE(rep.text().find("all sampled vectors geodesic: true"), std::string::npos);
  EXPECT_EQ(rep.body["result"]["branch_count"], 1);
  EXPECT_EQ(rep.body["result"]["branches"][0]["span_dim"], 3);
}

TEST(Run, HeisenbergTwoBranches) {
  const RunReport rep = run(parse_scenario_file(scenario("h3_euclidean_geodesic_vectors")));
  EXPECT_TRUE(rep.passed);
  const json& res = rep.body["result"];
  ASSERT_EQ(res["branch_count"], 2);
  std::vector<int> dims;
  for (const auto& b : res["branches"]) dims.push_back(b["span_dim"].get<int>());
  std::sort(dims.begin(), dims.end());
  EXPECT_EQ(dims, (std::vector<int>{1, 2}));
  EXPECT_NE(rep.text().find("all sampled vectors geodesic: false"), std::string::npos);
}

TEST(Run, HeisenbergNotNaturallyReductive) {
  const RunReport rep = run(parse_scenario_file(scenario("h3_euclidean_nat_reductive")));
  EXPECT_FALSE(rep.passed);
  EXPECT_EQ(rep.exit_code(), 2);
  const json& w = rep.body["result"]["witness"];
  EXPECT_TRUE(w.contains("x") && w.contains("u") && w.contains("v") && w.contains("y"));
  EXPECT_NE(rep.text().find("max-residual sample"), std::string::npos);
}

TEST(Cli, ExitCodesAndFormats) {
  const auto ok = run_cli("run --scenario " + scenario("su2_biinvariant_nat_reductive") + " --format machine");
  EXPECT_EQ(ok.status, 0);
  const json body = json::parse(ok.out);
  EXPECT_TRUE(body["passed"].get<bool>());
  EXPECT_FALSE(body.contains("wall_seconds"));

  const auto fail = run_cli("run --scenario " + scenario("h3_euclidean_nat_reductive"));
  EXPECT_EQ(fail.status, 2);
  EXPECT_NE(fail.out.find("result: FAIL"), std::string::npos);

  const auto missing = run_cli("run --scenario /nonexistent.json");
  EXPECT_NE(missing.status, 0);
  EXPECT_NE(missing.status, 2);

  const auto override_task =
      run_cli("check-minkowski-lie --scenario " + scenario("su2_biinvariant_nat_reductive") + " --format machine");
  EXPECT_EQ(override_task.status, 0);
  EXPECT_EQ(json::parse(override_task.out)["task"], "check-minkowski-lie");
}

TEST(Cli, BadScenarioIsError) {
  const auto path = std::filesystem::temp_directory_path() / "finslergeo_bad_scenario.json";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    ASSERT_NE(f, nullptr);
    std::fputs(R"({"model": "heisenberg3", "norm": {"kind": "randers", "b": [0, 0, 1.5]}, "task": "berwald"})", f);
    std::fclose(f);
  }
  const auto res = run_cli("run --scenario " + path.string() + " --format machine");
  EXPECT_EQ(res.status, 1);
  const json err = json::parse(res.out);
  EXPECT_EQ(err["error"], "ValidationError");
  std::filesystem::remove(path);
}

TEST(Cli, MachineReportsAreByteIdentical) {
  const std::string args = "run --scenario " + scenario("h3_randers_geodesic_vectors") + " --format machine";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
}
