// Scenario-driven command-line front end.
//
//   finslergeo run --scenario s.json [--format text|machine] [--out path]
//   finslergeo <task> --scenario s.json ...   (task overrides the file's task)

#include "finslergeo/errors.hpp"
#include "finslergeo/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

struct Options {
  std::string scenario;
  std::string format = "text";
  std::string out;
  std::string trajectory;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--scenario", o.scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "machine"}));
  cmd->add_option("--out", o.out, "Write the report here instead of stdout");
  cmd->add_option("--seed", o.seed, "Override the scenario seed");
  cmd->add_option("--tol", o.tol, "Override the task's main tolerance");
  cmd->add_option("--trajectory", o.trajectory, "integrate-geodesic: write t, x, y, F columns here");
}

const char* tol_key(const std::string& task) {
  if (task == "integrate-geodesic") return "drift_tol";
  return "tol";
}

void write_trajectory(const std::string& path, const finslergeo::RunReport& rep) {
  std::ofstream f(path);
  if (!f) throw finslergeo::ValidationError("cannot write trajectory file '" + path + "'");
  char buf[32];
  for (const auto& row : rep.trajectory) {
    for (size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      f << (i ? " " : "") << buf;
    }
    f << "\n";
  }
}

int execute(const Options& o, const std::string& task_override) {
  finslergeo::Scenario s = finslergeo::parse_scenario_file(o.scenario);
  if (!task_override.empty() && task_override != s.task) {
    nlohmann::json j = finslergeo::scenario_to_json(s);
    j["task"] = task_override;
    // Keep only the parameters the new task understands.
    finslergeo::Scenario probe = s;
    probe.task = task_override;
    probe.params = nlohmann::json::object();
    finslergeo::fill_defaults(probe);
    nlohmann::json kept = nlohmann::json::object();
    for (const auto& [key, value] : s.params.items()) {
      if (probe.params.contains(key)) kept[key] = value;
    }
    j["params"] = kept;
    s = finslergeo::scenario_from_json(j);
  }
  if (o.seed) s.seed = *o.seed;
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw finslergeo::ValidationError("--tol must be positive");
    s.params[tol_key(s.task)] = *o.tol;
  }
  const finslergeo::RunReport rep = finslergeo::run(s);
  const std::string body = o.format == "machine" ? rep.machine() : rep.text();
  if (o.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(o.out);
    if (!f) throw finslergeo::ValidationError("cannot write report file '" + o.out + "'");
    f << body;
  }
  if (o.format == "machine") std::cerr << "wall time: " << rep.wall_seconds << " s\n";
  if (!o.trajectory.empty()) write_trajectory(o.trajectory, rep);
  return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for homogeneous Finsler spaces"};
  app.require_subcommand(1);
  Options opts;
  std::string chosen;
  auto* run_cmd = app.add_subcommand("run", "Run the task named in the scenario file");
  add_common(run_cmd, opts);
  run_cmd->callback([&] { chosen = "run"; });
  for (const std::string& task : finslergeo::known_tasks()) {
    auto* cmd = app.add_subcommand(task, "Run '" + task + "' on the scenario's model and norm");
    add_common(cmd, opts);
    cmd->callback([&chosen, task] { chosen = task; });
  }
  CLI11_PARSE(app, argc, argv);

  try {
    return execute(opts, chosen == "run" ? std::string() : chosen);
  } catch (const finslergeo::Error& e) {
    const nlohmann::json err = {{"error", e.kind()}, {"message", e.what()}};
    if (opts.format == "machine") {
      std::cout << err.dump(2) << "\n";
    } else {
      std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
