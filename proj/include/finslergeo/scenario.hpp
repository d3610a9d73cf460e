#pragma once

// Scenario files (JSON) and the task runner behind the command-line tool.
//
// Schema:
//   {
//     "model": "heisenberg3" | "su2" | "abelian<n>"
//            | {"algebra": {"dim": n, "names": [...],
//                           "brackets": [[i, j, k, c], ...],   // [e_i, e_j] += c e_k, 1-based
//                           "m": [...], "h": [...]}},          // 1-based, default m = all
//     "norm":  {"kind": "euclidean" | "randers", "a": [row-major n*n], "b": [n]},
//     "task":  "geodesic-vectors" | "check-nat-reductive" | "check-minkowski-lie"
//            | "integrate-geodesic" | "check-homogeneous" | "s-curvature" | "berwald",
//     "params": {...},   // task options, defaults filled by parse_scenario
//     "seed": 0
//   }
// "a" defaults to the identity and "b" to zero.

#include "finslergeo/group_model.hpp"
#include "finslergeo/lie_algebra.hpp"
#include "finslergeo/minkowski_norm.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace finslergeo {

inline constexpr const char* kToolVersion = "0.1.0";

struct InlineAlgebra {
  int dim = 0;
  std::vector<std::string> names;
  /// 1-based (i, j, k, c).
  std::vector<BracketEntry> brackets;
  /// 1-based.
  std::vector<int> m;
  std::vector<int> h;

  bool operator==(const InlineAlgebra&) const = default;
};

struct ModelSpec {
  /// Built-in model name; empty when `algebra` is set.
  std::string name;
  std::optional<InlineAlgebra> algebra;

  bool operator==(const ModelSpec&) const = default;
};

struct NormSpec {
  std::string kind = "euclidean";
  int dim = 0;
  std::vector<double> a;
  std::vector<double> b;

  bool operator==(const NormSpec&) const = default;
};

struct Scenario {
  ModelSpec model;
  NormSpec norm;
  std::string task;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;

  bool operator==(const Scenario&) const = default;
};

const std::vector<std::string>& known_tasks();

/// Throws ParseError (malformed JSON, with line and column, or a field of the
/// wrong type) and ValidationError (unknown names, dimension disagreement,
/// Randers |b| >= 1, invalid algebra).
Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_text(const std::string& text);
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json scenario_to_json(const Scenario& s);
std::string serialize(const Scenario& s);

/// Fills task defaults into s.params without overwriting given values.
void fill_defaults(Scenario& s);

/// The objects a scenario describes.
struct ResolvedScenario {
  ReductiveDecomposition decomposition;
  /// Null for inline algebras.
  std::shared_ptr<const GroupModel> model;
  MinkowskiNorm norm;
};
ResolvedScenario resolve(const Scenario& s);

struct RunReport {
  std::string task;
  bool passed = false;
  /// Deterministic body: digest, version, seed, tolerances, payload.
  nlohmann::json body;
  double wall_seconds = 0.0;
  /// Optional trajectory rows (t, x..., y..., F), filled by integrate-geodesic.
  std::vector<std::vector<double>> trajectory;

  int exit_code() const { return passed ? 0 : 2; }
  std::string machine() const;
  std::string text() const;
};

RunReport run(const Scenario& s);

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string scenario_digest(const Scenario& s);

}  // namespace finslergeo
