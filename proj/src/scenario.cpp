#include "finslergeo/scenario.hpp"

#include "finslergeo/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace finslergeo {

using nlohmann::json;

namespace {

const std::vector<std::string> kTasks = {"geodesic-vectors",  "check-nat-reductive", "check-minkowski-lie",
                                         "integrate-geodesic", "check-homogeneous",   "s-curvature",
                                         "berwald"};

bool needs_group_model(const std::string& task) {
  return task == "integrate-geodesic" || task == "check-homogeneous" || task == "s-curvature" || task == "berwald";
}

[[noreturn]] void field_error(const std::string& field, const std::string& expected) {
  throw ParseError("field '" + field + "': expected " + expected);
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) field_error(field, "an integer");
  return j.get<int>();
}

std::vector<double> get_numbers(const json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "an array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> get_ints(const json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "an array of integers");
  std::vector<int> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(get_int(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

void reject_unknown_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ValidationError("unknown field '" + where + key + "'");
  }
}

InlineAlgebra parse_inline_algebra(const json& j) {
  if (!j.is_object()) field_error("model.algebra", "an object");
  reject_unknown_keys(j, "model.algebra.", {"dim", "names", "brackets", "m", "h"});
  InlineAlgebra alg;
  if (!j.contains("dim")) throw ParseError("field 'model.algebra.dim': missing");
  alg.dim = get_int(j["dim"], "model.algebra.dim");
  if (alg.dim < 1) throw ValidationError("model.algebra.dim must be positive, got " + std::to_string(alg.dim));
  if (j.contains("names")) {
    if (!j["names"].is_array()) field_error("model.algebra.names", "an array of strings");
    for (const auto& n : j["names"]) {
      if (!n.is_string()) field_error("model.algebra.names", "an array of strings");
      alg.names.push_back(n.get<std::string>());
    }
    if (static_cast<int>(alg.names.size()) != alg.dim) {
      throw ValidationError("model.algebra.names has " + std::to_string(alg.names.size()) + " entries but dim is " +
                            std::to_string(alg.dim));
    }
  }
  if (j.contains("brackets")) {
    const json& b = j["brackets"];
    if (!b.is_array()) field_error("model.algebra.brackets", "an array of [i, j, k, c]");
    for (size_t r = 0; r < b.size(); ++r) {
      const std::string f = "model.algebra.brackets[" + std::to_string(r) + "]";
      if (!b[r].is_array() || b[r].size() != 4) field_error(f, "[i, j, k, c]");
      alg.brackets.push_back({get_int(b[r][0], f + "[0]"), get_int(b[r][1], f + "[1]"), get_int(b[r][2], f + "[2]"),
                              get_number(b[r][3], f + "[3]")});
    }
  }
  if (j.contains("m")) alg.m = get_ints(j["m"], "model.algebra.m");
  if (j.contains("h")) alg.h = get_ints(j["h"], "model.algebra.h");
  if (!j.contains("m")) {
    std::set<int> hs(alg.h.begin(), alg.h.end());
    for (int i = 1; i <= alg.dim; ++i) {
      if (!hs.count(i)) alg.m.push_back(i);
    }
  }
  return alg;
}

ReductiveDecomposition build_decomposition(const InlineAlgebra& spec) {
  std::vector<BracketEntry> entries;
  for (const auto& e : spec.brackets) {
    for (int idx : {e.i, e.j, e.k}) {
      if (idx < 1 || idx > spec.dim) {
        throw ValidationError("bracket index " + std::to_string(idx) + " outside 1.." + std::to_string(spec.dim));
      }
    }
    entries.push_back({e.i - 1, e.j - 1, e.k - 1, e.c});
  }
  auto to_zero_based = [&](const std::vector<int>& v, const char* what) {
    std::vector<int> out;
    for (int idx : v) {
      if (idx < 1 || idx > spec.dim) {
        throw ValidationError(std::string(what) + " index " + std::to_string(idx) + " outside 1.." +
                              std::to_string(spec.dim));
      }
      out.push_back(idx - 1);
    }
    return out;
  };
  LieAlgebra alg = LieAlgebra::from_entries(spec.dim, entries, spec.names);
  ReductiveDecomposition dec(std::move(alg), to_zero_based(spec.m, "model.algebra.m"),
                             to_zero_based(spec.h, "model.algebra.h"));
  const ValidationReport rep = validate(dec);
  if (!rep.passed) {
    std::ostringstream os;
    os << "model.algebra is not a valid reductive Lie algebra:";
    for (const auto& c : rep.checks) {
      if (!c.passed) os << " " << c.name << " violated by " << c.max_violation << " at " << c.witness << ";";
    }
    throw ValidationError(os.str());
  }
  return dec;
}

MinkowskiNorm build_norm(const NormSpec& spec) {
  const int n = spec.dim;
  Mat a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = spec.a[static_cast<size_t>(i) * n + j];
  }
  Vec b(n);
  for (int i = 0; i < n; ++i) b[i] = spec.b[i];
  try {
    if (spec.kind == "euclidean") return MinkowskiNorm::euclidean(a);
    return MinkowskiNorm::randers(a, b);
  } catch (const NonConvexNorm&) {
    std::ostringstream os;
    os << std::setprecision(17) << "Randers norm requires ‖b‖ < 1 (measured in a), got ‖b‖_a = "
       << std::sqrt(b.dot(a.ldlt().solve(b)));
    throw ValidationError(os.str());
  } catch (const NotPositiveDefinite& e) {
    throw ValidationError(std::string("norm.a: ") + e.what());
  }
}

NormSpec parse_norm(const json& j, int expected_dim) {
  if (!j.is_object()) field_error("norm", "an object");
  reject_unknown_keys(j, "norm.", {"kind", "a", "b"});
  NormSpec spec;
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) field_error("norm.kind", "a string");
    spec.kind = j["kind"].get<std::string>();
  }
  if (spec.kind != "euclidean" && spec.kind != "randers") {
    throw ValidationError("norm.kind must be 'euclidean' or 'randers', got '" + spec.kind + "'");
  }
  if (j.contains("a")) spec.a = get_numbers(j["a"], "norm.a");
  if (j.contains("b")) spec.b = get_numbers(j["b"], "norm.b");
  if (spec.kind == "euclidean" && !spec.b.empty()) {
    for (double v : spec.b) {
      if (v != 0.0) throw ValidationError("norm.b must be zero for a euclidean norm");
    }
  }

  int n_a = -1;
  if (!spec.a.empty()) {
    n_a = static_cast<int>(std::lround(std::sqrt(static_cast<double>(spec.a.size()))));
    if (static_cast<size_t>(n_a) * n_a != spec.a.size()) {
      throw ValidationError("norm.a has " + std::to_string(spec.a.size()) + " entries, which is not a square matrix");
    }
  }
  const int n_b = spec.b.empty() ? -1 : static_cast<int>(spec.b.size());
  if (n_a >= 0 && n_b >= 0 && n_a != n_b) {
    throw ValidationError("norm dimensions disagree: norm.a is " + std::to_string(n_a) + "x" + std::to_string(n_a) +
                          " but norm.b has dimension " + std::to_string(n_b));
  }
  const int n = n_a >= 0 ? n_a : (n_b >= 0 ? n_b : expected_dim);
  if (n != expected_dim) {
    throw ValidationError("norm dimension " + std::to_string(n) + " does not match the model's m dimension " +
                          std::to_string(expected_dim));
  }
  spec.dim = n;
  if (spec.a.empty()) {
    spec.a.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) spec.a[static_cast<size_t>(i) * n + i] = 1.0;
  }
  if (spec.b.empty()) spec.b.assign(n, 0.0);
  build_norm(spec);
  return spec;
}

std::set<std::string> allowed_params(const std::string& task) {
  if (task == "geodesic-vectors") {
    return {"samples", "newton_iters", "tol", "dedup_angle", "branch_link", "check_samples", "check_tol"};
  }
  if (task == "check-nat-reductive" || task == "check-minkowski-lie") return {"samples", "tol"};
  if (task == "integrate-geodesic") return {"x0", "y0", "T", "step", "drift_tol"};
  if (task == "check-homogeneous") return {"X", "T", "step", "tol", "residual_tol"};
  if (task == "s-curvature") return {"x0", "y0", "T", "step", "stride", "dt", "min_nodes", "tol"};
  if (task == "berwald") return {"x0", "samples", "tol"};
  return {};
}

const std::set<std::string> kVectorParams = {"x0", "y0", "X"};
const std::set<std::string> kIntParams = {"samples", "newton_iters", "check_samples", "stride", "min_nodes"};

void validate_params(const Scenario& s, int dim) {
  if (!s.params.is_object()) field_error("params", "an object");
  reject_unknown_keys(s.params, "params.", allowed_params(s.task));
  for (const auto& [key, value] : s.params.items()) {
    const std::string f = "params." + key;
    if (kVectorParams.count(key)) {
      const auto v = get_numbers(value, f);
      if (static_cast<int>(v.size()) != dim) {
        throw ValidationError(f + " has dimension " + std::to_string(v.size()) + " but the model has dimension " +
                              std::to_string(dim));
      }
    } else if (kIntParams.count(key)) {
      if (get_int(value, f) < 1) throw ValidationError(f + " must be positive");
    } else {
      const double v = get_number(value, f);
      if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(f + " must be positive and finite");
    }
  }
}

int model_dim(const ModelSpec& m) {
  if (m.algebra) return m.algebra->dim;
  return make_group_model(m.name)->dim();
}

}  // namespace

const std::vector<std::string>& known_tasks() { return kTasks; }

void fill_defaults(Scenario& s) {
  const int n = s.norm.dim;
  std::vector<double> e1(n, 0.0);
  if (n > 0) e1[0] = 1.0;
  const std::vector<double> zero(n, 0.0);
  json d;
  if (s.task == "geodesic-vectors") {
    d = {{"samples", 512},   {"newton_iters", 50},    {"tol", 1e-9},       {"dedup_angle", 1e-3},
         {"branch_link", 0.15}, {"check_samples", 100}, {"check_tol", 1e-10}};
  } else if (s.task == "check-nat-reductive" || s.task == "check-minkowski-lie") {
    d = {{"samples", 200}, {"tol", 1e-8}};
  } else if (s.task == "integrate-geodesic") {
    d = {{"x0", zero}, {"y0", e1}, {"T", 2.0}, {"step", 1e-3}, {"drift_tol", 1e-6}};
  } else if (s.task == "check-homogeneous") {
    d = {{"X", e1}, {"T", 2.0}, {"step", 1e-3}, {"tol", 1e-5}, {"residual_tol", 1e-9}};
  } else if (s.task == "s-curvature") {
    d = {{"x0", zero}, {"y0", e1}, {"T", 1.0},          {"step", 1e-3},
         {"stride", 50}, {"dt", 1e-3}, {"min_nodes", 10000}, {"tol", 1e-3}};
  } else if (s.task == "berwald") {
    d = {{"x0", zero}, {"samples", 8}, {"tol", 1e-5}};
  }
  for (const auto& [key, value] : d.items()) {
    if (!s.params.contains(key)) s.params[key] = value;
  }
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("scenario must be a JSON object");
  reject_unknown_keys(j, "", {"model", "norm", "task", "params", "seed"});
  Scenario s;
  if (!j.contains("model")) throw ParseError("field 'model': missing");
  const json& m = j["model"];
  if (m.is_string()) {
    s.model.name = m.get<std::string>();
  } else if (m.is_object()) {
    reject_unknown_keys(m, "model.", {"algebra"});
    if (!m.contains("algebra")) throw ParseError("field 'model.algebra': missing");
    s.model.algebra = parse_inline_algebra(m["algebra"]);
  } else {
    field_error("model", "a model name or an {\"algebra\": ...} object");
  }

  int m_dim = 0;
  if (s.model.algebra) {
    m_dim = build_decomposition(*s.model.algebra).m_dim();
  } else {
    m_dim = model_dim(s.model);
  }

  if (!j.contains("norm")) throw ParseError("field 'norm': missing");
  s.norm = parse_norm(j["norm"], m_dim);

  if (!j.contains("task") || !j["task"].is_string()) field_error("task", "a task name");
  s.task = j["task"].get<std::string>();
  if (std::find(kTasks.begin(), kTasks.end(), s.task) == kTasks.end()) {
    throw ValidationError("unknown task '" + s.task + "'");
  }
  if (s.model.algebra && needs_group_model(s.task)) {
    throw ValidationError("task '" + s.task + "' needs a built-in group model, not an inline algebra");
  }

  if (j.contains("params")) s.params = j["params"];
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) field_error("seed", "a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  validate_params(s, m_dim);
  fill_defaults(s);
  return s;
}

Scenario parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is the 1-based offset of the offending character.
    size_t line = 1;
    size_t col = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  return scenario_from_json(j);
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario_text(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

json scenario_to_json(const Scenario& s) {
  json j;
  if (s.model.algebra) {
    const auto& a = *s.model.algebra;
    json br = json::array();
    for (const auto& e : a.brackets) br.push_back({e.i, e.j, e.k, e.c});
    json alg = {{"dim", a.dim}, {"brackets", br}, {"m", a.m}, {"h", a.h}};
    if (!a.names.empty()) alg["names"] = a.names;
    j["model"] = {{"algebra", alg}};
  } else {
    j["model"] = s.model.name;
  }
  j["norm"] = {{"kind", s.norm.kind}, {"a", s.norm.a}, {"b", s.norm.b}};
  j["task"] = s.task;
  j["params"] = s.params;
  j["seed"] = s.seed;
  return j;
}

std::string serialize(const Scenario& s) { return scenario_to_json(s).dump(2); }

ResolvedScenario resolve(const Scenario& s) {
  std::shared_ptr<const GroupModel> model;
  std::optional<ReductiveDecomposition> dec;
  if (s.model.algebra) {
    if (needs_group_model(s.task)) {
      throw ValidationError("task '" + s.task + "' needs a built-in group model, not an inline algebra");
    }
    dec.emplace(build_decomposition(*s.model.algebra));
  } else {
    model = make_group_model(s.model.name);
    dec.emplace(model->decomposition());
  }
  return {std::move(*dec), model, build_norm(s.norm)};
}

std::string scenario_digest(const Scenario& s) {
  const std::string text = scenario_to_json(s).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace finslergeo
