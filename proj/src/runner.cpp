#include "finslergeo/errors.hpp"
#include "finslergeo/geodesic_flow.hpp"
#include "finslergeo/s_curvature.hpp"
#include "finslergeo/sampling.hpp"
#include "finslergeo/scenario.hpp"

#include <chrono>
#include <iomanip>
#include <sstream>

namespace finslergeo {

using nlohmann::json;

namespace {

Vec to_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json to_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::string basis_name(const LieAlgebra& alg, int i) {
  if (i >= 0 && i < static_cast<int>(alg.basis_names().size())) return alg.basis_names()[i];
  return "e" + std::to_string(i + 1);
}

struct TaskResult {
  bool passed = false;
  json tolerances = json::object();
  json payload = json::object();
  std::vector<std::vector<double>> trajectory;
};

TaskResult run_geodesic_vectors(const Scenario& s, const ResolvedScenario& r) {
  const json& p = s.params;
  SolverOptions opts;
  opts.samples = p["samples"].get<int>();
  opts.newton_iters = p["newton_iters"].get<int>();
  opts.tol = p["tol"].get<double>();
  opts.dedup_angle = p["dedup_angle"].get<double>();
  opts.branch_link = p["branch_link"].get<double>();
  const GeodesicVectorSet set = find_geodesic_vectors(r.decomposition, r.norm, opts);

  TaskResult out;
  out.tolerances = {{"tol", opts.tol}, {"check_tol", p["check_tol"]}};
  json reps = json::array();
  for (size_t i = 0; i < set.representatives.size(); ++i) {
    reps.push_back({{"x", to_json(set.representatives[i])},
                    {"residual", set.residual_norms[i]},
                    {"component", set.branch_labels[i]},
                    {"local_dim", set.local_dims[i]}});
  }
  json spans = json::array();
  for (const BranchSpan& sp : branch_spans(set)) {
    json basis = json::array();
    for (int c = 0; c < sp.basis.cols(); ++c) basis.push_back(to_json(sp.basis.col(c)));
    spans.push_back({{"components", sp.components}, {"members", sp.members}, {"span_dim", sp.span_dim},
                     {"basis", basis}});
  }

  // Independent random sample of directions in m.
  std::mt19937_64 rng(s.seed);
  const int check_samples = p["check_samples"].get<int>();
  const double check_tol = p["check_tol"].get<double>();
  int geodesic_count = 0;
  double worst = 0.0;
  Vec worst_x;
  for (int k = 0; k < check_samples; ++k) {
    const Vec x = r.decomposition.embed_m(random_unit_vector(r.decomposition.m_dim(), rng));
    const double res = geodesic_residual(r.decomposition, r.norm, x).norm();
    if (res <= check_tol) ++geodesic_count;
    if (res >= worst) {
      worst = res;
      worst_x = x;
    }
  }

  out.payload = {{"representatives", reps},
                 {"components", set.branch_count()},
                 {"branches", spans},
                 {"branch_count", spans.size()},
                 {"seeds", set.seeds},
                 {"converged", set.converged},
                 {"no_convergence", set.no_convergence},
                 {"degenerate", set.degenerate},
                 {"random_check",
                  {{"samples", check_samples},
                   {"geodesic", geodesic_count},
                   {"max_residual", worst},
                   {"max_residual_x", to_json(worst_x)},
                   {"all_sampled_geodesic", geodesic_count == check_samples}}}};
  out.passed = !set.representatives.empty();
  return out;
}

TaskResult run_scan(const Scenario& s, const ResolvedScenario& r) {
  const int samples = s.params["samples"].get<int>();
  const double tol = s.params["tol"].get<double>();
  const bool nat = s.task == "check-nat-reductive";
  const ScanReport rep = nat ? check_naturally_reductive(r.decomposition, r.norm, samples, s.seed, tol)
                             : check_minkowski_lie_algebra(r.decomposition.algebra(), r.norm, samples, s.seed, tol);
  TaskResult out;
  out.tolerances = {{"tol", tol}};
  out.passed = rep.passed;
  out.payload = {{"passed", rep.passed}, {"max_residual", rep.max_residual}, {"samples", rep.samples}};
  if (rep.witness_x >= 0) {
    // Witness basis indices refer to m for the natural-reductive scan and to g otherwise.
    auto name = [&](int i) {
      return basis_name(r.decomposition.algebra(), nat ? r.decomposition.m_indices()[i] : i);
    };
    out.payload["witness"] = {{"y", to_json(rep.witness_y)},
                              {"x", name(rep.witness_x)},
                              {"u", name(rep.witness_u)},
                              {"v", name(rep.witness_v)}};
  }
  return out;
}

TaskResult run_integrate(const Scenario& s, const ResolvedScenario& r) {
  const json& p = s.params;
  const ChartMetric cm(r.model, r.norm);
  const Vec x0 = to_vec(p["x0"]);
  const Vec y0 = to_vec(p["y0"]);
  const double drift_tol = p["drift_tol"].get<double>();
  const GeodesicPath path = integrate_geodesic(cm, x0, y0, p["T"].get<double>(), p["step"].get<double>());
  TaskResult out;
  out.tolerances = {{"drift_tol", drift_tol}};
  const double drift = path.max_relative_drift();
  out.passed = drift <= drift_tol;
  out.payload = {{"method", path.method},
                 {"samples", path.samples.size()},
                 {"F0", path.samples.front().F},
                 {"final_x", to_json(path.samples.back().x)},
                 {"final_y", to_json(path.samples.back().y)},
                 {"max_relative_F_drift", drift}};
  for (const PathSample& ps : path.samples) {
    std::vector<double> row{ps.t};
    row.insert(row.end(), ps.x.data(), ps.x.data() + ps.x.size());
    row.insert(row.end(), ps.y.data(), ps.y.data() + ps.y.size());
    row.push_back(ps.F);
    out.trajectory.push_back(std::move(row));
  }
  return out;
}

TaskResult run_homogeneous(const Scenario& s, const ResolvedScenario& r) {
  const json& p = s.params;
  const HomogeneityReport rep =
      is_homogeneous_geodesic(r.model, r.norm, to_vec(p["X"]), p["T"].get<double>(), p["step"].get<double>(),
                              p["tol"].get<double>(), p["residual_tol"].get<double>());
  TaskResult out;
  out.tolerances = {{"tol", rep.tol}, {"residual_tol", p["residual_tol"]}};
  out.passed = rep.consistent;
  out.payload = {{"X", to_json(rep.x)},
                 {"orbit_is_geodesic", rep.passed},
                 {"sup_distance", rep.sup_distance},
                 {"residual_norm", rep.residual_norm},
                 {"criterion_agrees", rep.consistent},
                 {"max_relative_F_drift", rep.max_F_drift}};
  return out;
}

TaskResult run_s_curvature(const Scenario& s, const ResolvedScenario& r) {
  const json& p = s.params;
  const ChartMetric cm(r.model, r.norm);
  const Vec x0 = to_vec(p["x0"]);
  const Vec y0 = to_vec(p["y0"]);
  const int min_nodes = p["min_nodes"].get<int>();
  const double tol = p["tol"].get<double>();
  const GeodesicPath path = integrate_geodesic(cm, x0, y0, p["T"].get<double>(), p["step"].get<double>());
  const SCurvatureTrace trace = s_along_path(cm, path, p["stride"].get<int>(), min_nodes);
  const double s0 = s_curvature(cm, x0, y0, p["dt"].get<double>(), min_nodes);
  TaskResult out;
  out.tolerances = {{"tol", tol}};
  json rows = json::array();
  for (size_t i = 0; i < trace.t.size(); ++i) {
    rows.push_back({{"t", trace.t[i]}, {"tau", trace.tau[i]}, {"S", trace.S[i]}, {"error", trace.error_bound[i]}});
  }
  const double max_s = std::max(std::abs(s0), trace.max_abs_S());
  out.passed = max_s <= tol;
  out.payload = {{"S_at_start", s0},
                 {"max_abs_S", max_s},
                 {"max_tau_deviation", trace.max_tau_deviation()},
                 {"quadrature_nodes", busemann_sigma(cm, x0, min_nodes).quadrature_nodes},
                 {"rows", rows}};
  return out;
}

TaskResult run_berwald(const Scenario& s, const ResolvedScenario& r) {
  const json& p = s.params;
  const ChartMetric cm(r.model, r.norm);
  const BerwaldReport rep =
      berwald_test(cm, to_vec(p["x0"]), p["samples"].get<int>(), s.seed, p["tol"].get<double>());
  TaskResult out;
  out.tolerances = {{"tol", rep.tol}};
  out.passed = rep.passed;
  out.payload = {{"berwald", rep.passed},
                 {"max_hessian_spread", rep.max_hessian_spread},
                 {"max_G", rep.max_G},
                 {"samples", rep.samples}};
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

}  // namespace

RunReport run(const Scenario& s) {
  const auto start = std::chrono::steady_clock::now();
  const ResolvedScenario r = resolve(s);
  TaskResult res;
  if (s.task == "geodesic-vectors") {
    res = run_geodesic_vectors(s, r);
  } else if (s.task == "check-nat-reductive" || s.task == "check-minkowski-lie") {
    res = run_scan(s, r);
  } else if (s.task == "integrate-geodesic") {
    res = run_integrate(s, r);
  } else if (s.task == "check-homogeneous") {
    res = run_homogeneous(s, r);
  } else if (s.task == "s-curvature") {
    res = run_s_curvature(s, r);
  } else if (s.task == "berwald") {
    res = run_berwald(s, r);
  } else {
    throw ValidationError("unknown task '" + s.task + "'");
  }
  RunReport rep;
  rep.task = s.task;
  rep.passed = res.passed;
  rep.trajectory = std::move(res.trajectory);
  rep.body = {{"tool", "finslergeo"},
              {"version", kToolVersion},
              {"scenario_digest", scenario_digest(s)},
              {"model", s.model.algebra ? "inline" : s.model.name},
              {"norm", r.norm.label()},
              {"task", s.task},
              {"seed", s.seed},
              {"tolerances", res.tolerances},
              {"passed", res.passed},
              {"result", res.payload}};
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string RunReport::machine() const { return body.dump(2) + "\n"; }

std::string RunReport::text() const {
  std::ostringstream os;
  const json& res = body["result"];
  os << "finslergeo " << body["version"].get<std::string>() << "  task " << task << "  scenario "
     << body["scenario_digest"].get<std::string>() << "\n";
  os << "model: " << body["model"].get<std::string>() << "  norm: " << body["norm"].get<std::string>()
     << "  seed: " << body["seed"].get<std::uint64_t>() << "\n";
  if (task == "geodesic-vectors") {
    os << "representatives: " << res["representatives"].size() << " (" << res["converged"].get<int>() << " of "
       << res["seeds"].get<int>() << " seeds converged)\n";
    os << "zero set branches (linear spans): " << res["branch_count"].get<int>() << "\n";
    int listed = 0;
    for (const auto& b : res["branches"]) {
      if (++listed > 10) {
        os << "  ...\n";
        break;
      }
      os << "  span dim " << b["span_dim"].get<int>() << ", " << b["members"].get<int>() << " representatives\n";
    }
    const json& rc = res["random_check"];
    os << "all sampled vectors geodesic: " << (rc["all_sampled_geodesic"].get<bool>() ? "true" : "false") << " ("
       << rc["geodesic"].get<int>() << "/" << rc["samples"].get<int>()
       << ", max residual " << fmt(rc["max_residual"].get<double>()) << ")\n";
  } else if (task == "check-nat-reductive" || task == "check-minkowski-lie") {
    os << "max residual: " << fmt(res["max_residual"].get<double>()) << " over " << res["samples"].get<int>()
       << " samples\n";
    if (res.contains("witness")) {
      const json& w = res["witness"];
      os << "max-residual sample: y = " << w["y"].dump() << ", x = " << w["x"].get<std::string>()
         << ", u = " << w["u"].get<std::string>() << ", v = " << w["v"].get<std::string>() << "\n";
    }
  } else if (task == "integrate-geodesic") {
    os << "samples: " << res["samples"].get<int>() << "  F0: " << fmt(res["F0"].get<double>())
       << "  max relative F drift: " << fmt(res["max_relative_F_drift"].get<double>()) << "\n";
    os << "final x: " << res["final_x"].dump() << "\n";
  } else if (task == "check-homogeneous") {
    os << "X: " << res["X"].dump() << "\n";
    os << "orbit vs ODE sup distance: " << fmt(res["sup_distance"].get<double>())
       << "  geodesic residual: " << fmt(res["residual_norm"].get<double>()) << "\n";
    os << "orbit is geodesic: " << (res["orbit_is_geodesic"].get<bool>() ? "true" : "false")
       << "  criterion agrees: " << (res["criterion_agrees"].get<bool>() ? "true" : "false") << "\n";
  } else if (task == "s-curvature") {
    os << std::setw(10) << "t" << std::setw(16) << "tau" << std::setw(16) << "S" << std::setw(14) << "error"
       << "\n";
    for (const auto& row : res["rows"]) {
      os << std::setw(10) << fmt(row["t"].get<double>()) << std::setw(16) << fmt(row["tau"].get<double>())
         << std::setw(16) << fmt(row["S"].get<double>()) << std::setw(14) << fmt(row["error"].get<double>())
         << "\n";
    }
    os << "S at start: " << fmt(res["S_at_start"].get<double>())
       << "  max |S|: " << fmt(res["max_abs_S"].get<double>())
       << "  max tau deviation: " << fmt(res["max_tau_deviation"].get<double>()) << "\n";
  } else if (task == "berwald") {
    os << "Berwald: " << (res["berwald"].get<bool>() ? "true" : "false")
       << "  max Hessian spread: " << fmt(res["max_hessian_spread"].get<double>()) << "\n";
  }
  os << "result: " << (passed ? "PASS" : "FAIL") << "\n";
  os << "wall time: " << fmt(wall_seconds) << " s\n";
  return os.str();
}

}  // namespace finslergeo
