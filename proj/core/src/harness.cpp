#include "lsinv/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "lsinv/elliptic.hpp"
#include "lsinv/geometry.hpp"

namespace lsinv {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

Vec2 read_point(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(where + ": expected [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

ShapeDescriptor parse_shape(const json& obj, const std::string& where) {
  reject_unknown_keys(obj, {"kind", "center", "radius", "radii", "rotation"}, where);
  std::string kind = "disk";
  read(obj, "kind", kind, where);
  ShapeDescriptor s;
  if (obj.contains("center")) s.center = read_point(obj.at("center"), where + ".center");
  if (kind == "disk") {
    if (!obj.contains("radius")) throw ConfigError(where + ": disk needs 'radius'");
    if (obj.contains("radii") || obj.contains("rotation")) {
      throw ConfigError(where + ": 'radii'/'rotation' only apply to ellipses");
    }
    double r = 0.0;
    read(obj, "radius", r, where);
    return ShapeDescriptor::disk(s.center, r);
  }
  if (kind == "ellipse") {
    if (!obj.contains("radii")) throw ConfigError(where + ": ellipse needs 'radii'");
    if (obj.contains("radius")) throw ConfigError(where + ": ellipse takes 'radii', not 'radius'");
    const Vec2 radii = read_point(obj.at("radii"), where + ".radii");
    double rot = 0.0;
    read(obj, "rotation", rot, where);
    return ShapeDescriptor::ellipse(s.center, radii.x, radii.y, rot);
  }
  throw ConfigError(where + ".kind: expected 'disk' or 'ellipse'");
}

json shape_to_json(const ShapeDescriptor& s) {
  json j;
  j["center"] = {s.center.x, s.center.y};
  if (s.kind == ShapeDescriptor::Kind::Disk) {
    j["kind"] = "disk";
    j["radius"] = s.radius_x;
  } else {
    j["kind"] = "ellipse";
    j["radii"] = {s.radius_x, s.radius_y};
    j["rotation"] = s.rotation;
  }
  return j;
}

SolverMethod parse_solver_method(const std::string& name) {
  if (name == "direct") return SolverMethod::DirectSparse;
  if (name == "cg") return SolverMethod::ConjugateGradient;
  throw ConfigError("solver.method: expected 'direct' or 'cg'");
}

void parse_evolution(const json& obj, ExperimentConfig& cfg) {
  const std::string where = "evolution";
  reject_unknown_keys(obj,
                      {"method", "dt", "max_steps", "eps_multiple", "reinit_every", "stop_factor", "solver",
                       "grad_floor", "backtracking", "max_halvings"},
                      where);
  if (obj.contains("method")) {
    std::string m;
    read(obj, "method", m, where);
    try {
      cfg.evolution = ExperimentConfig::default_evolution(parse_method(m));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ".method: " + e.what());
    }
  }
  EvolutionConfig& e = cfg.evolution;
  read(obj, "dt", e.dt, where);
  read(obj, "max_steps", e.max_steps, where);
  read(obj, "eps_multiple", cfg.eps_multiple, where);
  read(obj, "reinit_every", e.reinit_every, where);
  read(obj, "stop_factor", cfg.stop_factor, where);
  read(obj, "grad_floor", e.grad_floor, where);
  read(obj, "backtracking", e.backtracking, where);
  read(obj, "max_halvings", e.max_halvings, where);
  if (obj.contains("solver")) {
    const json& s = obj.at("solver");
    reject_unknown_keys(s, {"method", "tol", "max_iter"}, where + ".solver");
    if (s.contains("method")) {
      std::string m;
      read(s, "method", m, where + ".solver");
      e.solver.method = parse_solver_method(m);
    }
    read(s, "tol", e.solver.tol, where + ".solver");
    read(s, "max_iter", e.solver.max_iter, where + ".solver");
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string snapshot_name(const char* prefix, int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%04d.pgm", prefix, step);
  return buf;
}

}  // namespace

EvolutionMethod parse_method(const std::string& name) {
  if (name == "iss") return EvolutionMethod::InverseScaleSpace;
  if (name == "santosa") return EvolutionMethod::Santosa;
  throw std::invalid_argument("unknown method '" + name + "' (expected iss or santosa)");
}

const char* to_string(EvolutionMethod m) {
  return m == EvolutionMethod::InverseScaleSpace ? "iss" : "santosa";
}

EvolutionConfig ExperimentConfig::default_evolution(EvolutionMethod method) {
  EvolutionConfig e;
  e.method = method;
  e.max_steps = 200;
  if (method == EvolutionMethod::InverseScaleSpace) {
    e.dt = 1000.0;
    e.reinit_every = 0;
  } else {
    // The unpreconditioned speed acts on every node; larger trial steps tear
    // the level set into many spurious components.
    e.dt = 50.0;
    e.reinit_every = 20;
  }
  return e;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.grid_n < 9) throw ConfigError("grid: need at least 9 nodes per axis");
  if (!(cfg.noise >= 0.0)) throw ConfigError("noise: must be >= 0");
  if (!(cfg.stop_factor > 0.0)) throw ConfigError("evolution.stop_factor: must be positive");
  if (!(cfg.eps_multiple >= 1.0)) throw ConfigError("evolution.eps_multiple: must be at least 1");
  if (cfg.snapshot_every < 0) throw ConfigError("snapshot_every: must be >= 0");
  const GridSpec g = cfg.grid();
  const double margin = 4.0 * g.h();
  for (const auto& [name, shape] : {std::pair{"truth", cfg.truth}, std::pair{"initial", cfg.initial}}) {
    if (!(shape.radius_x > 0.0) || !(shape.radius_y > 0.0)) {
      throw ConfigError(std::string(name) + ": radii must be positive");
    }
    if (!fits_inside(shape, g.bounds(), margin)) {
      throw ConfigError(std::string(name) + ": shape must stay at least 4h inside the domain");
    }
  }
  EvolutionConfig e = cfg.evolution;
  e.eps = SmoothingParam::grid_relative(g, cfg.eps_multiple);
  try {
    validate(e, g);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
}

ExperimentConfig parse_config(const json& doc) {
  reject_unknown_keys(doc,
                      {"grid", "truth", "initial", "noise", "seed", "output_dir", "snapshot_every", "evolution"},
                      "config");
  ExperimentConfig cfg;
  read(doc, "grid", cfg.grid_n, "config");
  if (doc.contains("truth")) cfg.truth = parse_shape(doc.at("truth"), "truth");
  if (doc.contains("initial")) cfg.initial = parse_shape(doc.at("initial"), "initial");
  read(doc, "noise", cfg.noise, "config");
  read(doc, "seed", cfg.seed, "config");
  if (doc.contains("output_dir")) {
    std::string dir;
    read(doc, "output_dir", dir, "config");
    cfg.output_dir = dir;
  }
  read(doc, "snapshot_every", cfg.snapshot_every, "config");
  if (doc.contains("evolution")) parse_evolution(doc.at("evolution"), cfg);
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  const EvolutionConfig& e = cfg.evolution;
  json solver = {{"method", e.solver.method == SolverMethod::DirectSparse ? "direct" : "cg"},
                 {"tol", e.solver.tol},
                 {"max_iter", e.solver.max_iter}};
  return {{"grid", cfg.grid_n},
          {"truth", shape_to_json(cfg.truth)},
          {"initial", shape_to_json(cfg.initial)},
          {"noise", cfg.noise},
          {"seed", cfg.seed},
          {"output_dir", cfg.output_dir.string()},
          {"snapshot_every", cfg.snapshot_every},
          {"evolution",
           {{"method", to_string(e.method)},
            {"dt", e.dt},
            {"max_steps", e.max_steps},
            {"eps_multiple", cfg.eps_multiple},
            {"reinit_every", e.reinit_every},
            {"stop_factor", cfg.stop_factor},
            {"solver", solver},
            {"grad_floor", e.grad_floor},
            {"backtracking", e.backtracking},
            {"max_halvings", e.max_halvings}}}};
}

Phantom make_phantom(const ExperimentConfig& cfg) {
  validate(cfg);
  const GridSpec g = cfg.grid();
  ScalarField phi = signed_distance_field(cfg.truth, g);
  ScalarField u = apply_P(phi);
  ScalarField y = forward(u, cfg.evolution.solver);
  return {std::move(phi), std::move(u), std::move(y)};
}

ScalarField add_noise(const ScalarField& y, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw std::invalid_argument("add_noise: delta must be >= 0");
  if (delta == 0.0) return y;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ScalarField g(y.spec());
  for (double& v : g.values()) v = normal(rng);
  const double scale = delta * l2_norm(y) / l2_norm(g);
  ScalarField out = y;
  auto o = out.values();
  auto gv = g.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] += scale * gv[k];
  return out;
}

void write_pgm(const std::filesystem::path& path, const ScalarField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const double lo = f.min();
  const double hi = f.max();
  const GridSpec& g = f.spec();
  out << "P5\n# min=" << format_double(lo) << " max=" << format_double(hi) << "\n"
      << g.nx() << ' ' << g.ny() << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(g.nx()));
  for (int j = g.ny() - 1; j >= 0; --j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double s = hi > lo ? (f(i, j) - lo) / (hi - lo) : 0.0;
      row[static_cast<std::size_t>(i)] = static_cast<unsigned char>(std::lround(255.0 * s));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_trace_csv(std::ostream& out, const EvolutionTrace& trace) {
  out << "step,t,residual,area,perimeter\n";
  auto line = [&out](const StepRecord& r) {
    out << r.step << ',' << format_double(r.t) << ',' << format_double(r.residual) << ','
        << format_double(r.area) << ',' << format_double(r.perimeter) << '\n';
  };
  line(trace.initial);
  for (const auto& r : trace.steps) line(r);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());

  const GridSpec g = cfg.grid();
  const Phantom phantom = make_phantom(cfg);
  const ScalarField y = add_noise(phantom.y_clean, cfg.noise, cfg.seed);
  const double y_norm = l2_norm(phantom.y_clean);

  EvolutionConfig evo = cfg.evolution;
  evo.eps = SmoothingParam::grid_relative(g, cfg.eps_multiple);
  // The residual cannot be resolved below the solver tolerance.
  evo.stop_discrepancy = cfg.stop_factor * cfg.noise * y_norm + 10.0 * evo.solver.tol * y_norm;

  const ScalarField phi0 = signed_distance_field(cfg.initial, g);

  auto snapshot = [&](int k, const ScalarField& phi) {
    write_pgm(cfg.output_dir / snapshot_name("phi", k), phi);
    write_pgm(cfg.output_dir / snapshot_name("u", k), apply_P(phi));
  };
  snapshot(0, phi0);
  int last_written = 0;

  const auto start = std::chrono::steady_clock::now();
  EvolutionResult result = run(phi0, y, evo, [&](int k, const ScalarField& phi) {
    if (cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0) {
      snapshot(k, phi);
      last_written = k;
    }
  });
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const int steps = static_cast<int>(result.trace.steps.size());
  if (steps > 0 && last_written != steps) snapshot(steps, result.phi);

  {
    const fs::path trace_path = cfg.output_dir / "trace.csv";
    std::ofstream out(trace_path);
    if (!out) throw std::runtime_error("cannot write " + trace_path.string());
    write_trace_csv(out, result.trace);
  }

  const StepRecord& last = steps > 0 ? result.trace.steps.back() : result.trace.initial;
  json metrics = {
      {"trace_format_version", kTraceFormatVersion},
      {"method", to_string(evo.method)},
      {"status", to_string(result.status)},
      {"diagnostic", result.diagnostic},
      {"steps", steps},
      {"initial_residual", result.trace.initial.residual},
      {"final_residual", last.residual},
      {"final_residual_sharp", last.residual_sharp},
      {"stop_discrepancy", evo.stop_discrepancy},
      {"true_area", region_area(phantom.phi_true)},
      {"final_area", last.area},
      {"initial_symmetric_difference", symmetric_difference_area(phi0, phantom.phi_true)},
      {"final_symmetric_difference", symmetric_difference_area(result.phi, phantom.phi_true)},
      {"wall_clock_per_step_s", steps > 0 ? seconds / steps : 0.0},
      {"warnings", result.trace.warnings},
      {"config", to_json(cfg)},
  };
  {
    const fs::path metrics_path = cfg.output_dir / "final_metrics.json";
    std::ofstream out(metrics_path);
    if (!out) throw std::runtime_error("cannot write " + metrics_path.string());
    out << metrics.dump(2) << '\n';
  }
  return {std::move(result), std::move(metrics)};
}

}  // namespace lsinv
