#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "lsinv/geometry.hpp"
#include "lsinv/harness.hpp"
#include "lsinv/shapes.hpp"

namespace lsinv {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lsinv_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig small_config(const std::string& dir) {
  ExperimentConfig cfg;
  cfg.grid_n = 65;
  cfg.evolution.max_steps = 10;
  cfg.output_dir = scratch_dir(dir);
  cfg.snapshot_every = 5;
  return cfg;
}

TEST(Phantom, AreaAndSign) {
  ExperimentConfig cfg;
  const Phantom p = make_phantom(cfg);
  EXPECT_NEAR(region_area(p.phi_true), std::numbers::pi * 0.09, 2.0 * cfg.grid().h());
  EXPECT_NEAR(inner_product(p.u_true, ScalarField(cfg.grid(), 1.0)), std::numbers::pi * 0.09, 2.0 * cfg.grid().h());
  EXPECT_LE(p.y_clean.max(), 0.0);
  EXPECT_LT(p.y_clean.min(), 0.0);
}

TEST(Noise, ZeroIsBitwiseAndLevelIsExact) {
  const Phantom p = make_phantom(ExperimentConfig{});
  EXPECT_EQ(add_noise(p.y_clean, 0.0, 4), p.y_clean);
  for (double delta : {0.01, 0.1}) {
    const ScalarField y = add_noise(p.y_clean, delta, 4);
    EXPECT_NEAR(l2_norm(y - p.y_clean) / l2_norm(p.y_clean), delta, 1e-12);
  }
  EXPECT_EQ(add_noise(p.y_clean, 0.05, 9), add_noise(p.y_clean, 0.05, 9));
  EXPECT_NE(add_noise(p.y_clean, 0.05, 9), add_noise(p.y_clean, 0.05, 10));
  EXPECT_THROW(add_noise(p.y_clean, -0.1, 1), std::invalid_argument);
}

TEST(Config, DefaultsAndRoundTrip) {
  const ExperimentConfig def = parse_config(nlohmann::json::object());
  EXPECT_EQ(def.grid_n, 129);
  EXPECT_EQ(def.evolution.method, EvolutionMethod::InverseScaleSpace);
  EXPECT_EQ(def.evolution.max_steps, 200);

  const auto doc = nlohmann::json::parse(R"({
    "grid": 65,
    "truth": {"kind": "ellipse", "center": [0.5, 0.45], "radii": [0.3, 0.2], "rotation": 0.4},
    "initial": {"kind": "disk", "center": [0.5, 0.5], "radius": 0.15},
    "noise": 0.02, "seed": 12, "output_dir": "somewhere", "snapshot_every": 0,
    "evolution": {"method": "santosa", "dt": 20, "max_steps": 15, "eps_multiple": 2.0, "reinit_every": 5,
                  "stop_factor": 1.5, "solver": {"method": "cg", "tol": 1e-9, "max_iter": 500},
                  "grad_floor": 1e-5, "backtracking": false, "max_halvings": 4}
  })");
  const ExperimentConfig cfg = parse_config(doc);
  EXPECT_EQ(cfg.truth.kind, ShapeDescriptor::Kind::Ellipse);
  EXPECT_EQ(cfg.evolution.method, EvolutionMethod::Santosa);
  EXPECT_EQ(cfg.evolution.solver.method, SolverMethod::ConjugateGradient);
  EXPECT_EQ(cfg.evolution.max_halvings, 4);
  EXPECT_FALSE(cfg.evolution.backtracking);
  EXPECT_EQ(cfg.seed, 12u);
  EXPECT_EQ(to_json(parse_config(to_json(cfg))), to_json(cfg));
}

TEST(Config, UnknownKeysRejectedAtEveryLevel) {
  for (const char* text : {R"({"gird": 65})", R"({"truth": {"radius": 0.3, "colour": 1}})",
                           R"({"evolution": {"stepsize": 1}})", R"({"evolution": {"solver": {"tolerance": 1}}})"}) {
    EXPECT_THROW(parse_config(nlohmann::json::parse(text)), ConfigError) << text;
  }
}

TEST(Config, InvalidValuesRejected) {
  for (const char* text :
       {R"({"grid": 5})", R"({"noise": -0.1})", R"({"truth": {"center": [0.1, 0.5], "radius": 0.3}})",
        R"({"initial": {"kind": "square", "radius": 0.1}})", R"({"evolution": {"method": "newton"}})",
        R"({"evolution": {"dt": 0}})", R"({"evolution": {"eps_multiple": 0.5}})", R"({"grid": "big"})",
        R"({"truth": {"kind": "ellipse", "radius": 0.2}})"}) {
    EXPECT_THROW(parse_config(nlohmann::json::parse(text)), ConfigError) << text;
  }
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, ShapeMarginIsFourCells) {
  // 4h at 65 nodes is 1/16; a disk 0.07 from the side is allowed, 0.06 is not.
  EXPECT_NO_THROW(parse_config(nlohmann::json::parse(R"({"grid": 65, "truth": {"center": [0.37, 0.5], "radius": 0.3}})")));
  EXPECT_THROW(parse_config(nlohmann::json::parse(R"({"grid": 65, "truth": {"center": [0.36, 0.5], "radius": 0.3}})")),
               ConfigError);
}

TEST(Pgm, HeaderAndOrientation) {
  const fs::path dir = scratch_dir("pgm");
  fs::create_directories(dir);
  const GridSpec g = GridSpec::unit_square(9);
  const ScalarField f = ScalarField::sample(g, [](double, double y) { return 2.0 * y - 1.0; });
  write_pgm(dir / "f.pgm", f);
  const std::string bytes = slurp(dir / "f.pgm");
  const std::string header = "P5\n# min=-1 max=1\n9 9\n255\n";
  ASSERT_EQ(bytes.substr(0, header.size()), header);
  ASSERT_EQ(bytes.size(), header.size() + 81);
  EXPECT_EQ(static_cast<unsigned char>(bytes[header.size()]), 255);
  EXPECT_EQ(static_cast<unsigned char>(bytes.back()), 0);
}

TEST(RunExperiment, WritesArtifacts) {
  const ExperimentConfig cfg = small_config("artifacts");
  const ExperimentReport rep = run_experiment(cfg);
  EXPECT_TRUE(fs::exists(cfg.output_dir / "trace.csv"));
  EXPECT_TRUE(fs::exists(cfg.output_dir / "final_metrics.json"));
  EXPECT_TRUE(fs::exists(cfg.output_dir / "phi_0000.pgm"));
  EXPECT_TRUE(fs::exists(cfg.output_dir / "u_0005.pgm"));
  EXPECT_TRUE(fs::exists(cfg.output_dir / "phi_0010.pgm"));

  const auto metrics = nlohmann::json::parse(slurp(cfg.output_dir / "final_metrics.json"));
  EXPECT_EQ(metrics.at("trace_format_version"), kTraceFormatVersion);
  EXPECT_EQ(metrics.at("steps"), 10);
  EXPECT_LT(metrics.at("final_symmetric_difference").get<double>(),
            metrics.at("initial_symmetric_difference").get<double>());

  std::istringstream trace(slurp(cfg.output_dir / "trace.csv"));
  std::string line;
  std::getline(trace, line);
  EXPECT_EQ(line, "step,t,residual,area,perimeter");
  int rows = 0;
  while (std::getline(trace, line)) ++rows;
  EXPECT_EQ(rows, 11);
}

TEST(RunExperiment, TrueShapeAsInitialGuessStopsImmediately) {
  ExperimentConfig cfg = small_config("exact");
  cfg.initial = cfg.truth;
  const ExperimentReport rep = run_experiment(cfg);
  EXPECT_EQ(rep.result.status, EvolutionStatus::Converged);
  EXPECT_EQ(rep.result.trace.steps.size(), 1u);
  EXPECT_EQ(rep.metrics.at("final_symmetric_difference").get<double>(), 0.0);
}

TEST(RunExperiment, TraceBytesAreReproducible) {
  ExperimentConfig a = small_config("repro_a");
  a.noise = 0.01;
  a.seed = 77;
  ExperimentConfig b = a;
  b.output_dir = scratch_dir("repro_b");
  run_experiment(a);
  run_experiment(b);
  EXPECT_EQ(slurp(a.output_dir / "trace.csv"), slurp(b.output_dir / "trace.csv"));
}

TEST(RunExperiment, MethodsShareTheInitialResidual) {
  ExperimentConfig iss = small_config("iss");
  iss.evolution.max_steps = 2;
  ExperimentConfig santosa = iss;
  santosa.output_dir = scratch_dir("santosa");
  santosa.evolution = ExperimentConfig::default_evolution(EvolutionMethod::Santosa);
  santosa.evolution.max_steps = 2;
  const ExperimentReport a = run_experiment(iss);
  const ExperimentReport b = run_experiment(santosa);
  EXPECT_EQ(a.result.trace.initial.residual, b.result.trace.initial.residual);
}

TEST(RunExperiment, NoiseStopsAtDiscrepancyPrinciple) {
  ExperimentConfig cfg = small_config("noisy");
  cfg.noise = 0.05;
  cfg.evolution.max_steps = 200;
  const ExperimentReport rep = run_experiment(cfg);
  EXPECT_EQ(rep.result.status, EvolutionStatus::Converged);
  const StepRecord& last = rep.result.trace.steps.back();
  EXPECT_LE(std::min(last.residual, last.residual_sharp), rep.metrics.at("stop_discrepancy").get<double>());
}

TEST(Method, Names) {
  EXPECT_EQ(parse_method("iss"), EvolutionMethod::InverseScaleSpace);
  EXPECT_EQ(parse_method("santosa"), EvolutionMethod::Santosa);
  EXPECT_THROW(parse_method("ISS"), std::invalid_argument);
  EXPECT_STREQ(to_string(EvolutionMethod::Santosa), "santosa");
}

}  // namespace
}  // namespace lsinv
