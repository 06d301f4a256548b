// Command line front end: phantom generation, inversion runs and the
// numerical check batteries.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lsinv/checks.hpp"
#include "lsinv/geometry.hpp"
#include "lsinv/harness.hpp"

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> method;
};

lsinv::ExperimentConfig resolve_config(const CommonOptions& opt) {
  lsinv::ExperimentConfig cfg = opt.config.empty() ? lsinv::ExperimentConfig{} : lsinv::load_config(opt.config);
  if (!opt.out.empty()) cfg.output_dir = opt.out;
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.method) {
    const int steps = cfg.evolution.max_steps;
    cfg.evolution = lsinv::ExperimentConfig::default_evolution(lsinv::parse_method(*opt.method));
    cfg.evolution.max_steps = steps;
  }
  lsinv::validate(cfg);
  return cfg;
}

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_method) {
  cmd->add_option("--config", opt.config, "JSON experiment configuration")->check(CLI::ExistingFile);
  cmd->add_option("--out", opt.out, "Output directory");
  cmd->add_option("--seed", opt.seed, "RNG seed for the noise");
  if (with_method) {
    cmd->add_option("--method", opt.method, "Evolution method")->check(CLI::IsMember({"iss", "santosa"}));
  }
}

int report_checks(const std::string& title, const std::vector<lsinv::CheckResult>& results, const std::string& out) {
  bool ok = true;
  std::cout << title << '\n';
  for (const auto& r : results) {
    std::cout << (r.passed ? "  PASS  " : "  FAIL  ") << r.name << ": " << r.value << " (bound " << r.bound
              << ")\n";
    ok = ok && r.passed;
  }
  if (!out.empty()) {
    fs::create_directories(out);
    std::ofstream(fs::path(out) / (title + ".json")) << lsinv::to_json(results).dump(2) << '\n';
  }
  return ok ? 0 : 1;
}

int cmd_forward(const CommonOptions& opt) {
  const auto cfg = resolve_config(opt);
  fs::create_directories(cfg.output_dir);
  const auto phantom = lsinv::make_phantom(cfg);
  const auto y = lsinv::add_noise(phantom.y_clean, cfg.noise, cfg.seed);
  lsinv::write_pgm(cfg.output_dir / "u_true.pgm", phantom.u_true);
  lsinv::write_pgm(cfg.output_dir / "y_clean.pgm", phantom.y_clean);
  lsinv::write_pgm(cfg.output_dir / "y.pgm", y);
  {
    std::ofstream curve(cfg.output_dir / "truth_contour.csv");
    lsinv::write_csv(curve, lsinv::extract_zero_level(phantom.phi_true));
  }
  const nlohmann::json summary = {{"true_area", lsinv::region_area(phantom.phi_true)},
                                  {"y_clean_norm", lsinv::l2_norm(phantom.y_clean)},
                                  {"y_clean_min", phantom.y_clean.min()},
                                  {"noise_norm", lsinv::l2_norm(y - phantom.y_clean)},
                                  {"config", lsinv::to_json(cfg)}};
  std::ofstream(cfg.output_dir / "forward.json") << summary.dump(2) << '\n';
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int cmd_invert(const CommonOptions& opt) {
  const auto cfg = resolve_config(opt);
  const auto report = lsinv::run_experiment(cfg);
  for (const auto& w : report.result.trace.warnings) std::cerr << "warning: " << w << '\n';
  const auto& m = report.metrics;
  std::cout << "status " << m["status"].get<std::string>() << ", " << m["steps"] << " steps\n"
            << "residual " << m["initial_residual"] << " -> " << m["final_residual"] << '\n'
            << "symmetric difference " << m["initial_symmetric_difference"] << " -> "
            << m["final_symmetric_difference"] << '\n'
            << "output in " << cfg.output_dir.string() << '\n';
  return report.result.status == lsinv::EvolutionStatus::SolverFailure ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Level set inversion toolkit for the inverse potential problem"};
  app.require_subcommand(1);

  CommonOptions forward_opt, invert_opt, check_opt;
  auto* forward = app.add_subcommand("forward", "Generate the phantom and its (noisy) data");
  add_common(forward, forward_opt, false);
  auto* invert = app.add_subcommand("invert", "Run a level set inversion experiment");
  add_common(invert, invert_opt, true);

  int band_n = 257;
  auto* band = app.add_subcommand("lemma-check", "Projection and geometry property battery");
  band->add_option("--out", check_opt.out, "Directory for the JSON report");
  band->add_option("--grid", band_n, "Grid size")->check(CLI::Range(17, 2049));

  auto* shape = app.add_subcommand("shape-check", "Shape derivative vs level set derivative battery");
  shape->add_option("--out", check_opt.out, "Directory for the JSON report");

  std::uint64_t adjoint_seed = 7;
  auto* adjoint = app.add_subcommand("adjoint-check", "Elliptic solver battery");
  adjoint->add_option("--out", check_opt.out, "Directory for the JSON report");
  adjoint->add_option("--seed", adjoint_seed, "Seed for the random pairs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*forward) return cmd_forward(forward_opt);
    if (*invert) return cmd_invert(invert_opt);
    if (*band) return report_checks("lemma-check", lsinv::band_battery(band_n), check_opt.out);
    if (*shape) return report_checks("shape-check", lsinv::shape_battery(), check_opt.out);
    if (*adjoint) return report_checks("adjoint-check", lsinv::adjoint_battery(65, 20, adjoint_seed), check_opt.out);
  } catch (const lsinv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
