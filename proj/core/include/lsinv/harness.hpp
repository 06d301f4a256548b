#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "lsinv/levelset.hpp"
#include "lsinv/shapes.hpp"

namespace lsinv {

/// Invalid experiment configuration (bad value, unknown key, shape too close to the boundary).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Version of the trace.csv / final_metrics.json layout.
inline constexpr int kTraceFormatVersion = 1;

struct ExperimentConfig {
  int grid_n = 129;
  ShapeDescriptor truth = ShapeDescriptor::disk({0.5, 0.5}, 0.3);
  ShapeDescriptor initial = ShapeDescriptor::disk({0.4, 0.4}, 0.2);
  /// Relative L2 noise level added to the clean data.
  double noise = 0.0;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";
  /// Write phi/u snapshots every k steps (0 disables; step 0 and the last step are always written).
  int snapshot_every = 20;
  /// Discrepancy principle factor: stop once ||F(u) - y|| <= factor * noise * ||y||.
  double stop_factor = 1.1;
  /// Multiple of the grid spacing used for eps.
  double eps_multiple = 1.5;
  EvolutionConfig evolution = default_evolution(EvolutionMethod::InverseScaleSpace);

  GridSpec grid() const { return GridSpec::unit_square(grid_n); }

  /// Per-method defaults (step size, reinitialization cadence).
  static EvolutionConfig default_evolution(EvolutionMethod method);
};

/// Throws ConfigError for anything the experiment cannot run with.
void validate(const ExperimentConfig& cfg);

/// Parses the JSON document; missing keys keep their defaults, unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

EvolutionMethod parse_method(const std::string& name);
const char* to_string(EvolutionMethod m);

struct Phantom {
  ScalarField phi_true;
  ScalarField u_true;
  ScalarField y_clean;
};

Phantom make_phantom(const ExperimentConfig& cfg);

/// y + delta ||y|| g / ||g|| with g standard normal drawn from `seed`.
ScalarField add_noise(const ScalarField& y, double delta, std::uint64_t seed);

/// P5 image; min/max of the field map to 0/255 and are recorded in a header comment.
/// The top image row is the largest y.
void write_pgm(const std::filesystem::path& path, const ScalarField& f);

/// step,t,residual,area,perimeter; the initial state is step 0.
void write_trace_csv(std::ostream& out, const EvolutionTrace& trace);

struct ExperimentReport {
  EvolutionResult result;
  nlohmann::json metrics;
};

/// Phantom, noise, evolution and file output into cfg.output_dir.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace lsinv
