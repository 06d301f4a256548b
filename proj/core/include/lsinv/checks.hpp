#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace lsinv {

/// One measured quantity compared against a bound.
struct CheckResult {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool passed = false;
};

nlohmann::json to_json(const std::vector<CheckResult>& results);

/// Self-adjointness of F on random pairs and manufactured-solution orders of both solvers.
std::vector<CheckResult> adjoint_battery(int n = 65, int pairs = 20, std::uint64_t seed = 7);

/// Projection and geometry battery: ramp-band integral vs band area and contour
/// length, coarea sides, and the midpoint value of the symmetric ramp.
std::vector<CheckResult> band_battery(int n = 257);

/// Level set derivative against shape derivative for a disk over a refinement sequence.
std::vector<CheckResult> shape_battery(const std::vector<int>& sizes = {65, 129, 257});

}  // namespace lsinv
