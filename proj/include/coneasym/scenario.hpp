#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "coneasym/conesolve.hpp"
#include "coneasym/fitrecover.hpp"
#include "coneasym/spectra.hpp"
#include "coneasym/templates.hpp"

namespace coneasym {

/// Malformed or inconsistent scenario file.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridSpec {
  double lo = 1e-4;
  double hi = 1e-1;
  int per_decade = 16;
};

struct SolverSettings {
  /// Mode indices j to simulate; empty means every mode of the truncated spectrum.
  std::vector<std::size_t> modes;
  std::vector<double> times = {1.0};
  InitialProfile profile = bump_profile(1.0, 2.0);
  GridSpec grid;
  double rel_tol = 1e-9;
};

struct FitSettings {
  FitWindow window;
  int max_terms = 3;
  double noise_level = 1e-9;
};

struct OutputPaths {
  std::string samples;
  std::string fits;
  std::string tmpl;
  std::string summary;
};

/// Everything one run needs. gamma is resolved to a number at load time ("midpoint" picks
/// the centre of the admissible window).
struct Scenario {
  explicit Scenario(CrossSection cs) : cross_section(std::move(cs)) {}

  CrossSection cross_section;
  double gamma = 0.0;
  bool gamma_is_midpoint = false;
  int k = 2;
  double s = 0.0;
  double p = 2.0;
  SolverSettings solver;
  FitSettings fit;
  OutputPaths outputs;

  nlohmann::json to_json() const;
};

/// Cross-section from a name ("s2", "circle:1/2") or an inline {n, eigenvalues, multiplicities} object.
CrossSection cross_section_from_json(const nlohmann::json& spec, int j_max);

/// Parses and validates a scenario; throws ConfigError on schema problems and
/// WindowViolation when gamma is not admissible.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

/// Parses a gamma argument: a number or "midpoint".
double resolve_gamma(const std::string& text, const CrossSection& cs);

/// Runs heat_mode for every (mode, t) pair of the scenario.
std::vector<ModeSolution> solve_scenario(const Scenario& sc);

/// Groups CSV rows by (mode_j, t) and peels each group.
std::vector<FitReport> fit_solutions(const std::vector<ModeSolution>& solutions, const FitSettings& fit,
                                     const ExpansionTemplate* tmpl = nullptr);

std::vector<ModeSolution> read_mode_csv(std::istream& is, int n = 1);

}  // namespace coneasym
