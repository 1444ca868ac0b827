#pragma once

#include <functional>
#include <string>
#include <vector>

#include "coneasym/spectra.hpp"

namespace coneasym {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Circles of radius 1/2, 2/3 and 1/sqrt(2), S^2, S^3 and two custom spectra (n = 2 and n = 4).
std::vector<CrossSection> acceptance_corpus(int j_max = 12);

/// Five weights evenly spaced strictly inside the admissible window.
std::vector<double> gamma_grid(const CrossSection& cs);

CriterionResult criterion_oracle_equality();
CriterionResult criterion_worked_cases();
CriterionResult criterion_sphere_taylor();
CriterionResult criterion_vieta();
CriterionResult criterion_exponent_law();
CriterionResult criterion_kernel_scaling();
CriterionResult criterion_sectorial();
CriterionResult criterion_recovery();
CriterionResult criterion_membership();
CriterionResult criterion_bessel();

/// Runs all ten criteria in order; on_result is called after each one.
std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS 3 sphere-taylor (0.01 s): detail"
std::string format_result(const CriterionResult& r);

}  // namespace coneasym
