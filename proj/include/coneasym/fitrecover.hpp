#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coneasym/conesolve.hpp"
#include "coneasym/templates.hpp"

namespace coneasym {

class DegenerateSamples : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class NoiseFloor : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NotASpectralExponent : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct FitWindow {
  double lo = 1e-4;
  double hi = 1e-1;
};

struct FitOptions {
  /// Relative corrections x^g added as regressors, i.e. log|a| ~ ... + c_g x^g.
  std::vector<double> correction_gaps = {2.0, 4.0};
  /// Coefficient of log(log(1/x)) above which a log factor is declared present.
  double log_threshold = 0.05;
  /// Relative noise level of the sample values; peeling keeps residuals above 1e3 times this.
  double noise_level = 2.220446049250313e-16;
  std::size_t min_samples = 8;
};

struct FitReport {
  double fitted_exponent = 0.0;
  double standard_error = 0.0;
  /// Coefficient of log(log(1/x)) in the log-augmented fit; equals m for x^e log^m(1/x).
  double log_coefficient_ratio = 0.0;
  bool log_detected = false;
  /// Signed coefficient c of the fitted leading term c x^e.
  double coefficient = 0.0;
  /// RMS residual of the fit in log|a|.
  double residual_norm = 0.0;
  std::optional<AsymTerm> matched_term;
  FitWindow window;
  std::size_t sample_count = 0;
  /// Mode index of the sampled solution, when known.
  std::optional<std::size_t> mode;
  /// 0 for the leading fit, p for the p-th peeled term.
  int peel_index = 0;

  nlohmann::json to_json() const;
  static FitReport from_json(const nlohmann::json& j);
};

/// Least squares of log|a| = alpha log x + beta (+ corrections) over samples inside the window.
FitReport fit_leading_exponent(const std::vector<ModeSample>& samples, FitWindow window, const FitOptions& opt = {});

/// Subtracts sum c x^e over known_terms (exponent, coefficient) and fits the leading exponent of
/// what remains, using only points whose residual exceeds 1e3 * noise_level * |a|.
FitReport subtract_and_refit(const std::vector<ModeSample>& samples,
                             const std::vector<std::pair<double, double>>& known_terms, FitWindow window,
                             const FitOptions& opt = {});

/// Same with earlier fits as the known terms; their standard errors widen the noise floor
/// by the error they propagate into the residual.
FitReport subtract_and_refit(const std::vector<ModeSample>& samples, const std::vector<FitReport>& known,
                             FitWindow window, const FitOptions& opt = {});

/// Leading fit followed by successive peels until NoiseFloor or max_terms reports.
std::vector<FitReport> peel_exponents(const std::vector<ModeSample>& samples, FitWindow window, int max_terms,
                                      const FitOptions& opt = {}, std::optional<std::size_t> mode = std::nullopt);

/// Sets report.matched_term to the template term nearest the fitted exponent if within tol.
bool match_template(FitReport& report, const ExpansionTemplate& tmpl, double tol = 1e-2);

/// lambda = mu (n - 1 - mu) with mu = -e.
double recover_lambda(int n, double e);

struct RecoveredEigenvalue {
  double lambda = 0.0;
  double exponent = 0.0;
  /// 1 - standard_error / attribution tolerance, clamped to [0, 1].
  double confidence = 0.0;
  std::string provenance;
  /// Whether mu = -exponent lies in J_2 u ... u J_k (lambda = 0 counts as visible).
  bool visible = true;
};

struct FlaggedExponent {
  double exponent = 0.0;
  std::string reason;
  /// Candidate eigenvalues for the readings that could not be separated.
  std::vector<double> candidates;
  std::optional<std::size_t> mode;
};

struct VisibilityWindow {
  /// mu in [mu_lo, mu_hi) is visible at the given gamma and k.
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
};

struct RecoverySummary {
  std::vector<RecoveredEigenvalue> recovered;
  std::vector<FlaggedExponent> flagged;
  /// Peeled exponents explained as even shifts of an already recovered exponent.
  std::vector<std::pair<double, std::string>> attributed_shifts;
  VisibilityWindow visibility;

  nlohmann::json to_json() const;
};

inline constexpr double kAttributionTolerance = 1e-2;
inline constexpr double kDeduplicationTolerance = 1e-3;

VisibilityWindow visibility_window(int n, double gamma, int k);

/// Classifies fitted exponents as even shifts or spectral and inverts the spectral ones.
/// Exponents that also match the shift pattern of the j = 0 mode are flagged.
RecoverySummary recover_spectrum(const std::vector<FitReport>& reports, int n, double gamma, int k);

void write_fit_jsonl(std::ostream& os, const std::vector<FitReport>& reports);
std::vector<FitReport> read_fit_jsonl(std::istream& is);

}  // namespace coneasym
