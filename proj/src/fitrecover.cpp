#include "coneasym/fitrecover.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "coneasym/jsonio.hpp"

namespace coneasym {

namespace {

struct LinearFit {
  Eigen::VectorXd coef;
  double rss = 0.0;
  double stderr0 = 0.0;
};

LinearFit least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  LinearFit out;
  out.coef = qr.solve(y);
  out.rss = (a * out.coef - y).squaredNorm();
  const Eigen::Index dof = a.rows() - a.cols();
  if (dof > 0 && qr.rank() == a.cols()) {
    const Eigen::MatrixXd cov = (a.transpose() * a).inverse() * (out.rss / static_cast<double>(dof));
    out.stderr0 = std::sqrt(std::max(0.0, cov(0, 0)));
  }
  return out;
}

/// Longest run of same-signed, nonzero samples inside the window, sorted by x.
std::vector<ModeSample> usable_run(std::vector<ModeSample> samples, FitWindow window, std::size_t min_samples) {
  std::vector<ModeSample> in;
  for (const auto& s : samples) {
    if (s.x >= window.lo && s.x <= window.hi && std::isfinite(s.value)) in.push_back(s);
  }
  std::sort(in.begin(), in.end(), [](const ModeSample& a, const ModeSample& b) { return a.x < b.x; });
  std::size_t best_start = 0, best_len = 0;
  for (std::size_t i = 0; i < in.size();) {
    if (in[i].value == 0.0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    const bool positive = in[i].value > 0.0;
    while (j < in.size() && in[j].value != 0.0 && (in[j].value > 0.0) == positive) ++j;
    if (j - i > best_len) {
      best_len = j - i;
      best_start = i;
    }
    i = j;
  }
  if (best_len < min_samples) {
    throw DegenerateSamples("fit: fewer than " + std::to_string(min_samples) +
                            " same-signed samples in the window");
  }
  return {in.begin() + static_cast<std::ptrdiff_t>(best_start),
          in.begin() + static_cast<std::ptrdiff_t>(best_start + best_len)};
}

Eigen::MatrixXd design(const std::vector<ModeSample>& run, const std::vector<double>& gaps, bool log_column) {
  const auto rows = static_cast<Eigen::Index>(run.size());
  const auto cols = static_cast<Eigen::Index>(2 + gaps.size() + (log_column ? 1 : 0));
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double x = run[r].x;
    a(r, 0) = std::log(x);
    a(r, 1) = 1.0;
    for (std::size_t g = 0; g < gaps.size(); ++g) a(r, 2 + static_cast<Eigen::Index>(g)) = std::pow(x, gaps[g]);
    if (log_column) a(r, cols - 1) = std::log(std::log(1.0 / x));
  }
  return a;
}

FitReport fit_run(const std::vector<ModeSample>& run, FitWindow window, const FitOptions& opt) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(run.size()));
  for (std::size_t i = 0; i < run.size(); ++i) y(static_cast<Eigen::Index>(i)) = std::log(std::abs(run[i].value));
  // Drop corrections the data cannot support.
  std::vector<double> gaps = opt.correction_gaps;
  while (!gaps.empty() && run.size() < gaps.size() + 4) gaps.pop_back();
  const LinearFit plain = least_squares(design(run, gaps, false), y);

  FitReport out;
  out.window = window;
  out.sample_count = run.size();
  out.fitted_exponent = plain.coef(0);
  out.standard_error = plain.stderr0;
  out.coefficient = std::copysign(std::exp(plain.coef(1)), run.front().value);
  out.residual_norm = std::sqrt(plain.rss / static_cast<double>(run.size()));

  const bool below_one = run.back().x < 1.0;
  if (below_one && run.size() >= gaps.size() + 5) {
    const LinearFit logged = least_squares(design(run, gaps, true), y);
    out.log_coefficient_ratio = logged.coef(logged.coef.size() - 1);
    out.log_detected = std::abs(out.log_coefficient_ratio) > opt.log_threshold;
    if (out.log_detected) {
      out.fitted_exponent = logged.coef(0);
      out.standard_error = logged.stderr0;
      out.coefficient = std::copysign(std::exp(logged.coef(1)), run.front().value);
      out.residual_norm = std::sqrt(logged.rss / static_cast<double>(run.size()));
    }
  }
  return out;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

/// Smallest nu >= 1 with |e - (base + step * nu)| <= tol, if any.
std::optional<int> shift_index(double e, double base, double step, double tol) {
  const double q = (e - base) / step;
  const long r = std::lround(q);
  if (r >= 1 && std::abs(e - (base + step * static_cast<double>(r))) <= tol) return static_cast<int>(r);
  return std::nullopt;
}

/// Does e match an exponent produced by the j = 0 mode (even shifts, and odd ones for n = 2)?
bool matches_zero_mode_shift(int n, double e, double tol) {
  if (shift_index(e, 0.0, 2.0, tol)) return true;
  return n == 2 && shift_index(e, -1.0, 2.0, tol).has_value();
}

double confidence_of(const FitReport& r) {
  return std::clamp(1.0 - r.standard_error / kAttributionTolerance, 0.0, 1.0);
}

}  // namespace

FitReport fit_leading_exponent(const std::vector<ModeSample>& samples, FitWindow window, const FitOptions& opt) {
  if (!(window.lo > 0.0) || !(window.hi > window.lo)) throw std::invalid_argument("fit: window must satisfy 0 < lo < hi");
  return fit_run(usable_run(samples, window, opt.min_samples), window, opt);
}

FitReport subtract_and_refit(const std::vector<ModeSample>& samples, const std::vector<FitReport>& known,
                             FitWindow window, const FitOptions& opt) {
  std::vector<ModeSample> residual;
  for (const auto& s : samples) {
    if (s.x < window.lo || s.x > window.hi) continue;
    double model = 0.0;
    double propagated = 0.0;
    for (const auto& k : known) {
      const double term = k.coefficient * std::pow(s.x, k.fitted_exponent);
      model += term;
      // First-order error of c x^e from the uncertainty of the earlier fit.
      propagated += std::abs(term) * (k.standard_error * std::abs(std::log(s.x)) + k.residual_norm);
    }
    const double r = s.value - model;
    const double floor = std::max(1e3 * opt.noise_level * std::max(std::abs(s.value), std::abs(model)), 3.0 * propagated);
    if (std::abs(r) > floor) residual.push_back({s.x, r});
  }
  std::vector<ModeSample> run;
  try {
    run = usable_run(residual, window, opt.min_samples);
  } catch (const DegenerateSamples&) {
    throw NoiseFloor("subtract_and_refit: residual is below the reliable fitting level");
  }
  FitWindow used{run.front().x, run.back().x};
  auto out = fit_run(run, used, opt);
  out.peel_index = static_cast<int>(known.size());
  return out;
}

FitReport subtract_and_refit(const std::vector<ModeSample>& samples,
                             const std::vector<std::pair<double, double>>& known_terms, FitWindow window,
                             const FitOptions& opt) {
  std::vector<FitReport> known;
  for (const auto& [e, c] : known_terms) {
    FitReport k;
    k.fitted_exponent = e;
    k.coefficient = c;
    known.push_back(k);
  }
  return subtract_and_refit(samples, known, window, opt);
}

std::vector<FitReport> peel_exponents(const std::vector<ModeSample>& samples, FitWindow window, int max_terms,
                                      const FitOptions& opt, std::optional<std::size_t> mode) {
  std::vector<FitReport> out;
  auto lead = fit_leading_exponent(samples, window, opt);
  lead.mode = mode;
  out.push_back(lead);
  while (static_cast<int>(out.size()) < max_terms) {
    FitReport next;
    try {
      next = subtract_and_refit(samples, out, window, opt);
    } catch (const NoiseFloor&) {
      break;
    }
    next.mode = mode;
    out.push_back(next);
  }
  return out;
}

bool match_template(FitReport& report, const ExpansionTemplate& tmpl, double tol) {
  const AsymTerm* best = nullptr;
  double best_gap = std::numeric_limits<double>::infinity();
  for (const auto& t : tmpl.terms) {
    const double gap = std::abs(t.exponent.value - report.fitted_exponent);
    if (gap < best_gap) {
      best_gap = gap;
      best = &t;
    }
  }
  if (best && best_gap < tol) {
    report.matched_term = *best;
    return true;
  }
  report.matched_term.reset();
  return false;
}

double recover_lambda(int n, double e) {
  if (!(e >= 0.0)) throw NotASpectralExponent("recover_lambda: exponent must be >= 0, got " + format_number(e));
  const double mu = -e;
  // + 0.0 turns a negative zero into zero for e = 0.
  return mu * (n - 1 - mu) + 0.0;
}

VisibilityWindow visibility_window(int n, double gamma, int k) {
  VisibilityWindow w;
  w.mu_hi = 0.5 * (n + 1) - gamma - 2.0;
  w.mu_lo = 0.5 * (n + 1) - gamma - 2.0 * k;
  auto lam = [n](double mu) { return mu * (n - 1 - mu); };
  w.lambda_lo = lam(w.mu_lo);
  w.lambda_hi = lam(std::min(w.mu_hi, 0.5 * (n - 1)));
  return w;
}

RecoverySummary recover_spectrum(const std::vector<FitReport>& reports, int n, double gamma, int k) {
  RecoverySummary out;
  out.visibility = visibility_window(n, gamma, k);
  const double tol = kAttributionTolerance;
  auto visible = [&](double e) {
    const double mu = -e;
    return std::abs(e) <= tol || (mu >= out.visibility.mu_lo && mu < out.visibility.mu_hi);
  };
  auto add_recovered = [&](double e, const FitReport& r, const std::string& provenance) {
    for (const auto& existing : out.recovered) {
      if (std::abs(existing.exponent - e) <= kDeduplicationTolerance * std::max(1.0, std::abs(e))) return;
    }
    const double e_clamped = std::abs(e) <= tol ? 0.0 : e;
    out.recovered.push_back({recover_lambda(n, std::max(0.0, e_clamped)), e, confidence_of(r), provenance, visible(e)});
  };

  // Chains from a known mode: the leading exponent is spectral, later peels are even shifts of it.
  std::vector<const FitReport*> loose;
  std::vector<std::size_t> modes;
  for (const auto& r : reports) {
    if (r.mode && std::find(modes.begin(), modes.end(), *r.mode) == modes.end()) modes.push_back(*r.mode);
    if (!r.mode) loose.push_back(&r);
  }
  std::sort(modes.begin(), modes.end());
  for (std::size_t mode : modes) {
    std::vector<const FitReport*> chain;
    for (const auto& r : reports) {
      if (r.mode == mode) chain.push_back(&r);
    }
    std::sort(chain.begin(), chain.end(), [](const FitReport* a, const FitReport* b) { return a->peel_index < b->peel_index; });
    const FitReport& lead = *chain.front();
    const double e0 = lead.fitted_exponent;
    if (e0 < -tol) {
      out.flagged.push_back({e0, "NotASpectralExponent", {}, mode});
    } else {
      add_recovered(e0, lead, "mode " + std::to_string(mode) + " leading exponent " + format_number(e0));
      if (mode != 0 && std::abs(e0) > tol && matches_zero_mode_shift(n, e0, tol)) {
        out.flagged.push_back({e0, "AmbiguousAttribution: also an even shift of the j = 0 mode; kept by mode tag",
                               {recover_lambda(n, std::max(0.0, e0)), 0.0}, mode});
      }
    }
    for (std::size_t i = 1; i < chain.size(); ++i) {
      const double e = chain[i]->fitted_exponent;
      if (const auto nu = shift_index(e, e0, 2.0, tol)) {
        out.attributed_shifts.emplace_back(
            e, "mode " + std::to_string(mode) + ": shift 2*" + std::to_string(*nu) + " of " + format_number(e0));
      } else {
        out.flagged.push_back({e, "unattributed peel in mode chain", {}, mode});
      }
    }
  }

  // Exponents without mode information, smallest first.
  std::sort(loose.begin(), loose.end(),
            [](const FitReport* a, const FitReport* b) { return a->fitted_exponent < b->fitted_exponent; });
  for (const FitReport* r : loose) {
    const double e = r->fitted_exponent;
    if (e < -tol) {
      out.flagged.push_back({e, "NotASpectralExponent", {}, std::nullopt});
      continue;
    }
    if (std::abs(e) <= tol) {
      add_recovered(e, *r, "constant term");
      continue;
    }
    bool explained = false;
    for (const auto& rec : out.recovered) {
      if (std::abs(rec.exponent - e) <= kDeduplicationTolerance * std::max(1.0, std::abs(e))) {
        explained = true;
        break;
      }
      if (rec.exponent > tol) {
        if (const auto nu = shift_index(e, rec.exponent, 2.0, tol)) {
          out.attributed_shifts.emplace_back(e, "shift 2*" + std::to_string(*nu) + " of " + format_number(rec.exponent));
          explained = true;
          break;
        }
      }
    }
    if (explained) continue;
    if (matches_zero_mode_shift(n, e, tol)) {
      out.flagged.push_back({e, "AmbiguousAttribution: matches both an even shift of the j = 0 mode and a spectral exponent",
                             {recover_lambda(n, e), 0.0}, std::nullopt});
      continue;
    }
    add_recovered(e, *r, "spectral exponent " + format_number(e));
  }
  std::sort(out.recovered.begin(), out.recovered.end(),
            [](const RecoveredEigenvalue& a, const RecoveredEigenvalue& b) { return a.lambda > b.lambda; });
  return out;
}

nlohmann::json FitReport::to_json() const {
  nlohmann::json j;
  j["fitted_exponent"] = fitted_exponent;
  j["stderr"] = standard_error;
  j["log_coefficient_ratio"] = log_coefficient_ratio;
  j["log_detected"] = log_detected;
  j["coefficient"] = coefficient;
  j["residual_norm"] = residual_norm;
  j["window"] = {window.lo, window.hi};
  j["sample_count"] = sample_count;
  j["peel_index"] = peel_index;
  j["mode"] = mode ? nlohmann::json(*mode) : nlohmann::json(nullptr);
  j["matched_term"] = matched_term ? term_to_json(*matched_term) : nlohmann::json(nullptr);
  return j;
}

FitReport FitReport::from_json(const nlohmann::json& j) {
  FitReport r;
  r.fitted_exponent = j.at("fitted_exponent").get<double>();
  r.standard_error = j.value("stderr", 0.0);
  r.log_coefficient_ratio = j.value("log_coefficient_ratio", 0.0);
  r.log_detected = j.value("log_detected", false);
  r.coefficient = j.value("coefficient", 0.0);
  r.residual_norm = j.value("residual_norm", 0.0);
  if (j.contains("window")) {
    r.window.lo = j["window"].at(0).get<double>();
    r.window.hi = j["window"].at(1).get<double>();
  }
  r.sample_count = j.value("sample_count", std::size_t{0});
  r.peel_index = j.value("peel_index", 0);
  if (j.contains("mode") && !j["mode"].is_null()) r.mode = j["mode"].get<std::size_t>();
  // The matched term is informational and is re-derived against a template when needed.
  return r;
}

nlohmann::json RecoverySummary::to_json() const {
  nlohmann::json doc;
  auto rec = nlohmann::json::array();
  for (const auto& r : recovered) {
    rec.push_back({{"lambda", r.lambda},
                   {"exponent", r.exponent},
                   {"confidence", r.confidence},
                   {"provenance", r.provenance},
                   {"visible", r.visible}});
  }
  auto flags = nlohmann::json::array();
  for (const auto& f : flagged) {
    flags.push_back({{"exponent", f.exponent},
                     {"reason", f.reason},
                     {"candidates", f.candidates},
                     {"mode", f.mode ? nlohmann::json(*f.mode) : nlohmann::json(nullptr)}});
  }
  auto shifts = nlohmann::json::array();
  for (const auto& [e, why] : attributed_shifts) shifts.push_back({{"exponent", e}, {"attribution", why}});
  doc["recovered"] = rec;
  doc["flagged"] = flags;
  doc["even_shifts"] = shifts;
  doc["visibility"] = {{"mu_lo", visibility.mu_lo},
                       {"mu_hi", visibility.mu_hi},
                       {"lambda_lo", visibility.lambda_lo},
                       {"lambda_hi", visibility.lambda_hi},
                       {"note", "only eigenvalues with mu in [mu_lo, mu_hi) appear in the expansion at this k"}};
  return doc;
}

void write_fit_jsonl(std::ostream& os, const std::vector<FitReport>& reports) {
  for (const auto& r : reports) os << dump_json(r.to_json()) << '\n';
}

std::vector<FitReport> read_fit_jsonl(std::istream& is) {
  std::vector<FitReport> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(FitReport::from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("fit report line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace coneasym
