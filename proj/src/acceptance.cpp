#include "coneasym/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "coneasym/besselkit.hpp"
#include "coneasym/conesolve.hpp"
#include "coneasym/fitrecover.hpp"
#include "coneasym/indicial.hpp"
#include "coneasym/templates.hpp"
#include "coneasym/weights.hpp"

namespace coneasym {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

template <class Body>
CriterionResult timed(int id, const char* name, double budget_seconds, Body body) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  const auto t0 = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  if (budget_seconds > 0.0 && r.seconds > budget_seconds) {
    r.passed = false;
    r.detail += fmt(" [over the %.0f s budget]", budget_seconds);
  }
  return r;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Display terms transcribed one by one from the k = 2, 3, 4 worked cases.
struct Literal {
  double exponent;
  int log;
  TermOrigin origin;
};

std::vector<Literal> transcribe(const CrossSection& cs, double gamma, int k) {
  const int n = cs.n();
  const int d1 = n == 1 ? 1 : 0;
  const bool d2 = n == 2;
  const double half = 0.5 * (n - 1);
  auto in_j = [&](double q, int m) {
    const double top = 0.5 * (n + 1) - gamma - 2.0 * (m - 1);
    return top - 2.0 <= q && q < top;
  };
  std::vector<double> q(cs.size());
  for (std::size_t j = 1; j < cs.size(); ++j) q[j] = half - std::sqrt(half * half - cs.lambda(j));

  std::vector<Literal> out;
  out.push_back({0.0, 0, ConstantOrigin{}});
  auto spectral = [&](int m, int nu, int log) {
    for (std::size_t j = 1; j < cs.size(); ++j) {
      if (in_j(q[j], m)) out.push_back({-q[j] + 2.0 * nu, log, SpectralOrigin{j, m, nu}});
    }
  };
  // k = 2
  if (d2) out.push_back({1.0, 1, EvenShiftOrigin{1, ShiftBranch::Odd}});
  out.push_back({2.0, 1 + d1, EvenShiftOrigin{1, ShiftBranch::Even}});
  spectral(2, 0, 0);
  if (k >= 3) {
    if (d2) out.push_back({3.0, 2, EvenShiftOrigin{2, ShiftBranch::Odd}});
    out.push_back({4.0, 2 + d1, EvenShiftOrigin{2, ShiftBranch::Even}});
    spectral(2, 1, 1);
    spectral(3, 0, 1);
  }
  if (k >= 4) {
    if (d2) out.push_back({5.0, 3, EvenShiftOrigin{3, ShiftBranch::Odd}});
    out.push_back({6.0, 3 + d1, EvenShiftOrigin{3, ShiftBranch::Even}});
    spectral(2, 2, 2);
    spectral(3, 1, 2);
    spectral(4, 0, 2);
  }
  return out;
}

struct MergedLiteral {
  double exponent;
  int log;
  std::multiset<std::string> origins;
};

std::vector<MergedLiteral> merge_literals(const std::vector<Literal>& lits) {
  std::vector<MergedLiteral> out;
  for (const auto& l : lits) {
    auto it = std::find_if(out.begin(), out.end(), [&](const MergedLiteral& m) { return std::abs(m.exponent - l.exponent) < 1e-9; });
    if (it == out.end()) {
      out.push_back({l.exponent, l.log, {describe(l.origin)}});
    } else {
      it->log = std::max(it->log, l.log);
      it->origins.insert(describe(l.origin));
    }
  }
  return out;
}

// Empty string when the template equals the merged transcription.
std::string compare_with_display(const ExpansionTemplate& t, const std::vector<MergedLiteral>& lits) {
  if (t.terms.size() != lits.size()) return fmt("%zu template terms vs %zu display terms", t.terms.size(), lits.size());
  for (const auto& term : t.terms) {
    auto it = std::find_if(lits.begin(), lits.end(), [&](const MergedLiteral& m) { return std::abs(m.exponent - term.exponent.value) < 1e-12; });
    if (it == lits.end()) return fmt("exponent %.12g not in display", term.exponent.value);
    if (it->log != term.max_log_power) return fmt("exponent %.12g: log %d vs display %d", term.exponent.value, term.max_log_power, it->log);
    std::multiset<std::string> origins;
    for (const auto& o : term.origins) origins.insert(describe(o));
    if (origins != it->origins) return fmt("exponent %.12g: provenance differs", term.exponent.value);
  }
  return {};
}

}  // namespace

std::vector<CrossSection> acceptance_corpus(int j_max) {
  std::vector<CrossSection> out;
  out.push_back(circle_spectrum_exact(Rational(1, 4), j_max));
  out.push_back(circle_spectrum_exact(Rational(4, 9), j_max));
  out.push_back(circle_spectrum_exact(Rational(1, 2), j_max));
  out.push_back(sphere_spectrum(2, j_max));
  out.push_back(sphere_spectrum(3, j_max));
  out.push_back(custom_spectrum(2, {{0.0, 1}, {-1.25, 2}, {-3.7, 3}, {-8.1, 2}, {-14.6, 4}, {-22.0, 3}, {-31.9, 2}},
                                "custom-n2"));
  out.push_back(custom_spectrum(4, {{0.0, 1}, {-2.5, 1}, {-7.3, 2}, {-13.0, 3}, {-21.4, 1}, {-30.2, 2}, {-41.7, 5}},
                                "custom-n4"));
  return out;
}

std::vector<double> gamma_grid(const CrossSection& cs) {
  const auto w = admissible_window(cs.n(), cs.first_nonzero());
  if (!w) throw WindowViolation("empty admissible window for " + cs.name());
  std::vector<double> out;
  for (int i = 1; i <= 5; ++i) out.push_back(w->lo + (w->hi - w->lo) * i / 6.0);
  return out;
}

CriterionResult criterion_oracle_equality() {
  return timed(1, "closed-form-vs-induction", 10, [](CriterionResult& r) {
    int cases = 0, mismatches = 0;
    std::string first;
    for (const auto& cs : acceptance_corpus()) {
      for (double g : gamma_grid(cs)) {
        for (int k = 2; k <= 6; ++k) {
          ++cases;
          if (template_closed_form(cs, g, k).signature() != template_inductive(cs, g, k).signature()) {
            ++mismatches;
            if (first.empty()) first = fmt(" first: %s gamma=%.6g k=%d", cs.name().c_str(), g, k);
          }
        }
      }
    }
    r.passed = mismatches == 0 && cases == 7 * 5 * 5;
    r.detail = fmt("%d cases, %d mismatches", cases, mismatches) + first;
  });
}

CriterionResult criterion_worked_cases() {
  return timed(2, "worked-cases-k2-k3-k4", 0, [](CriterionResult& r) {
    struct Config {
      CrossSection cs;
      double gamma;
    };
    std::vector<Config> configs;
    const auto corpus = acceptance_corpus();
    for (const auto& cs : corpus) {
      const auto grid = gamma_grid(cs);
      configs.push_back({cs, grid[2]});
    }
    configs.push_back({sphere_spectrum(2, 12), 0.0});
    configs.push_back({sphere_spectrum(3, 12), 0.5});
    int checked = 0, merges = 0;
    for (const auto& c : configs) {
      for (int k = 2; k <= 4; ++k) {
        const auto lits = merge_literals(transcribe(c.cs, c.gamma, k));
        for (const auto& l : lits) merges += l.origins.size() > 1 ? 1 : 0;
        const auto closed = template_closed_form(c.cs, c.gamma, k);
        const auto induct = template_inductive(c.cs, c.gamma, k);
        for (const auto* t : {&closed, &induct}) {
          const auto why = compare_with_display(*t, lits);
          ++checked;
          if (!why.empty()) {
            r.passed = false;
            r.detail = fmt("%s gamma=%.6g k=%d (%s): ", c.cs.name().c_str(), c.gamma, k,
                           t == &closed ? "closed form" : "induction") + why;
            return;
          }
        }
      }
    }
    // The collision configurations must actually exercise a merged term.
    r.passed = merges > 0;
    r.detail = fmt("%d template/display comparisons, %d merged display terms", checked, merges);
  });
}

CriterionResult criterion_sphere_taylor() {
  return timed(3, "sphere-taylor", 0, [](CriterionResult& r) {
    r.passed = true;
    std::ostringstream os;
    for (auto [n, g] : {std::pair{2, 0.0}, std::pair{3, 0.5}}) {
      const auto t = template_closed_form(sphere_spectrum(n, 12), g, 4);
      os << "S" << n << " {";
      bool first = true;
      for (const auto& term : t.terms) {
        const bool integral = term.exponent.exact ? term.exponent.exact->is_integer()
                                                  : std::abs(term.exponent.value - std::round(term.exponent.value)) < 1e-12;
        r.passed = r.passed && integral;
        os << (first ? "" : ",") << term.exponent.value;
        first = false;
      }
      os << "} ";
    }
    r.detail = os.str();
  });
}

CriterionResult criterion_vieta() {
  return timed(4, "vieta-composition", 1, [](CriterionResult& r) {
    double worst = 0.0;
    const std::complex<double> probes[] = {{0.3, 0.7}, {-1.9, 0.2}, {2.5, -1.1}, {-4.2, 3.3}};
    for (const auto& cs : acceptance_corpus()) {
      const int n = cs.n();
      for (std::size_t j = 0; j < cs.size(); ++j) {
        const double lam = cs.lambda(j);
        const auto ir = indicial_roots(n, cs.exact_lambda(j));
        const double scale = std::max(1.0, std::abs(lam));
        worst = std::max(worst, std::abs(ir.q_plus.value + ir.q_minus.value - (n - 1)) / scale);
        worst = std::max(worst, std::abs(ir.q_plus.value * ir.q_minus.value - lam) / scale);
        for (int k = 1; k <= 6; ++k) {
          const auto poly = mode_polynomial(n, lam, k);
          for (auto z : probes) {
            std::complex<double> prod = 1.0;
            for (int i = 0; i < k; ++i) prod *= (z + 2.0 * i - ir.q_minus.value) * (z + 2.0 * i - ir.q_plus.value);
            worst = std::max(worst, std::abs(poly(z) - prod) / std::abs(prod));
            worst = std::max(worst, std::abs(conormal_symbol_power(n, lam, k, z) - prod) / std::abs(prod));
          }
        }
      }
    }
    const auto poles = pole_set(circle_spectrum_exact(Rational(1, 4), 12), 1);
    const auto* zero = poles.find(0.0);
    const int order = zero ? zero->order : 0;
    r.passed = worst <= 1e-12 && order == 2;
    r.detail = fmt("max relative defect %.3g; n=1 pole at 0 has order %d", worst, order);
  });
}

CriterionResult criterion_exponent_law() {
  return timed(5, "heat-exponent-law", 60, [](CriterionResult& r) {
    FitOptions opt;
    opt.noise_level = 1e-9;
    r.passed = true;
    std::ostringstream os;
    const auto grid = log_spaced_grid();
    for (double nu : {1.5, std::numbers::sqrt2}) {
      const auto mp = make_mode_problem(1, -nu * nu, bump_profile(1.0, 2.0), 1.0, 1);
      const auto sol = heat_mode(mp, grid);
      const auto chain = peel_exponents(sol.samples, {1e-4, 1e-1}, 2, opt, 1);
      const double lead = chain.at(0).fitted_exponent;
      const double second = chain.size() > 1 ? chain[1].fitted_exponent : std::nan("");
      const bool ok = rel_diff(lead, nu) < 1e-3 && std::abs(second - (nu + 2.0)) < 1e-2;
      r.passed = r.passed && ok;
      os << fmt("nu=%.6f: %.8f, %.6f; ", nu, lead, second);
    }
    r.detail = os.str();
  });
}

CriterionResult criterion_kernel_scaling() {
  return timed(6, "kernel-scaling", 0, [](CriterionResult& r) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const int n = 1 + static_cast<int>(u01(rng) * 4.0);
      const double nu = 10.0 * u01(rng);
      const double t = 0.1 + 2.0 * u01(rng);
      const double x = 0.1 + 3.0 * u01(rng);
      const double xi = 0.1 + 3.0 * u01(rng);
      const double rho = 0.5 + 2.5 * u01(rng);
      const double lhs = heat_kernel(n, nu, rho * rho * t, rho * x, rho * xi);
      const double rhs = std::pow(rho, -(n + 1)) * heat_kernel(n, nu, t, x, xi);
      worst = std::max(worst, rel_diff(lhs, rhs));
    }
    r.passed = worst <= 1e-10;
    r.detail = fmt("20 tuples, max relative defect %.3g", worst);
  });
}

CriterionResult criterion_sectorial() {
  return timed(7, "sectorial-bound", 30, [](CriterionResult& r) {
    std::vector<double> grid;
    for (int i = 1; i <= 240; ++i) grid.push_back(0.05 * i);
    const double a = 0.75 * std::numbers::pi;
    const auto check = sectorial_check(1, -4.0, plateau_profile(1.0, 6.0, 1.0), {0.0, a, -a}, {1.0, 10.0, 100.0}, grid, 2.0);
    r.passed = check.passed;
    r.detail = fmt("max per-ray ratio %.4f over 3 rays x 3 moduli", check.max_ratio);
  });
}

CriterionResult criterion_recovery() {
  return timed(8, "spectrum-recovery", 0, [](CriterionResult& r) {
    const auto cs = circle_spectrum_exact(Rational(1, 4), 12);
    FitOptions opt;
    opt.noise_level = 1e-9;
    const auto grid = log_spaced_grid();
    std::vector<FitReport> reports;
    for (std::size_t j : {0u, 1u}) {
      const auto sol = heat_mode(make_mode_problem(1, cs.lambda(j), bump_profile(1.0, 2.0), 1.0, j), grid);
      const auto chain = peel_exponents(sol.samples, {1e-4, 1e-1}, 3, opt, j);
      reports.insert(reports.end(), chain.begin(), chain.end());
    }
    const auto summary = recover_spectrum(reports, 1, 0.0, 3);
    std::vector<double> got;
    for (const auto& e : summary.recovered) got.push_back(e.lambda);
    std::sort(got.begin(), got.end());
    const std::vector<double> want = {-4.0, 0.0};
    bool end_to_end = got.size() == want.size();
    for (std::size_t i = 0; end_to_end && i < want.size(); ++i) {
      end_to_end = std::abs(got[i] - want[i]) <= 1e-2 * std::max(1.0, std::abs(want[i]));
    }
    double worst = 0.0;
    for (const auto& c : acceptance_corpus()) {
      for (std::size_t j = 0; j < c.size(); ++j) {
        const double mu = indicial_roots(c.n(), c.exact_lambda(j)).mu.value;
        worst = std::max(worst, std::abs(recover_lambda(c.n(), -mu) - c.lambda(j)) / std::max(1.0, std::abs(c.lambda(j))));
      }
    }
    r.passed = end_to_end && worst <= 1e-12;
    std::ostringstream os;
    os << "recovered {";
    for (std::size_t i = 0; i < got.size(); ++i) os << (i ? ", " : "") << fmt("%.8g", got[i]);
    os << "}" << fmt("; round-trip max defect %.3g", worst);
    r.detail = os.str();
  });
}

CriterionResult criterion_membership() {
  return timed(9, "membership-vs-quadrature", 0, [](CriterionResult& r) {
    const double offsets[] = {0.5, 0.1, 0.03, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 0.25, 0.05};
    const double gammas[] = {-0.4, 0.0, 0.3, 0.7, 0.2};
    int agree = 0, total = 0;
    for (int i = 0; i < 10; ++i) {
      const int n = 1 + i % 4;
      const double g = gammas[i % 5];
      const int logpow = i % 3;
      const double edge = g - 0.5 * (n + 1);
      for (double a : {edge - offsets[i], edge + offsets[i]}) {
        ++total;
        if (membership(n, g, a, logpow) == quadrature_says_member(n, g, a, logpow)) ++agree;
      }
    }
    r.passed = agree == total && total == 20;
    r.detail = fmt("%d/%d pairs agree", agree, total);
  });
}

CriterionResult criterion_bessel() {
  return timed(10, "bessel-kit", 0, [](CriterionResult& r) {
    using namespace bessel;
    const double orders[] = {0.0, 0.5, 1.0, 2.5, 3.0, 7.5, 12.0, 20.5, 40.0, 59.0};
    std::vector<double> zs;
    for (int i = 0; i < 10; ++i) zs.push_back(0.05 * std::pow(2e4, i / 9.0));
    double wr = 0.0;
    for (double nu : orders) {
      for (double z : zs) {
        // With e^{-z} I and e^{z} K the Wronskian reads z (I_nu K_{nu+1} + I_{nu+1} K_nu) = 1.
        const double w = z * (bessel_i(nu, z, true) * bessel_k(nu + 1, z, true) + bessel_i(nu + 1, z, true) * bessel_k(nu, z, true));
        wr = std::max(wr, std::abs(w - 1.0));
      }
    }
    double cf = 0.0;
    for (double z : zs) {
      const double pre = std::sqrt(2.0 / (std::numbers::pi * z));
      const double sh = -std::expm1(-2.0 * z) / 2.0;  // e^{-z} sinh z
      const double ch = (1.0 + std::exp(-2.0 * z)) / 2.0;
      const double kpre = std::sqrt(std::numbers::pi / (2.0 * z));
      cf = std::max(cf, rel_diff(bessel_i(0.5, z, true), pre * sh));
      cf = std::max(cf, rel_diff(bessel_k(0.5, z, true), kpre));
      cf = std::max(cf, rel_diff(bessel_k(1.5, z, true), kpre * (1.0 + 1.0 / z)));
      cf = std::max(cf, rel_diff(bessel_k(2.5, z, true), kpre * (1.0 + 3.0 / z + 3.0 / (z * z))));
      if (z >= 0.1) cf = std::max(cf, rel_diff(bessel_i(1.5, z, true), pre * (ch - sh / z)));
    }
    r.passed = wr <= 1e-9 && cf <= 1e-9;
    r.detail = fmt("Wronskian max defect %.3g on 100 points; half-integer closed forms %.3g", wr, cf);
  });
}

std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& on_result) {
  using Fn = CriterionResult (*)();
  const Fn all[] = {criterion_oracle_equality, criterion_worked_cases, criterion_sphere_taylor, criterion_vieta,
                    criterion_exponent_law,    criterion_kernel_scaling, criterion_sectorial,   criterion_recovery,
                    criterion_membership,      criterion_bessel};
  std::vector<CriterionResult> out;
  for (Fn f : all) {
    out.push_back(f());
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  return fmt("%s %d %s (%.2f s): %s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds, r.detail.c_str());
}

}  // namespace coneasym
