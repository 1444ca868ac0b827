#include "coneasym/templates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "coneasym/indicial.hpp"
#include "coneasym/weights.hpp"

namespace coneasym {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Accumulates terms, merging coincident exponents.
class TermSet {
 public:
  void add(const ExactReal& exponent, int log_power, const TermOrigin& origin) {
    bool approximate = false;
    for (auto& t : terms_) {
      if (coincide(t.exponent, exponent, approximate)) {
        t.max_log_power = std::max(t.max_log_power, log_power);
        if (std::find(t.origins.begin(), t.origins.end(), origin) == t.origins.end()) t.origins.push_back(origin);
        t.approximate_merge = t.approximate_merge || approximate;
        return;
      }
    }
    terms_.push_back(AsymTerm{exponent, log_power, {origin}, false});
  }

  std::vector<AsymTerm> take() {
    std::sort(terms_.begin(), terms_.end(),
              [](const AsymTerm& a, const AsymTerm& b) { return a.exponent.value < b.exponent.value; });
    return std::move(terms_);
  }

 private:
  std::vector<AsymTerm> terms_;
};

ExactReal shifted_exponent(const ExactReal& mu, int nu) {
  // -mu + 2 nu
  return ExactReal(-mu.value + 2.0 * nu,
                   exact_combine(mu.exact, Rational(2 * nu), [](const Rational& a, const Rational& b) { return b - a; }));
}

ExpansionTemplate make_shell(const CrossSection& cs, double gamma, int k, TemplateValidity validity) {
  ExpansionTemplate t;
  t.n = cs.n();
  t.gamma = gamma;
  t.k = k;
  t.remainder_exponent = gamma + 2.0 * k - 0.5 * (cs.n() + 1);
  t.validity = std::move(validity);
  return t;
}

}  // namespace

std::string describe(const TermOrigin& origin) {
  return std::visit(overloaded{[](const ConstantOrigin&) { return std::string("C_omega"); },
                               [](const EvenShiftOrigin& o) {
                                 return std::string(o.branch == ShiftBranch::Odd ? "odd" : "even") +
                                        "_shift(nu=" + std::to_string(o.nu) + ")";
                               },
                               [](const SpectralOrigin& o) {
                                 return "spectral(j=" + std::to_string(o.j) + ",m=" + std::to_string(o.m) +
                                        ",nu=" + std::to_string(o.nu) + ")";
                               }},
                    origin);
}

const AsymTerm* ExpansionTemplate::find(double exponent, double tol) const {
  for (const auto& t : terms) {
    if (std::abs(t.exponent.value - exponent) <= tol) return &t;
  }
  return nullptr;
}

std::set<std::pair<long long, int>> ExpansionTemplate::signature() const {
  std::set<std::pair<long long, int>> out;
  for (const auto& t : terms) out.emplace(std::llround(t.exponent.value * 1e9), t.max_log_power);
  return out;
}

std::vector<double> ExpansionTemplate::exponents() const {
  std::vector<double> out;
  for (const auto& t : terms) out.push_back(t.exponent.value);
  return out;
}

nlohmann::json term_to_json(const AsymTerm& t) {
  nlohmann::json tj;
  tj["exponent"] = t.exponent.value;
  if (t.exponent.exact) tj["exact_exponent"] = t.exponent.exact->str();
  tj["max_log_power"] = t.max_log_power;
  auto origins = nlohmann::json::array();
  for (const auto& o : t.origins) {
    origins.push_back(std::visit(
        overloaded{[](const ConstantOrigin&) { return nlohmann::json{{"kind", "constant"}}; },
                   [](const EvenShiftOrigin& e) {
                     return nlohmann::json{
                         {"kind", "even_shift"}, {"nu", e.nu}, {"branch", e.branch == ShiftBranch::Odd ? "odd" : "even"}};
                   },
                   [](const SpectralOrigin& s) {
                     return nlohmann::json{{"kind", "spectral"}, {"j", s.j}, {"m", s.m}, {"nu", s.nu}};
                   }},
        o));
  }
  tj["origins"] = origins;
  if (t.approximate_merge) tj["approximate_merge"] = true;
  return tj;
}

nlohmann::json ExpansionTemplate::to_json() const {
  nlohmann::json doc;
  doc["n"] = n;
  doc["gamma"] = gamma;
  doc["k"] = k;
  auto arr = nlohmann::json::array();
  for (const auto& t : terms) arr.push_back(term_to_json(t));
  doc["terms"] = arr;
  doc["remainder_exponent"] = remainder_exponent;
  doc["validity"] = {{"window_nonempty", validity.window_nonempty},
                     {"gamma_inside", validity.gamma_inside},
                     {"truncation_sufficient", validity.truncation_sufficient},
                     {"resonant_indices", validity.resonant_indices}};
  return doc;
}

TemplateValidity check_template_inputs(const CrossSection& cs, double gamma, int k) {
  if (k < 2) throw KTooSmall("template requires k >= 2, got " + std::to_string(k));
  TemplateValidity v;
  const auto window = admissible_window(cs.n(), cs.first_nonzero());
  v.window_nonempty = window.has_value();
  if (!window) throw WindowViolation("admissible weight window is empty for cross-section '" + cs.name() + "'");
  v.gamma_inside = window->contains(gamma);
  if (!v.gamma_inside) {
    std::ostringstream os;
    os.precision(17);
    os << "gamma = " << gamma << " outside admissible window (" << window->lo << ", " << window->hi << ")";
    throw WindowViolation(os.str());
  }
  const double last_mu = indicial_roots(cs.n(), cs.exact_lambda(cs.size() - 1)).mu.value;
  v.truncation_sufficient = last_mu < j_interval(cs.n(), gamma, k).lo;
  for (std::size_t j = 1; j < cs.size(); ++j) {
    const double mu = indicial_roots(cs.n(), cs.exact_lambda(j)).mu.value;
    if (const auto loc = locate_interval(cs.n(), gamma, mu); loc && loc->near_boundary) v.resonant_indices.push_back(j);
  }
  return v;
}

ExpansionTemplate template_closed_form(const CrossSection& cs, double gamma, int k) {
  auto out = make_shell(cs, gamma, k, check_template_inputs(cs, gamma, k));
  const int n = cs.n();
  const int delta1 = n == 1 ? 1 : 0;
  TermSet set;
  set.add(ExactReal(Rational(0)), 0, ConstantOrigin{});
  for (int nu = 1; nu <= k - 1; ++nu) {
    // For n != 2 the odd summand degenerates to the constant and is not emitted.
    if (n == 2) set.add(ExactReal(Rational(2 * nu - 1)), nu, EvenShiftOrigin{nu, ShiftBranch::Odd});
    set.add(ExactReal(Rational(2 * nu)), nu + delta1, EvenShiftOrigin{nu, ShiftBranch::Even});
  }
  for (std::size_t j = 1; j < cs.size(); ++j) {
    const auto mu = indicial_roots(n, cs.exact_lambda(j)).mu;
    const auto loc = locate_interval(n, gamma, mu.value);
    if (!loc || loc->m < 2 || loc->m > k) continue;
    const int m = loc->m;
    for (int nu = 0; nu <= k - m; ++nu) set.add(shifted_exponent(mu, nu), m + nu - 2, SpectralOrigin{j, m, nu});
  }
  out.terms = set.take();
  return out;
}

ExpansionTemplate template_inductive(const CrossSection& cs, double gamma, int k) {
  auto out = make_shell(cs, gamma, k, check_template_inputs(cs, gamma, k));
  const int n = cs.n();
  TermSet set;
  // k = 1: the domain of the extension is the minimal domain plus C_omega.
  set.add(ExactReal(Rational(0)), 0, ConstantOrigin{});
  for (int step = 2; step <= k; ++step) {
    const auto window = j_interval(n, gamma, step);
    const auto poles = pole_set(cs, step);
    for (const auto& pole : poles.poles) {
      if (!window.contains(pole.location.value)) continue;
      const ExactReal exponent(-pole.location.value,
                               pole.location.exact ? std::optional<Rational>(-*pole.location.exact) : std::nullopt);
      const int mode0 = pole.mode_multiplicity(0);
      for (const auto& prov : pole.provenance) {
        const int shift_index = prov.shift / 2;
        if (prov.j == 0) {
          // q_0^- = 0 and, for n = 1, q_0^+ = 0 shifted into J_step; for n = 2, q_0^+ = 1 shifted.
          const bool odd = n == 2 && prov.branch == Branch::Plus;
          if (odd) {
            set.add(exponent, step - 1, EvenShiftOrigin{step - 1, ShiftBranch::Odd});
          } else {
            set.add(exponent, (step - 1) + (mode0 - 1), EvenShiftOrigin{step - 1, ShiftBranch::Even});
          }
        } else if (prov.branch == Branch::Minus) {
          set.add(exponent, step - 2, SpectralOrigin{prov.j, step - shift_index, shift_index});
        }
        // Shifted q_j^+ (j >= 1) never reach J_step for an admissible weight.
      }
    }
  }
  out.terms = set.take();
  return out;
}

nlohmann::json ExpansionReport::to_json() const {
  auto series = [](const std::vector<SeriesTerm>& s) {
    auto arr = nlohmann::json::array();
    for (const auto& t : s) arr.push_back({{"nu", t.nu}, {"exponent", t.exponent}, {"max_log_power", t.max_log_power}});
    return arr;
  };
  nlohmann::json doc;
  doc["template"] = tmpl.to_json();
  doc["s"] = s;
  doc["p"] = p;
  doc["odd_series"] = series(odd_series);
  doc["even_series"] = series(even_series);
  auto blocks = nlohmann::json::array();
  for (const auto& b : spectral_blocks) {
    blocks.push_back({{"m", b.m}, {"j", b.j}, {"mu", b.mu}, {"terms", series(b.terms)}});
  }
  doc["spectral_blocks"] = blocks;
  doc["exponents"] = exponents;
  doc["integer_exponents"] = integer_exponents;
  doc["remainder"] = {{"exponent", remainder_exponent}, {"symbolic", "gamma + 2k - (n+1)/2 - eps"},
                      {"default_epsilon", default_epsilon}};
  return doc;
}

std::string ExpansionReport::to_text() const {
  std::ostringstream os;
  os.precision(10);
  os << "Expansion near the tip: n = " << tmpl.n << ", gamma = " << tmpl.gamma << ", k = " << tmpl.k << ", s = " << s
     << ", p = " << p << "\n";
  os << "  constant c(t)\n";
  for (const auto& t : odd_series) os << "  a_" << t.nu << " x^" << t.exponent << "  (log power <= " << t.max_log_power << ")\n";
  for (const auto& t : even_series) os << "  b x^" << t.exponent << "  (log power <= " << t.max_log_power << ")\n";
  for (const auto& b : spectral_blocks) {
    os << "  block m=" << b.m << " j=" << b.j << " mu=" << b.mu << ":";
    for (const auto& t : b.terms) os << " x^" << t.exponent << "[log<=" << t.max_log_power << "]";
    os << "\n";
  }
  os << "  remainder |v| <= L x^(" << remainder_exponent << " - eps)\n";
  os << "  exponents:";
  for (double e : exponents) os << ' ' << e;
  os << (integer_exponents ? "  (integer: Taylor-type)" : "") << "\n";
  return os.str();
}

ExpansionReport render_uexp(const ExpansionTemplate& tmpl, double s, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("render_uexp: p must lie in (1, inf)");
  if (!(s + 2.0 * tmpl.k > (tmpl.n + 1) / p)) {
    std::ostringstream os;
    os << "continuity hypothesis s + 2k > (n+1)/p fails: " << s + 2.0 * tmpl.k << " <= " << (tmpl.n + 1) / p;
    throw ContinuityHypothesisFailed(os.str());
  }
  ExpansionReport r;
  r.tmpl = tmpl;
  r.s = s;
  r.p = p;
  r.remainder_exponent = tmpl.remainder_exponent;
  const int delta1 = tmpl.n == 1 ? 1 : 0;
  std::map<std::pair<int, std::size_t>, SpectralBlock> blocks;
  for (const auto& term : tmpl.terms) {
    for (const auto& o : term.origins) {
      if (const auto* e = std::get_if<EvenShiftOrigin>(&o)) {
        if (e->branch == ShiftBranch::Odd) {
          r.odd_series.push_back({e->nu, 2.0 * e->nu - 1.0, e->nu});
        } else {
          r.even_series.push_back({e->nu, 2.0 * e->nu, e->nu + delta1});
        }
      } else if (const auto* sp = std::get_if<SpectralOrigin>(&o)) {
        auto& b = blocks[{sp->m, sp->j}];
        b.m = sp->m;
        b.j = sp->j;
        b.mu = -(term.exponent.value - 2.0 * sp->nu);
        // Solution indexing: nu_sol = nu + m - 2 carries log power <= nu_sol.
        const int nu_sol = sp->nu + sp->m - 2;
        b.terms.push_back({nu_sol, term.exponent.value, nu_sol});
      }
    }
    r.exponents.push_back(term.exponent.value);
  }
  auto by_nu = [](const SeriesTerm& a, const SeriesTerm& b) { return a.nu < b.nu; };
  std::sort(r.odd_series.begin(), r.odd_series.end(), by_nu);
  std::sort(r.even_series.begin(), r.even_series.end(), by_nu);
  for (auto& [key, b] : blocks) {
    std::sort(b.terms.begin(), b.terms.end(), by_nu);
    r.spectral_blocks.push_back(std::move(b));
  }
  r.integer_exponents = std::all_of(tmpl.terms.begin(), tmpl.terms.end(), [](const AsymTerm& t) {
    return t.exponent.exact ? t.exponent.exact->is_integer()
                            : std::abs(t.exponent.value - std::round(t.exponent.value)) < 1e-9;
  });
  return r;
}

}  // namespace coneasym
