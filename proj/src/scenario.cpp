#include "coneasym/scenario.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <utility>

#include "coneasym/weights.hpp"

namespace coneasym {

namespace {

template <class T>
T get_or(const nlohmann::json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario field '") + key + "': " + e.what());
  }
}

void require_object(const nlohmann::json& doc, const char* what) {
  if (!doc.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
}

}  // namespace

CrossSection cross_section_from_json(const nlohmann::json& spec, int j_max) {
  if (spec.is_string()) {
    try {
      return named_cross_section(spec.get<std::string>(), j_max);
    } catch (const SpectrumError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (spec.is_object()) {
    try {
      return CrossSection::from_json(spec);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("cross_section: ") + e.what());
    }
  }
  throw ConfigError("cross_section must be a name or an object");
}

double resolve_gamma(const std::string& text, const CrossSection& cs) {
  if (text == "midpoint") {
    const auto w = admissible_window(cs.n(), cs.first_nonzero());
    if (!w) throw WindowViolation("admissible weight window is empty for " + cs.name());
    return w->midpoint();
  }
  std::size_t used = 0;
  double g = 0.0;
  try {
    g = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw ConfigError("gamma must be a number or \"midpoint\", got '" + text + "'");
  return g;
}

Scenario scenario_from_json(const nlohmann::json& doc) {
  require_object(doc, "scenario");
  if (!doc.contains("cross_section")) throw ConfigError("scenario needs a cross_section");
  const int j_max = get_or<int>(doc, "j_max", 8);
  if (j_max < 1) throw ConfigError("j_max must be at least 1");
  Scenario sc(cross_section_from_json(doc.at("cross_section"), j_max));

  const auto& g = doc.contains("gamma") ? doc.at("gamma") : nlohmann::json("midpoint");
  if (g.is_string()) {
    sc.gamma_is_midpoint = g.get<std::string>() == "midpoint";
    sc.gamma = resolve_gamma(g.get<std::string>(), sc.cross_section);
  } else if (g.is_number()) {
    sc.gamma = g.get<double>();
  } else {
    throw ConfigError("gamma must be a number or \"midpoint\"");
  }
  sc.k = get_or<int>(doc, "k", 2);
  sc.s = get_or<double>(doc, "s", 0.0);
  sc.p = get_or<double>(doc, "p", 2.0);
  // Raises WindowViolation / KTooSmall before anything runs.
  check_template_inputs(sc.cross_section, sc.gamma, sc.k);

  if (doc.contains("solver")) {
    const auto& so = doc.at("solver");
    require_object(so, "solver");
    sc.solver.modes = get_or<std::vector<std::size_t>>(so, "modes", {});
    sc.solver.times = get_or<std::vector<double>>(so, "t", {1.0});
    sc.solver.rel_tol = get_or<double>(so, "rel_tol", 1e-9);
    if (so.contains("profile")) {
      try {
        sc.solver.profile = so.at("profile").get<InitialProfile>();
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("solver.profile: ") + e.what());
      }
    }
    if (so.contains("grid")) {
      const auto& gr = so.at("grid");
      require_object(gr, "solver.grid");
      sc.solver.grid.lo = get_or<double>(gr, "lo", 1e-4);
      sc.solver.grid.hi = get_or<double>(gr, "hi", 1e-1);
      sc.solver.grid.per_decade = get_or<int>(gr, "per_decade", 16);
    }
  }
  sc.solver.profile.validate();
  for (double t : sc.solver.times) {
    if (!(t > 0.0)) throw ConfigError("solver.t entries must be positive");
  }
  for (std::size_t j : sc.solver.modes) {
    if (j >= sc.cross_section.size()) throw ConfigError("solver.modes index " + std::to_string(j) + " exceeds j_max");
  }
  const auto& gr = sc.solver.grid;
  if (!(gr.lo > 0.0 && gr.lo < gr.hi) || gr.per_decade < 1) throw ConfigError("solver.grid needs 0 < lo < hi and per_decade >= 1");
  if (gr.hi >= sc.solver.profile.x_lo) throw ConfigError("solver.grid must end left of the profile support");
  if (!(sc.solver.rel_tol > 0.0)) throw ConfigError("solver.rel_tol must be positive");

  if (doc.contains("fit")) {
    const auto& fi = doc.at("fit");
    require_object(fi, "fit");
    if (fi.contains("window")) {
      const auto w = get_or<std::vector<double>>(fi, "window", {});
      if (w.size() != 2 || !(w[0] > 0.0 && w[0] < w[1])) throw ConfigError("fit.window must be [lo, hi] with 0 < lo < hi");
      sc.fit.window = {w[0], w[1]};
    }
    sc.fit.max_terms = get_or<int>(fi, "max_terms", 3);
    sc.fit.noise_level = get_or<double>(fi, "noise_level", 1e-9);
    if (sc.fit.max_terms < 1) throw ConfigError("fit.max_terms must be at least 1");
  }

  if (doc.contains("outputs")) {
    const auto& o = doc.at("outputs");
    require_object(o, "outputs");
    sc.outputs.samples = get_or<std::string>(o, "samples", "");
    sc.outputs.fits = get_or<std::string>(o, "fits", "");
    sc.outputs.tmpl = get_or<std::string>(o, "template", "");
    sc.outputs.summary = get_or<std::string>(o, "summary", "");
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scenario file '" + path + "': " + e.what());
  }
  return scenario_from_json(doc);
}

nlohmann::json Scenario::to_json() const {
  nlohmann::json doc;
  doc["cross_section"] = cross_section.to_json();
  doc["gamma"] = gamma;
  doc["k"] = k;
  doc["s"] = s;
  doc["p"] = p;
  doc["solver"] = {{"modes", solver.modes},
                   {"t", solver.times},
                   {"profile", solver.profile},
                   {"grid", {{"lo", solver.grid.lo}, {"hi", solver.grid.hi}, {"per_decade", solver.grid.per_decade}}},
                   {"rel_tol", solver.rel_tol}};
  doc["fit"] = {{"window", {fit.window.lo, fit.window.hi}}, {"max_terms", fit.max_terms}, {"noise_level", fit.noise_level}};
  return doc;
}

std::vector<ModeSolution> solve_scenario(const Scenario& sc) {
  std::vector<std::size_t> modes = sc.solver.modes;
  if (modes.empty()) {
    for (std::size_t j = 0; j < sc.cross_section.size(); ++j) modes.push_back(j);
  }
  const auto grid = log_spaced_grid(sc.solver.grid.lo, sc.solver.grid.hi, sc.solver.grid.per_decade);
  std::vector<ModeSolution> out;
  for (std::size_t j : modes) {
    for (double t : sc.solver.times) {
      const auto mp = make_mode_problem(sc.cross_section.n(), sc.cross_section.lambda(j), sc.solver.profile, t, j);
      out.push_back(heat_mode(mp, grid, sc.solver.rel_tol));
    }
  }
  return out;
}

std::vector<FitReport> fit_solutions(const std::vector<ModeSolution>& solutions, const FitSettings& fit,
                                     const ExpansionTemplate* tmpl) {
  FitOptions opt;
  opt.noise_level = fit.noise_level;
  std::vector<FitReport> out;
  for (const auto& sol : solutions) {
    auto chain = peel_exponents(sol.samples, fit.window, fit.max_terms, opt, sol.j);
    for (auto& r : chain) {
      if (tmpl) match_template(r, *tmpl);
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<ModeSolution> read_mode_csv(std::istream& is, int n) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("mode_j,nu,t,x,value", 0) != 0) {
    throw ConfigError("samples CSV must start with the header mode_j,nu,t,x,value");
  }
  std::vector<ModeSolution> out;
  std::map<std::pair<std::size_t, double>, std::size_t> index;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell[5];
    for (auto& c : cell) {
      if (!std::getline(row, c, ',')) throw ConfigError("samples CSV line " + std::to_string(lineno) + ": expected 5 columns");
    }
    std::size_t j = 0;
    double nu = 0.0, t = 0.0, x = 0.0, v = 0.0;
    try {
      j = std::stoul(cell[0]);
      nu = std::stod(cell[1]);
      t = std::stod(cell[2]);
      x = std::stod(cell[3]);
      v = std::stod(cell[4]);
    } catch (const std::exception&) {
      throw ConfigError("samples CSV line " + std::to_string(lineno) + ": not numeric");
    }
    const auto key = std::make_pair(j, t);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      ModeSolution sol;
      sol.n = n;
      sol.j = j;
      sol.nu = nu;
      sol.t = t;
      out.push_back(sol);
    }
    out[it->second].samples.push_back({x, v});
  }
  return out;
}

}  // namespace coneasym
