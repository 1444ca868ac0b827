#include "coneasym/spectra.hpp"

#include <cmath>
#include <sstream>

namespace coneasym {

namespace {

long long binomial(long long a, long long b) {
  if (b < 0 || a < b) return 0;
  long long out = 1;
  for (long long i = 1; i <= b; ++i) out = out * (a - b + i) / i;
  return out;
}

void validate(int n, const std::vector<ExactReal>& eig, const std::vector<int>& mult) {
  if (n < 1) throw SpectrumError("cross-section dimension must be >= 1");
  if (eig.empty()) throw SpectrumError("spectrum must contain lambda_0 = 0");
  if (eig.size() != mult.size()) throw SpectrumError("eigenvalues and multiplicities differ in length");
  const auto& top = eig.front();
  const bool top_zero = top.exact ? top.exact->num() == 0 : std::abs(top.value) <= kEigenvalueTolerance;
  if (!top_zero) throw NonZeroTop("lambda_0 must be 0");
  if (mult.front() != 1) throw BadMultiplicity("lambda_0 = 0 must be simple (connected cross-section)");
  for (std::size_t j = 0; j < mult.size(); ++j) {
    if (mult[j] < 1) throw BadMultiplicity("multiplicity must be >= 1 at index " + std::to_string(j));
  }
  for (std::size_t j = 1; j < eig.size(); ++j) {
    const auto& prev = eig[j - 1];
    const auto& cur = eig[j];
    bool decreasing = false;
    if (prev.exact && cur.exact) {
      decreasing = *cur.exact < *prev.exact;
    } else {
      decreasing = cur.value < prev.value - kEigenvalueTolerance;
    }
    if (!decreasing) {
      throw NotDecreasing("eigenvalues must be strictly decreasing (and negative after lambda_0); index " +
                          std::to_string(j));
    }
  }
}

}  // namespace

CrossSection::CrossSection(int n, std::string name, std::vector<ExactReal> eigenvalues,
                           std::vector<int> multiplicities)
    : n_(n), name_(std::move(name)), eigenvalues_(std::move(eigenvalues)),
      multiplicities_(std::move(multiplicities)) {
  validate(n_, eigenvalues_, multiplicities_);
  eigenvalues_.front() = ExactReal(Rational(0));
}

double CrossSection::first_nonzero() const {
  if (eigenvalues_.size() < 2) throw SpectrumError("cross-section '" + name_ + "' has no lambda_1");
  return eigenvalues_[1].value;
}

nlohmann::json CrossSection::to_json() const {
  nlohmann::json doc;
  doc["n"] = n_;
  doc["name"] = name_;
  auto values = nlohmann::json::array();
  auto exact = nlohmann::json::array();
  bool all_exact = true;
  for (const auto& e : eigenvalues_) {
    values.push_back(e.value);
    if (e.exact) {
      exact.push_back(e.exact->str());
    } else {
      all_exact = false;
    }
  }
  doc["eigenvalues"] = values;
  doc["multiplicities"] = multiplicities_;
  if (all_exact) doc["exact_eigenvalues"] = exact;
  return doc;
}

CrossSection CrossSection::from_json(const nlohmann::json& doc) {
  const int n = doc.at("n").get<int>();
  const auto name = doc.value("name", std::string("custom"));
  const auto values = doc.at("eigenvalues").get<std::vector<double>>();
  const auto mult = doc.at("multiplicities").get<std::vector<int>>();
  std::vector<ExactReal> eig;
  eig.reserve(values.size());
  if (doc.contains("exact_eigenvalues")) {
    const auto exact = doc.at("exact_eigenvalues").get<std::vector<std::string>>();
    if (exact.size() != values.size()) throw SpectrumError("exact_eigenvalues length mismatch");
    for (const auto& s : exact) eig.emplace_back(Rational::parse(s));
  } else {
    for (double v : values) eig.emplace_back(v);
  }
  return CrossSection(n, name, std::move(eig), mult);
}

bool operator==(const CrossSection& a, const CrossSection& b) {
  if (a.n_ != b.n_ || a.multiplicities_ != b.multiplicities_ || a.eigenvalues_.size() != b.eigenvalues_.size()) {
    return false;
  }
  for (std::size_t j = 0; j < a.eigenvalues_.size(); ++j) {
    const auto& x = a.eigenvalues_[j];
    const auto& y = b.eigenvalues_[j];
    if (x.exact && y.exact) {
      if (*x.exact != *y.exact) return false;
    } else if (std::abs(x.value - y.value) > kEigenvalueTolerance) {
      return false;
    }
  }
  return true;
}

long long sphere_harmonic_dimension(int n, int j) {
  if (n < 1 || j < 0) throw std::invalid_argument("sphere_harmonic_dimension: n >= 1, j >= 0 required");
  return binomial(j + n, n) - binomial(j + n - 2, n);
}

CrossSection sphere_spectrum(int n, int j_max) {
  if (n < 1) throw std::invalid_argument("sphere_spectrum: n must be >= 1");
  if (j_max < 0) throw std::invalid_argument("sphere_spectrum: j_max must be >= 0");
  std::vector<ExactReal> eig;
  std::vector<int> mult;
  for (int j = 0; j <= j_max; ++j) {
    eig.emplace_back(Rational(-static_cast<std::int64_t>(j) * (j + n - 1)));
    mult.push_back(static_cast<int>(sphere_harmonic_dimension(n, j)));
  }
  return CrossSection(n, "s" + std::to_string(n), std::move(eig), std::move(mult));
}

CrossSection circle_spectrum_exact(const Rational& radius_squared, int j_max) {
  if (radius_squared <= Rational(0)) throw std::invalid_argument("circle_spectrum: radius must be > 0");
  if (j_max < 0) throw std::invalid_argument("circle_spectrum: j_max must be >= 0");
  std::vector<ExactReal> eig;
  std::vector<int> mult;
  for (int j = 0; j <= j_max; ++j) {
    eig.emplace_back(Rational(-static_cast<std::int64_t>(j) * j) / radius_squared);
    mult.push_back(j == 0 ? 1 : 2);
  }
  std::ostringstream name;
  name << "circle(r^2=" << radius_squared << ")";
  return CrossSection(1, name.str(), std::move(eig), std::move(mult));
}

CrossSection circle_spectrum(double radius, int j_max) {
  if (!(radius > 0.0)) throw std::invalid_argument("circle_spectrum: radius must be > 0");
  if (const auto r2 = recognize_rational(radius * radius)) return circle_spectrum_exact(*r2, j_max);
  if (j_max < 0) throw std::invalid_argument("circle_spectrum: j_max must be >= 0");
  std::vector<ExactReal> eig;
  std::vector<int> mult;
  for (int j = 0; j <= j_max; ++j) {
    eig.emplace_back(-static_cast<double>(j) * j / (radius * radius));
    mult.push_back(j == 0 ? 1 : 2);
  }
  std::ostringstream name;
  name.precision(17);
  name << "circle(r=" << radius << ")";
  return CrossSection(1, name.str(), std::move(eig), std::move(mult));
}

CrossSection custom_spectrum(int n, const std::vector<std::pair<ExactReal, int>>& pairs, std::string name) {
  std::vector<ExactReal> eig;
  std::vector<int> mult;
  for (const auto& [lambda, m] : pairs) {
    eig.push_back(lambda);
    mult.push_back(m);
  }
  return CrossSection(n, std::move(name), std::move(eig), std::move(mult));
}

CrossSection named_cross_section(const std::string& spec, int j_max) {
  if (spec.size() >= 2 && spec[0] == 's' && spec.find_first_not_of("0123456789", 1) == std::string::npos) {
    return sphere_spectrum(std::stoi(spec.substr(1)), j_max);
  }
  const std::string prefix = "circle:";
  if (spec.rfind(prefix, 0) == 0) {
    const auto arg = spec.substr(prefix.size());
    if (arg.rfind("sqrt(", 0) == 0 && arg.back() == ')') {
      return circle_spectrum_exact(Rational::parse(arg.substr(5, arg.size() - 6)), j_max);
    }
    if (arg.find('/') != std::string::npos) {
      const auto r = Rational::parse(arg);
      return circle_spectrum_exact(r * r, j_max);
    }
    return circle_spectrum(std::stod(arg), j_max);
  }
  throw std::invalid_argument("unknown cross-section '" + spec + "' (expected sN or circle:<r>)");
}

}  // namespace coneasym
