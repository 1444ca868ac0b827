#include "coneasym/indicial.hpp"

#include <algorithm>
#include <cmath>

namespace coneasym {

IndicialData indicial_roots(int n, const ExactReal& lambda) {
  if (lambda.value > kEigenvalueTolerance || (lambda.exact && *lambda.exact > Rational(0))) {
    throw PositiveEigenvalue("indicial_roots: eigenvalue must be <= 0");
  }
  const double half = 0.5 * (n - 1);
  const Rational half_exact(n - 1, 2);

  IndicialData out;
  out.lambda = lambda;

  std::optional<Rational> nu_exact;
  if (lambda.exact) {
    try {
      nu_exact = exact_sqrt(half_exact * half_exact - *lambda.exact);
    } catch (const std::overflow_error&) {
      nu_exact.reset();
    }
  }
  const double nu = nu_exact ? nu_exact->to_double() : std::sqrt(half * half - lambda.value);
  out.nu = ExactReal(nu, nu_exact);
  out.q_minus = ExactReal(half - nu, exact_combine(Rational(half_exact), nu_exact, std::minus<>()));
  out.q_plus = ExactReal(half + nu, exact_combine(Rational(half_exact), nu_exact, std::plus<>()));
  // lambda = 0 gives q_minus = 0 exactly even on the floating path.
  if (!out.q_minus.exact && lambda.value == 0.0) out.q_minus = ExactReal(Rational(0));
  out.mu = out.q_minus;
  return out;
}

std::complex<double> conormal_symbol_delta(int n, double lambda, std::complex<double> z) {
  return z * z - static_cast<double>(n - 1) * z + lambda;
}

std::complex<double> conormal_symbol_power(int n, double lambda, int k, std::complex<double> z) {
  if (k < 1) throw std::invalid_argument("conormal_symbol_power: k must be >= 1");
  std::complex<double> out = 1.0;
  for (int i = 0; i < k; ++i) out *= conormal_symbol_delta(n, lambda, z + 2.0 * i);
  return out;
}

std::complex<double> Polynomial::operator()(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::shifted(double shift) const {
  // Horner in polynomial arithmetic: p(z + s) = (...(c_d (z+s) + c_{d-1})(z+s) + ...).
  Polynomial out(std::vector<double>{});
  const Polynomial lin(std::vector<double>{shift, 1.0});
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    out = out * lin;
    if (out.coeffs_.empty()) out.coeffs_.push_back(0.0);
    out.coeffs_[0] += *it;
  }
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.coeffs_.empty() || b.coeffs_.empty()) return Polynomial();
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial mode_polynomial(int n, double lambda, int k) {
  if (k < 1) throw std::invalid_argument("mode_polynomial: k must be >= 1");
  const Polynomial sigma(std::vector<double>{lambda, -static_cast<double>(n - 1), 1.0});
  Polynomial out(std::vector<double>{1.0});
  for (int i = 0; i < k; ++i) out = out * sigma.shifted(2.0 * i);
  return out;
}

int Pole::mode_multiplicity(std::size_t j) const {
  return static_cast<int>(std::count_if(provenance.begin(), provenance.end(),
                                        [j](const PoleProvenance& p) { return p.j == j; }));
}

const Pole* PoleSet::find(double location, double tol) const {
  for (const auto& p : poles) {
    if (std::abs(p.location.value - location) <= tol) return &p;
  }
  return nullptr;
}

nlohmann::json PoleSet::to_json() const {
  nlohmann::json doc;
  doc["k"] = k;
  auto arr = nlohmann::json::array();
  for (const auto& p : poles) {
    nlohmann::json pj;
    pj["location"] = p.location.value;
    if (p.location.exact) pj["exact_location"] = p.location.exact->str();
    pj["order"] = p.order;
    pj["approximate_merge"] = p.approximate_merge;
    auto prov = nlohmann::json::array();
    for (const auto& e : p.provenance) {
      prov.push_back({{"j", e.j}, {"branch", e.branch == Branch::Minus ? "-" : "+"}, {"shift", e.shift}});
    }
    pj["provenance"] = prov;
    arr.push_back(pj);
  }
  doc["poles"] = arr;
  return doc;
}

bool coincide(const ExactReal& a, const ExactReal& b, bool& approximate, double tol) {
  if (a.exact && b.exact) return *a.exact == *b.exact;
  if (std::abs(a.value - b.value) <= tol) {
    approximate = true;
    return true;
  }
  return false;
}

PoleSet pole_set(const CrossSection& cs, int k) {
  if (k < 1) throw std::invalid_argument("pole_set: k must be >= 1");
  PoleSet out;
  out.k = k;
  for (std::size_t j = 0; j < cs.size(); ++j) {
    const auto roots = indicial_roots(cs.n(), cs.exact_lambda(j));
    for (const Branch branch : {Branch::Minus, Branch::Plus}) {
      const ExactReal& q = branch == Branch::Minus ? roots.q_minus : roots.q_plus;
      for (int i = 0; i < k; ++i) {
        const int shift = 2 * i;
        const ExactReal loc(q.value - shift, exact_combine(q.exact, Rational(shift), std::minus<>()));
        const PoleProvenance prov{j, branch, shift};
        bool approximate = false;
        auto it = std::find_if(out.poles.begin(), out.poles.end(),
                               [&](const Pole& p) { return coincide(p.location, loc, approximate); });
        if (it == out.poles.end()) {
          out.poles.push_back(Pole{loc, 1, {prov}, false});
        } else {
          it->provenance.push_back(prov);
          it->approximate_merge = it->approximate_merge || approximate;
        }
      }
    }
  }
  for (auto& p : out.poles) {
    int order = 0;
    for (std::size_t j = 0; j < cs.size(); ++j) order = std::max(order, p.mode_multiplicity(j));
    p.order = order;
  }
  std::sort(out.poles.begin(), out.poles.end(),
            [](const Pole& a, const Pole& b) { return a.location.value < b.location.value; });
  return out;
}

}  // namespace coneasym
