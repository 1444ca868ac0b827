#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace coneasym {

class QuadratureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 16-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre16 {
  std::array<double, 16> nodes;
  std::array<double, 16> weights;
};

const GaussLegendre16& gauss_legendre_16();

template <class T>
struct QuadResult {
  T value{};
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

struct QuadOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int max_depth = 20;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T, class F>
T gl_panel(F& f, double a, double b, std::size_t& evals, double* abs_sum = nullptr) {
  const auto& rule = gauss_legendre_16();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  T acc{};
  double mag = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    const T v = f(mid + half * rule.nodes[i]);
    acc += rule.weights[i] * v;
    mag += rule.weights[i] * magnitude(v);
  }
  evals += 16;
  if (abs_sum) *abs_sum = mag * std::abs(half);
  return acc * half;
}

template <class T, class F>
void refine(F& f, double a, double b, T whole, double tol, int depth, const QuadOptions& opt, QuadResult<T>& out) {
  const double mid = 0.5 * (a + b);
  double mag_left = 0.0, mag_right = 0.0;
  const T left = gl_panel<T>(f, a, mid, out.evaluations, &mag_left);
  const T right = gl_panel<T>(f, mid, b, out.evaluations, &mag_right);
  const T halves = left + right;
  const double err = magnitude(halves - whole);
  // Differences at the rounding level of the panel cannot be refined away.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (mag_left + mag_right);
  if (err <= std::max(tol, noise) || depth >= opt.max_depth) {
    if (err > std::max(tol, noise)) out.converged = false;
    out.value += halves;
    out.error_estimate += err;
    return;
  }
  refine(f, a, mid, left, 0.5 * tol, depth + 1, opt, out);
  refine(f, mid, b, right, 0.5 * tol, depth + 1, opt, out);
}

}  // namespace detail

/// Adaptive panel Gauss-Legendre quadrature with dyadic refinement.
///
/// The tolerance is relative to a coarse estimate of the whole integral (taken
/// over `initial_panels` equal panels) and split evenly between halves on
/// refinement. T is double or std::complex<double>.
template <class T, class F>
QuadResult<T> integrate(F&& f, double a, double b, const QuadOptions& opt = {}, int initial_panels = 4) {
  QuadResult<T> out;
  if (!(b > a)) return out;
  const double width = (b - a) / initial_panels;
  std::array<T, 64> coarse{};
  if (initial_panels < 1 || initial_panels > 64) throw std::invalid_argument("integrate: 1..64 initial panels");
  double scale = 0.0;
  for (int p = 0; p < initial_panels; ++p) {
    coarse[p] = detail::gl_panel<T>(f, a + p * width, a + (p + 1) * width, out.evaluations);
    scale += detail::magnitude(coarse[p]);
  }
  const double tol = std::max(opt.rel_tol * scale, opt.abs_tol);
  for (int p = 0; p < initial_panels; ++p) {
    detail::refine(f, a + p * width, a + (p + 1) * width, coarse[p], tol / initial_panels, 0, opt, out);
  }
  return out;
}

}  // namespace coneasym
