#pragma once

// Independent numerical oracles for the test suites: direct quadrature of the
// defining integrals, quasi-random point sequences, and derivative-free
// helpers. Nothing here calls into the closed-form evaluation paths it is
// used to check.

#include <cmath>
#include <complex>
#include <vector>

#include "gil/signals.hpp"

namespace oracle {

using gil::complexd;
using gil::GaussianMixture;
using gil::kPi;

template <typename F>
double trap1(F&& f, double lo, double hi, double step) {
  int n = static_cast<int>(std::ceil((hi - lo) / step));
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    double t = lo + (hi - lo) * i / n;
    acc += ((i == 0 || i == n) ? 0.5 : 1.0) * f(t);
  }
  return acc * (hi - lo) / n;
}

template <typename F>
complexd ctrap1(F&& f, double lo, double hi, double step) {
  int n = static_cast<int>(std::ceil((hi - lo) / step));
  complexd acc{0.0, 0.0};
  for (int i = 0; i <= n; ++i) {
    double t = lo + (hi - lo) * i / n;
    acc += ((i == 0 || i == n) ? 0.5 : 1.0) * f(t);
  }
  return acc * ((hi - lo) / n);
}

/// Transform integral evaluated directly from its definition.
inline complexd gabor_direct(const GaussianMixture& f, double x, double y, double radius,
                             double step) {
  return ctrap1(
      [&](double t) {
        double w = t - x;
        return f.evaluate(t) * std::exp(-kPi * w * w) * std::polar(1.0, -2.0 * kPi * t * y);
      },
      -radius, radius, step);
}

/// L2 inner product by quadrature.
inline complexd inner_product_quad(const GaussianMixture& f, const GaussianMixture& g,
                                   double radius, double step) {
  return ctrap1([&](double t) { return f.evaluate(t) * std::conj(g.evaluate(t)); }, -radius,
                radius, step);
}

/// Van der Corput / Halton low-discrepancy sequence.
inline double halton(unsigned long i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

/// Derivatives of exp(-pi t^2) via the polynomial recurrence
/// q_{l+1}(t) = q_l'(t) - 2 pi t q_l(t), independent of the library's
/// Hermite-based evaluation.
inline double gauss_derivative(int order, double t) {
  std::vector<double> q{1.0}; // coefficients of the polynomial factor
  for (int l = 0; l < order; ++l) {
    std::vector<double> next(q.size() + 1, 0.0);
    for (std::size_t d = 1; d < q.size(); ++d) next[d - 1] += q[d] * static_cast<double>(d);
    for (std::size_t d = 0; d < q.size(); ++d) next[d + 1] -= 2.0 * kPi * q[d];
    q = std::move(next);
  }
  double poly = 0.0;
  for (std::size_t d = q.size(); d-- > 0;) poly = poly * t + q[d];
  return poly * std::exp(-kPi * t * t);
}

/// Taylor polynomial of exp(-pi t^2) at w, of degree (moments - 1).
inline double gauss_taylor(int moments, double w, double t) {
  double acc = 0.0, fact = 1.0;
  for (int l = 0; l < moments; ++l) {
    if (l > 0) fact *= l;
    acc += gauss_derivative(l, w) * std::pow(t - w, l) / fact;
  }
  return acc;
}

/// Cholesky feasibility of a symmetric matrix; the positive-definiteness
/// oracle for Gram matrices.
inline bool cholesky_spd(std::vector<double> m, int n) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = m[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        sum -= m[static_cast<std::size_t>(i) * n + k] * m[static_cast<std::size_t>(j) * n + k];
      if (i == j) {
        if (!(sum > 0.0)) return false;
        m[static_cast<std::size_t>(i) * n + j] = std::sqrt(sum);
      } else {
        m[static_cast<std::size_t>(i) * n + j] = sum / m[static_cast<std::size_t>(j) * n + j];
      }
    }
  }
  return true;
}

} // namespace oracle
