#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gil {

using complexd = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kSqrt2 = 1.41421356237309504880;

/// Shifts closer than this are the same atom; terms merge by coefficient
/// addition.
inline constexpr double kShiftMergeTol = 1e-12;

/// Strictly positive lobe-separation parameter.
struct SeparationParam {
  explicit SeparationParam(double a) : value(a) {
    if (!(a > 0.0))
      throw std::invalid_argument("SeparationParam: a must be > 0");
  }
  double value;
};

struct GaussianTerm {
  complexd coeff;
  double shift; // seconds
};

/// A finite linear combination of unit-width Gaussian translates
/// t -> sum_i coeff_i * exp(-pi (t - shift_i)^2).
/// Immutable after construction; the empty mixture is the zero signal.
class GaussianMixture {
public:
  GaussianMixture() = default;

  explicit GaussianMixture(std::vector<GaussianTerm> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const GaussianTerm& l, const GaussianTerm& r) { return l.shift < r.shift; });
    for (const auto& t : terms) {
      if (!terms_.empty() && std::abs(terms_.back().shift - t.shift) <= kShiftMergeTol) {
        terms_.back().coeff += t.coeff;
      } else {
        terms_.push_back(t);
      }
    }
    std::erase_if(terms_, [](const GaussianTerm& t) { return t.coeff == complexd{0.0, 0.0}; });
  }

  static GaussianMixture gaussian() { return GaussianMixture({{complexd{1.0, 0.0}, 0.0}}); }

  /// T_a phi, the window translated by `a`.
  static GaussianMixture translate(double a) { return GaussianMixture({{complexd{1.0, 0.0}, a}}); }

  const std::vector<GaussianTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  double max_abs_shift() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.shift));
    return m;
  }

  complexd evaluate(double t) const {
    complexd acc{0.0, 0.0};
    for (const auto& term : terms_) {
      double d = t - term.shift;
      acc += term.coeff * std::exp(-kPi * d * d);
    }
    return acc;
  }

  GaussianMixture scaled(complexd factor) const {
    std::vector<GaussianTerm> out = terms_;
    for (auto& t : out) t.coeff *= factor;
    return GaussianMixture(std::move(out));
  }

  friend GaussianMixture operator+(const GaussianMixture& f, const GaussianMixture& g) {
    std::vector<GaussianTerm> all = f.terms_;
    all.insert(all.end(), g.terms_.begin(), g.terms_.end());
    return GaussianMixture(std::move(all));
  }

  friend GaussianMixture operator-(const GaussianMixture& f, const GaussianMixture& g) {
    return f + g.scaled(complexd{-1.0, 0.0});
  }

private:
  std::vector<GaussianTerm> terms_;
};

/// The adversarial couple (u_{-a} + u_a, u_{-a} - u_a).
inline std::pair<GaussianMixture, GaussianMixture> make_pair(SeparationParam a) {
  GaussianMixture plus({{complexd{1.0, 0.0}, -a.value}, {complexd{1.0, 0.0}, a.value}});
  GaussianMixture minus({{complexd{1.0, 0.0}, -a.value}, {complexd{-1.0, 0.0}, a.value}});
  return {plus, minus};
}

/// Exact L2(R) inner product <f, g>; for unit-width Gaussian translates the
/// overlap integral is 2^{-1/2} exp(-pi (s - s')^2 / 2).
inline complexd inner_product(const GaussianMixture& f, const GaussianMixture& g) {
  complexd acc{0.0, 0.0};
  for (const auto& ft : f.terms()) {
    for (const auto& gt : g.terms()) {
      double d = ft.shift - gt.shift;
      acc += ft.coeff * std::conj(gt.coeff) * (kInvSqrt2 * std::exp(-kPi * d * d / 2.0));
    }
  }
  return acc;
}

inline double squared_norm(const GaussianMixture& f) {
  return std::max(0.0, inner_product(f, f).real());
}

inline double norm(const GaussianMixture& f) { return std::sqrt(squared_norm(f)); }

/// Metric modulo a global unimodular factor:
/// inf_{|tau|=1} ||f - tau g|| = sqrt(||f||^2 + ||g||^2 - 2 |<f,g>|).
inline double quotient_distance(const GaussianMixture& f, const GaussianMixture& g) {
  double s = squared_norm(f) + squared_norm(g) - 2.0 * std::abs(inner_product(f, g));
  return std::sqrt(std::max(0.0, s));
}

/// Dimension of span{ T_s phi : s = -kq, ..., kq }, i.e. 2k + 1. Distinct
/// Gaussian translates are linearly independent, so no rank defect occurs.
inline int subspace_dim(int k, double q) {
  if (k < 1) throw std::invalid_argument("subspace_dim: k must be >= 1");
  if (!(q > 0.0)) throw std::invalid_argument("subspace_dim: q must be > 0");
  return 2 * k + 1;
}

} // namespace gil
