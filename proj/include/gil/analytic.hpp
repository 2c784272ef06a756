#pragma once

#include <cmath>
#include <complex>

#include "gil/errors.hpp"
#include "gil/signals.hpp"

namespace gil {

/// A point (x, y) of the time-frequency plane.
struct TFPoint {
  double x = 0.0;
  double y = 0.0;
};

enum class PairSign { plus, minus };

inline double sign_factor(PairSign s) { return s == PairSign::plus ? 1.0 : -1.0; }

/// Denominators |1 +- e^{-2 pi i a y + 2 pi a x}| below this are treated as
/// zeros of the magnitude, where the derivative formulas are singular.
inline constexpr double kSingularEta = 1e-14;

/// V_phi phi(x,y) = 2^{-1/2} e^{-pi i x y} e^{-pi/2 (x^2 + y^2)}.
inline complexd gabor_of_gaussian(TFPoint p) {
  double mag = kInvSqrt2 * std::exp(-kPi / 2.0 * (p.x * p.x + p.y * p.y));
  return std::polar(mag, -kPi * p.x * p.y);
}

/// V_phi u_a(x,y) = 2^{-1/2} e^{-pi i a y} e^{-pi i x y}
///                  e^{-pi/2 (x-a)^2} e^{-pi/2 y^2}.
inline complexd gabor_of_shifted(double a, TFPoint p) {
  double dx = p.x - a;
  double mag = kInvSqrt2 * std::exp(-kPi / 2.0 * (dx * dx + p.y * p.y));
  return std::polar(mag, -kPi * p.y * (a + p.x));
}

/// Transforms are linear in the signal.
inline complexd gabor_of_mixture(const GaussianMixture& f, TFPoint p) {
  complexd acc{0.0, 0.0};
  for (const auto& t : f.terms()) acc += t.coeff * gabor_of_shifted(t.shift, p);
  return acc;
}

namespace detail {

/// Shared quantities for the pair transforms at one point. The interference
/// factor eta_± = |1 ± e^{r - i theta}| with r = 2 pi a x, theta = 2 pi a y is
/// evaluated in whichever of its two scalings stays inside double range; the
/// envelope exponent is re-expressed accordingly, so values remain finite for
/// separations far beyond the naive underflow point of e^{-pi a^2 / 2}.
struct PairPoint {
  double a, x, y;
  double r;          // 2 pi a x
  double theta;      // 2 pi a y
  double c, s;       // cos/sin theta
  double mu_plusx;   // -pi/2 ((x+a)^2 + y^2)
  double mu_minusx;  // -pi/2 ((x-a)^2 + y^2)

  PairPoint(double a_, TFPoint p) : a(a_), x(p.x), y(p.y) {
    r = 2.0 * kPi * a * x;
    theta = 2.0 * kPi * a * y;
    c = std::cos(theta);
    s = std::sin(theta);
    double xp = x + a, xm = x - a;
    mu_plusx = -kPi / 2.0 * (xp * xp + y * y);
    mu_minusx = -kPi / 2.0 * (xm * xm + y * y);
  }

  // |e^{-|r|} ± e^{-i theta}| - the scaled interference factor.
  double eta_hat(double sgn) const {
    double e = std::exp(-std::abs(r));
    if (r <= 0.0) return std::hypot(1.0 + sgn * e * c, e * s);
    return std::hypot(e + sgn * c, s);
  }

  // True eta_± = |1 ± e^{r - i theta}|; usable when |r| is moderate.
  double eta(double sgn) const {
    if (r <= 0.0) return eta_hat(sgn);
    return std::exp(r) * eta_hat(sgn);
  }

  bool singular(double sgn) const {
    // eta >= (e^{|r|} - 1) away from r = 0, so zeros require small |r|.
    if (std::abs(r) > 0.5) return false;
    return eta(sgn) < kSingularEta;
  }

  double magnitude(double sgn) const {
    if (r <= 0.0) return kInvSqrt2 * std::exp(mu_plusx) * eta_hat(sgn);
    return kInvSqrt2 * std::exp(mu_minusx) * eta_hat(sgn);
  }
};

} // namespace detail

/// V_phi f_a^{±}(x,y) = V_phi u_{-a}(x,y) ± V_phi u_a(x,y), evaluated in the
/// factored form 2^{-1/2} e^{i pi y (a - x)} e^{mu} (1 ± e^{r - i theta}).
inline complexd gabor_of_pair(PairSign sign, SeparationParam a, TFPoint p) {
  detail::PairPoint pt(a.value, p);
  double sgn = sign_factor(sign);
  double phase = kPi * p.y * (a.value - p.x);
  complexd osc = std::polar(1.0, -pt.theta);
  if (pt.r <= 0.0) {
    double e = std::exp(pt.r);
    complexd bracket = complexd{1.0, 0.0} + sgn * e * osc;
    return std::polar(kInvSqrt2 * std::exp(pt.mu_plusx), phase) * bracket;
  }
  complexd bracket = complexd{std::exp(-pt.r), 0.0} + sgn * osc;
  return std::polar(kInvSqrt2 * std::exp(pt.mu_minusx), phase) * bracket;
}

inline double pair_magnitude(PairSign sign, SeparationParam a, TFPoint p) {
  return detail::PairPoint(a.value, p).magnitude(sign_factor(sign));
}

/// | |V_phi f_a^+| - |V_phi f_a^-| | at a point, from the closed forms.
inline double magnitude_diff(SeparationParam a, TFPoint p) {
  detail::PairPoint pt(a.value, p);
  return std::abs(pt.magnitude(+1.0) - pt.magnitude(-1.0));
}

/// d/dx |V_phi f_a^{±}|. Singular on the zero set of the magnitude.
inline double d_dx_magnitude(PairSign sign, SeparationParam a, TFPoint p) {
  detail::PairPoint pt(a.value, p);
  double sgn = sign_factor(sign);
  if (pt.singular(sgn))
    throw SingularPointError("d_dx_magnitude: magnitude vanishes at this point");
  double eh = pt.eta_hat(sgn);
  double twopia = 2.0 * kPi * pt.a;
  if (pt.r <= 0.0) {
    double e = std::exp(pt.r);
    double term1 = -kPi * (pt.x + pt.a) * eh;
    double term2 = twopia * e * (sgn * pt.c + e) / eh;
    return kInvSqrt2 * std::exp(pt.mu_plusx) * (term1 + term2);
  }
  double e = std::exp(-pt.r);
  double term1 = -kPi * (pt.x + pt.a) * eh;
  double term2 = twopia * (1.0 + sgn * pt.c * e) / eh;
  return kInvSqrt2 * std::exp(pt.mu_minusx) * (term1 + term2);
}

/// d/dy |V_phi f_a^{±}|; same singular set as d_dx_magnitude.
inline double d_dy_magnitude(PairSign sign, SeparationParam a, TFPoint p) {
  detail::PairPoint pt(a.value, p);
  double sgn = sign_factor(sign);
  if (pt.singular(sgn))
    throw SingularPointError("d_dy_magnitude: magnitude vanishes at this point");
  double eh = pt.eta_hat(sgn);
  double twopia = 2.0 * kPi * pt.a;
  if (pt.r <= 0.0) {
    double e = std::exp(pt.r);
    double term1 = -kPi * pt.y * eh;
    double term2 = twopia * e * (-sgn * pt.s) / eh;
    return kInvSqrt2 * std::exp(pt.mu_plusx) * (term1 + term2);
  }
  double e = std::exp(-pt.r);
  double term1 = -kPi * pt.y * eh;
  double term2 = twopia * e * (-sgn * pt.s) / eh;
  return kInvSqrt2 * std::exp(pt.mu_minusx) * (term1 + term2);
}

/// Right-hand sides of the six pointwise estimates: the magnitude difference
/// and each partial-derivative difference against the Gaussian envelope
/// centred at (+a, 0) ("left", decaying from the right lobe) and (-a, 0)
/// ("right").
struct PointwiseBoundSet {
  double mag_left = 0.0;
  double mag_right = 0.0;
  double dx_left = 0.0;
  double dx_right = 0.0;
  double dy_left = 0.0;
  double dy_right = 0.0;
};

inline PointwiseBoundSet pointwise_bounds(SeparationParam a, TFPoint p) {
  double av = a.value;
  double xm = p.x - av, xp = p.x + av;
  double env_left = std::exp(-kPi / 2.0 * (xm * xm + p.y * p.y));
  double env_right = std::exp(-kPi / 2.0 * (xp * xp + p.y * p.y));
  PointwiseBoundSet b;
  b.mag_left = kSqrt2 * env_left;
  b.mag_right = kSqrt2 * env_right;
  b.dx_left = kSqrt2 * (3.0 * av - p.x) * kPi * env_left;
  b.dx_right = kSqrt2 * (3.0 * av + p.x) * kPi * env_right;
  double yfac = std::abs(kPi * p.y) + 2.0 * kPi * av;
  b.dy_left = kSqrt2 * yfac * env_left;
  b.dy_right = kSqrt2 * yfac * env_right;
  return b;
}

/// The two bounded ratios used inside the derivative estimates; both stay
/// below their stated constants (2 and 1) away from the singular set.
struct BoundedRatios {
  double dx_ratio_sum = 0.0; // <= 2
  double dy_ratio_plus = 0.0; // <= 1
  double dy_ratio_minus = 0.0; // <= 1
};

inline BoundedRatios bounded_ratios(SeparationParam a, TFPoint p) {
  detail::PairPoint pt(a.value, p);
  if (pt.singular(+1.0) || pt.singular(-1.0))
    throw SingularPointError("bounded_ratios: point on a magnitude zero set");
  double ehp = pt.eta_hat(+1.0), ehm = pt.eta_hat(-1.0);
  double e = std::exp(-std::abs(pt.r));
  BoundedRatios out;
  if (pt.r <= 0.0) {
    // eta_hat is the true eta here; rho = e.
    out.dx_ratio_sum = std::abs(pt.c + e) / ehp + std::abs(e - pt.c) / ehm;
    out.dy_ratio_plus = std::abs(pt.s) / ehp;
    out.dy_ratio_minus = std::abs(pt.s) / ehm;
  } else {
    // eta = e^{r} eta_hat; divide the scaling into the numerators.
    out.dx_ratio_sum = std::abs(pt.c * e + 1.0) / ehp + std::abs(1.0 - pt.c * e) / ehm;
    out.dy_ratio_plus = std::abs(pt.s) * e / ehp;
    out.dy_ratio_minus = std::abs(pt.s) * e / ehm;
  }
  return out;
}

} // namespace gil
