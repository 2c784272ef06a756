#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gil/errors.hpp"
#include "gil/fit.hpp"
#include "gil/parallel.hpp"
#include "gil/signals.hpp"

// One-dimensional lattice dictionaries (STFT frames and a wavelet system)
// with weighted l^p sparsity penalties on their coefficients. The same
// penalty machinery would apply verbatim to dictionaries acting on the
// two-dimensional transforms themselves; only the 1-D systems are built here.

namespace gil {

/// A window given by uniform samples with linear interpolation; zero outside
/// the sampled interval.
struct SampledWindow {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> samples;

  double t1() const { return t0 + dt * static_cast<double>(samples.size() - 1); }

  double eval(double t) const {
    if (samples.empty() || t < t0 || t > t1()) return 0.0;
    double pos = (t - t0) / dt;
    std::size_t k = std::min(static_cast<std::size_t>(pos), samples.size() - 2);
    double frac = pos - static_cast<double>(k);
    return (1.0 - frac) * samples[k] + frac * samples[k + 1];
  }
};

/// Lattice system g_{n,k}(t) = e^{2 pi i k y0 t} g(t - n x0) with the
/// polynomial weight w(x,y) = ((1+|x|)(1+|y|))^s and l^p exponent p.
struct StftFrameSpec {
  double x0 = 1.0;
  double y0 = 1.0;
  double s = 0.0;
  double p = 1.0;
  GaussianMixture window = GaussianMixture::gaussian();
  std::optional<SampledWindow> sampled_window; // overrides `window` when set
  int n_range = 12;
  int k_range = 12;

  void validate() const {
    if (!(x0 > 0.0) || !(y0 > 0.0))
      throw std::invalid_argument("StftFrameSpec: lattice steps must be positive");
    if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("StftFrameSpec: p must lie in [1,2]");
    if (!(s >= 0.0)) throw std::invalid_argument("StftFrameSpec: s must be >= 0");
    if (n_range < 1 || k_range < 1)
      throw std::invalid_argument("StftFrameSpec: truncation bounds must be >= 1");
  }
};

inline double stft_weight(double x, double y, double s) {
  return std::pow((1.0 + std::abs(x)) * (1.0 + std::abs(y)), s);
}

namespace detail {

/// Overlap of two translated Gaussians against a modulation:
/// int u_s(t) u_c(t) e^{-2 pi i w t} dt
///   = 2^{-1/2} e^{-pi (s-c)^2 / 2} e^{-pi w^2 / 2} e^{-pi i w (s+c)}.
inline complexd modulated_gauss_inner(double s, double c, double w) {
  double mag = kInvSqrt2 * std::exp(-kPi / 2.0 * ((s - c) * (s - c) + w * w));
  return std::polar(mag, -kPi * w * (s + c));
}


} // namespace detail

/// <f, g_{n,k}>. Exact for Gaussian-mixture windows; trapezoidal quadrature at
/// step 1/64 over the joint support for sampled windows.
inline complexd stft_coeff(const GaussianMixture& f, int n, int k, const StftFrameSpec& spec) {
  double omega = static_cast<double>(k) * spec.y0;
  double xshift = static_cast<double>(n) * spec.x0;
  if (!spec.sampled_window) {
    complexd acc{0.0, 0.0};
    for (const auto& ft : f.terms())
      for (const auto& gt : spec.window.terms())
        acc += ft.coeff * std::conj(gt.coeff) *
               detail::modulated_gauss_inner(ft.shift, gt.shift + xshift, omega);
    return acc;
  }
  const SampledWindow& win = *spec.sampled_window;
  if (f.empty() || win.samples.empty()) return {0.0, 0.0};
  double lo = std::max(-f.max_abs_shift() - 8.0, win.t0 + xshift);
  double hi = std::min(f.max_abs_shift() + 8.0, win.t1() + xshift);
  if (!(lo < hi)) return {0.0, 0.0};
  double step = 1.0 / 64.0;
  int nsteps = static_cast<int>(std::ceil((hi - lo) / step));
  complexd acc{0.0, 0.0};
  for (int i = 0; i <= nsteps; ++i) {
    double t = lo + (hi - lo) * static_cast<double>(i) / nsteps;
    double wgt = (i == 0 || i == nsteps) ? 0.5 : 1.0;
    acc += wgt * f.evaluate(t) * win.eval(t - xshift) * std::polar(1.0, -2.0 * kPi * omega * t);
  }
  return acc * ((hi - lo) / nsteps);
}

/// A truncated weighted coefficient sum together with the estimated
/// (super-polynomially small) remainder beyond the truncation box.
struct PenaltySum {
  double head = 0.0;
  double tail = 0.0;
  double value() const { return head; }
};

/// Admissible tail fraction before a truncation is rejected outright.
inline constexpr double kTailRejectFraction = 1e-6;

namespace detail {

/// Per-coefficient magnitude bound for Gaussian-mixture window systems.
inline double stft_coeff_bound(const GaussianMixture& f, const GaussianMixture& g, double xshift,
                               double omega) {
  double acc = 0.0;
  for (const auto& ft : f.terms())
    for (const auto& gt : g.terms()) {
      double d = ft.shift - gt.shift - xshift;
      acc += std::abs(ft.coeff) * std::abs(gt.coeff) *
             kInvSqrt2 * std::exp(-kPi / 2.0 * (d * d + omega * omega));
    }
  return acc;
}

/// Tail of the weighted penalty beyond |n| <= N, |k| <= K for Gaussian
/// windows: the bound factorizes, so the two one-dimensional tails close the
/// whole sum. Sampled windows fall back to a geometric closure of the head's
/// outermost rings (requiring n_range to already cover the support overlap).
inline double stft_penalty_tail(const GaussianMixture& f, const StftFrameSpec& spec) {
  if (spec.sampled_window) return -1.0; // caller handles sampled-window closure
  auto u_term = [&](long n) {
    double b = stft_coeff_bound(f, spec.window, static_cast<double>(n) * spec.x0, 0.0);
    return std::pow(b, spec.p) *
           std::pow(1.0 + std::abs(static_cast<double>(n) * spec.x0), spec.s * spec.p);
  };
  auto v_term = [&](long k) {
    double ky = static_cast<double>(k) * spec.y0;
    return std::exp(-spec.p * kPi / 2.0 * ky * ky) *
           std::pow(1.0 + std::abs(ky), spec.s * spec.p);
  };
  // Mixtures may sit asymmetrically on the lattice, so both sides are summed
  // explicitly.
  auto tail_1d = [](auto&& term, long from) {
    double acc = 0.0;
    for (long i = from;; ++i) {
      double t = term(i) + term(-i);
      acc += t;
      if (t < 1e-320 || i > from + 100000) break;
    }
    return acc;
  };
  auto full_1d = [&](auto&& term, long upto) {
    double acc = term(0);
    for (long i = 1; i <= upto; ++i) acc += term(i) + term(-i);
    return acc;
  };
  double u_tail = tail_1d(u_term, spec.n_range + 1);
  double v_tail = tail_1d(v_term, spec.k_range + 1);
  double u_full = full_1d(u_term, spec.n_range) + u_tail;
  double v_head = full_1d(v_term, spec.k_range);
  return u_tail * (v_head + v_tail) + u_full * v_tail;
}

} // namespace detail

namespace detail {

struct StftPenaltyPair {
  PenaltySum plus;
  PenaltySum minus;
  double difference = 0.0; // termwise-accumulated |sum of per-site differences|
};

template <typename CoeffFn>
StftPenaltyPair stft_lattice_sums(const StftFrameSpec& spec, CoeffFn&& coeff_pm) {
  long nn = 2L * spec.n_range + 1;
  std::vector<double> rows_p(static_cast<std::size_t>(nn), 0.0);
  std::vector<double> rows_m(static_cast<std::size_t>(nn), 0.0);
  std::vector<double> rows_d(static_cast<std::size_t>(nn), 0.0);
  parallel_for(static_cast<std::size_t>(nn), [&](std::size_t idx) {
    int n = static_cast<int>(idx) - spec.n_range;
    double accp = 0.0, accm = 0.0, accd = 0.0;
    for (int k = -spec.k_range; k <= spec.k_range; ++k) {
      auto [cp, cm] = coeff_pm(n, k);
      double w = std::pow(stft_weight(n * spec.x0, k * spec.y0, spec.s), spec.p);
      double tp = std::pow(std::abs(cp), spec.p) * w;
      double tm = std::pow(std::abs(cm), spec.p) * w;
      accp += tp;
      accm += tm;
      accd += tp - tm;
    }
    rows_p[idx] = accp;
    rows_m[idx] = accm;
    rows_d[idx] = accd;
  });
  StftPenaltyPair out;
  out.plus.head = pairwise_sum(rows_p);
  out.minus.head = pairwise_sum(rows_m);
  out.difference = std::abs(pairwise_sum(rows_d));
  return out;
}

} // namespace detail

/// Weighted l^p penalty sum sum_{n,k} |<f, g_{n,k}>|^p w(n x0, k y0)^p over
/// the truncation box, with a tail estimate. Rejects truncations whose
/// estimated tail exceeds kTailRejectFraction of the head.
inline PenaltySum stft_penalty(const GaussianMixture& f, const StftFrameSpec& spec) {
  spec.validate();
  if (f.empty()) return {};
  auto sums = detail::stft_lattice_sums(
      spec, [&](int n, int k) -> std::pair<complexd, complexd> {
        complexd c = stft_coeff(f, n, k, spec);
        return {c, complexd{0.0, 0.0}};
      });
  PenaltySum out = sums.plus;
  double tail = detail::stft_penalty_tail(f, spec);
  if (tail < 0.0) {
    // Sampled window: geometric closure of the outermost k-rings; the n-range
    // must already cover the support overlap, beyond which coefficients are
    // exactly zero.
    const SampledWindow& win = *spec.sampled_window;
    double reach = f.max_abs_shift() + 8.0 + std::max(std::abs(win.t0), std::abs(win.t1()));
    if (static_cast<double>(spec.n_range) * spec.x0 < reach)
      throw TruncationError("stft_penalty: n_range does not cover the window/signal overlap",
                            out.head, std::numeric_limits<double>::infinity());
    auto ring = [&](int k_abs) {
      double acc = 0.0;
      for (int n = -spec.n_range; n <= spec.n_range; ++n) {
        for (int k : {-k_abs, k_abs}) {
          acc += std::pow(std::abs(stft_coeff(f, n, k, spec)), spec.p) *
                 std::pow(stft_weight(n * spec.x0, k * spec.y0, spec.s), spec.p);
          if (k_abs == 0) break;
        }
      }
      return acc;
    };
    double s_last = ring(spec.k_range);
    double s_prev = ring(spec.k_range - 1);
    if (s_prev <= 0.0) {
      tail = 0.0;
    } else {
      double rho = s_last / s_prev;
      if (rho >= 0.9)
        throw TruncationError("stft_penalty: k-rings show no decay at the truncation edge",
                              out.head, std::numeric_limits<double>::infinity());
      tail = s_last * rho / (1.0 - rho);
    }
  }
  out.tail = tail;
  if (out.head > 0.0 && out.tail > kTailRejectFraction * out.head)
    throw TruncationError("stft_penalty: estimated tail exceeds 1e-6 of the head", out.head,
                          out.tail);
  return out;
}

/// Verified comparison of the pair penalties against the calibrated envelope
/// C (1+a)^{s p - m + 1}.
struct PenaltyReport {
  double a = 0.0;
  double penalty_plus = 0.0;
  double penalty_minus = 0.0;
  double difference = 0.0;
  double envelope_bound = 0.0;
  bool pass = false;
};

namespace detail {

inline StftPenaltyPair stft_pair_penalties(SeparationParam a, const StftFrameSpec& spec) {
  auto [fp, fm] = gil::make_pair(a);
  auto sums = stft_lattice_sums(spec, [&](int n, int k) -> std::pair<complexd, complexd> {
    return {stft_coeff(fp, n, k, spec), stft_coeff(fm, n, k, spec)};
  });
  double tail = stft_penalty_tail(fp, spec);
  sums.plus.tail = tail;
  sums.minus.tail = stft_penalty_tail(fm, spec);
  return sums;
}

} // namespace detail

/// Reference separation at which the envelope constant is calibrated (then
/// asserted on all larger separations, with a 1.1 safety factor).
inline constexpr double kPenaltyCalibrationA = 2.0;
inline constexpr double kPenaltyCalibrationSafety = 1.1;

/// | ||f_a^+|| - ||f_a^-|| | for the STFT penalty, with the order bound
/// C_fit (1 + a)^{s p - m + 1}, m > s p + 1.
inline PenaltyReport stft_penalty_difference(SeparationParam a, const StftFrameSpec& spec, int m) {
  spec.validate();
  if (!(static_cast<double>(m) > spec.s * spec.p + 1.0))
    throw std::invalid_argument("stft_penalty_difference: need m > s p + 1");
  auto sums = detail::stft_pair_penalties(a, spec);
  double exponent = spec.s * spec.p - static_cast<double>(m) + 1.0;
  auto cal = detail::stft_pair_penalties(SeparationParam(kPenaltyCalibrationA), spec);
  double c_fit = kPenaltyCalibrationSafety * cal.difference /
                 std::pow(1.0 + kPenaltyCalibrationA, exponent);
  PenaltyReport rep;
  rep.a = a.value;
  rep.penalty_plus = sums.plus.head;
  rep.penalty_minus = sums.minus.head;
  rep.difference = sums.difference;
  rep.envelope_bound = c_fit * std::pow(1.0 + a.value, exponent);
  rep.pass = rep.difference <= rep.envelope_bound * (1.0 + 1e-6);
  return rep;
}

// ---------------------------------------------------------------------------
// Wavelet system: psi = normalized m-th derivative of the Gaussian, chi = phi.
// ---------------------------------------------------------------------------

namespace detail {

/// Physicists' Hermite polynomial by recurrence.
inline double hermite_poly(int m, double u) {
  double h0 = 1.0;
  if (m == 0) return h0;
  double h1 = 2.0 * u;
  for (int i = 1; i < m; ++i) {
    double h2 = 2.0 * u * h1 - 2.0 * static_cast<double>(i) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

/// m-th derivative of e^{-pi t^2}: (-1)^m pi^{m/2} H_m(sqrt(pi) t) e^{-pi t^2}.
inline double gaussian_derivative(int m, double t) {
  double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(kPi, m / 2.0) * hermite_poly(m, std::sqrt(kPi) * t) *
         std::exp(-kPi * t * t);
}

/// || d^m/dt^m e^{-pi t^2} ||_{L2}^2 = 2^{-1/2} ((2m)!/m!) (pi/2)^m.
inline double gaussian_derivative_sq_norm(int m) {
  double ratio = 1.0; // (2m)!/m!
  for (int i = m + 1; i <= 2 * m; ++i) ratio *= static_cast<double>(i);
  return kInvSqrt2 * ratio * std::pow(kPi / 2.0, m);
}

/// sup_u |phi^{(m)}(u)| e^{pi u^2 / 2}, used by the tail majorants.
inline double gaussian_derivative_envelope(int m) {
  static std::array<double, 33> cache{};
  static std::array<bool, 33> ready{};
  if (m >= 0 && m < 33 && ready[static_cast<std::size_t>(m)])
    return cache[static_cast<std::size_t>(m)];
  double best = 0.0;
  double hi = 6.0 + static_cast<double>(m);
  for (double u = 0.0; u <= hi; u += 1.0 / 512.0)
    best = std::max(best, std::abs(gaussian_derivative(m, u)) * std::exp(kPi * u * u / 2.0));
  best *= 1.001;
  if (m >= 0 && m < 33) {
    cache[static_cast<std::size_t>(m)] = best;
    ready[static_cast<std::size_t>(m)] = true;
  }
  return best;
}

} // namespace detail

/// The unit-norm analyzing wavelet: m-th Gaussian derivative, which has
/// exactly m vanishing moments and super-polynomial decay.
inline double hermite_wavelet(int m, double t) {
  if (m < 1) throw std::invalid_argument("hermite_wavelet: m must be >= 1");
  return detail::gaussian_derivative(m, t) / std::sqrt(detail::gaussian_derivative_sq_norm(m));
}

/// Dyadic-type system psi_{j,k}(t) = alpha^{j/2} psi(alpha^j t - beta k) with
/// scaling atoms chi_{0,k} = phi(. - beta k); sigma = s + 1/2 - 1/p.
struct WaveletSpec {
  double alpha = 2.0;
  double beta = 1.0;
  int m = 1;
  double s = 0.0;
  double p = 1.0;
  int j_max = 6;
  int k_max = 64;

  double sigma() const { return s + 0.5 - 1.0 / p; }

  void validate() const {
    if (!(alpha > 1.0)) throw std::invalid_argument("WaveletSpec: alpha must exceed 1");
    if (!(beta > 0.0)) throw std::invalid_argument("WaveletSpec: beta must be positive");
    if (m < 1) throw std::invalid_argument("WaveletSpec: m must be >= 1");
    if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("WaveletSpec: p must lie in [1,2]");
    if (!(s >= 0.0)) throw std::invalid_argument("WaveletSpec: s must be >= 0");
    if (j_max < 0 || k_max < 1)
      throw std::invalid_argument("WaveletSpec: truncation bounds out of range");
  }
};

namespace detail {

inline complexd wavelet_coeff_c(const GaussianMixture& f, int j, int k, const WaveletSpec& spec) {
  if (f.empty()) return {0.0, 0.0};
  double aj = std::pow(spec.alpha, j);
  double center = spec.beta * static_cast<double>(k) / aj;
  double atom_radius = (8.0 + static_cast<double>(spec.m)) / aj;
  double lo = std::max(-f.max_abs_shift() - 8.0, center - atom_radius);
  double hi = std::min(f.max_abs_shift() + 8.0, center + atom_radius);
  if (!(lo < hi)) return {0.0, 0.0};
  double step = std::min(1.0 / 64.0, 1.0 / (16.0 * aj));
  int nsteps = static_cast<int>(std::ceil((hi - lo) / step));
  double scale = std::sqrt(aj);
  complexd acc{0.0, 0.0};
  for (int i = 0; i <= nsteps; ++i) {
    double t = lo + (hi - lo) * static_cast<double>(i) / nsteps;
    double wgt = (i == 0 || i == nsteps) ? 0.5 : 1.0;
    acc += wgt * f.evaluate(t) *
           (scale * hermite_wavelet(spec.m, aj * t - spec.beta * static_cast<double>(k)));
  }
  return acc * ((hi - lo) / nsteps);
}

} // namespace detail

/// <f, psi_{j,k}> by trapezoidal quadrature at step min(1/64, alpha^{-j}/16)
/// over the joint support. Real-valued for the real mixtures used here.
inline double wavelet_coeff(const GaussianMixture& f, int j, int k, const WaveletSpec& spec) {
  if (j < 0) throw std::invalid_argument("wavelet_coeff: j must be >= 0");
  spec.validate();
  return detail::wavelet_coeff_c(f, j, k, spec).real();
}

/// <f, chi_{0,k}> with chi = phi: an exact Gaussian overlap.
inline complexd scaling_coeff(const GaussianMixture& f, int k, const WaveletSpec& spec) {
  return inner_product(f, GaussianMixture::translate(spec.beta * static_cast<double>(k)));
}

namespace detail {

/// Per-atom magnitude majorant exploiting the m vanishing moments:
/// |<u_s, psi_{j,k}>| <= (Q_m / N_m) alpha^{j(1/2 - m)} (1/2 + alpha^{2j})^{-1/2}
///                       exp(-c_j (s - beta k alpha^{-j})^2),
/// c_j = pi alpha^{2j} / (1 + 2 alpha^{2j}).
struct WaveletMajorant {
  double prefactor;
  double c_j;
  double aj;

  WaveletMajorant(int j, const WaveletSpec& spec) {
    aj = std::pow(spec.alpha, j);
    double a2 = aj * aj;
    double qm = gaussian_derivative_envelope(spec.m);
    double nm = std::sqrt(gaussian_derivative_sq_norm(spec.m));
    prefactor = qm / nm * std::pow(aj, 0.5 - static_cast<double>(spec.m)) / std::sqrt(0.5 + a2);
    c_j = kPi * a2 / (1.0 + 2.0 * a2);
  }

  double bound(const GaussianMixture& f, double beta_k) const {
    double acc = 0.0;
    for (const auto& t : f.terms()) {
      double d = t.shift - beta_k / aj;
      acc += std::abs(t.coeff) * std::exp(-c_j * d * d);
    }
    return prefactor * acc;
  }
};

/// Weighted tail of the wavelet penalty beyond (j <= j_max, |k| <= k_max).
inline double besov_tail(const GaussianMixture& f, const WaveletSpec& spec) {
  if (f.empty()) return 0.0;
  double sp = spec.sigma() * spec.p;
  double d_total = 0.0, max_shift = 0.0;
  for (const auto& t : f.terms()) {
    d_total += std::abs(t.coeff);
    max_shift = std::max(max_shift, std::abs(t.shift));
  }
  double tail = 0.0;

  // Scaling-row tail: exact Gaussian overlaps.
  auto chi_term = [&](long k) {
    double acc = 0.0;
    for (const auto& t : f.terms()) {
      double d = t.shift - spec.beta * static_cast<double>(k);
      acc += std::abs(t.coeff) * kInvSqrt2 * std::exp(-kPi / 2.0 * d * d);
    }
    return std::pow(acc, spec.p);
  };
  for (long k = spec.k_max + 1;; ++k) {
    double term = chi_term(k) + chi_term(-k);
    tail += term;
    if (term < 1e-320 ||
        spec.beta * static_cast<double>(k) > max_shift + std::sqrt(1500.0 / kPi) + 2.0)
      break;
  }

  // k-tails of the retained rows.
  for (int j = 0; j <= spec.j_max; ++j) {
    WaveletMajorant maj(j, spec);
    double wj = std::pow(std::pow(spec.alpha, j), sp);
    double reach = (max_shift + std::sqrt(1500.0 / maj.c_j) + 2.0) * maj.aj / spec.beta;
    for (long k = spec.k_max + 1;; ++k) {
      double bk = spec.beta * static_cast<double>(k);
      double term = std::pow(maj.bound(f, bk), spec.p) + std::pow(maj.bound(f, -bk), spec.p);
      tail += wj * term;
      if (term < 1e-320 || static_cast<double>(k) > reach) break;
    }
  }

  // Whole rows beyond j_max, closed with the lattice-count overestimate
  // sum_k exp(-p c_j (.)^2) <= 1 + (alpha^j / beta) sqrt(pi / (p c_j)).
  double prev = -1.0;
  for (int j = spec.j_max + 1; j <= spec.j_max + 4000; ++j) {
    WaveletMajorant maj(j, spec);
    double wj = std::pow(std::pow(spec.alpha, j), sp);
    double count = 1.0 + maj.aj / spec.beta * std::sqrt(kPi / (spec.p * maj.c_j));
    double row = wj * std::pow(d_total * maj.prefactor, spec.p) * count;
    if (prev >= 0.0 && row >= prev)
      return std::numeric_limits<double>::infinity(); // no decay: cannot close the tail
    tail += row;
    if (row < 1e-320) break;
    prev = row;
  }
  return tail;
}

struct WaveletPenaltyPair {
  PenaltySum plus;
  PenaltySum minus;
  double difference = 0.0;
};

/// Heads of both pair penalties plus the termwise difference, sharing one
/// sweep of the lattice. Row sums are combined pairwise in a fixed order.
inline WaveletPenaltyPair wavelet_pair_penalty_sums(const GaussianMixture& fp,
                                                    const GaussianMixture& fm,
                                                    const WaveletSpec& spec) {
  std::size_t rows = static_cast<std::size_t>(spec.j_max) + 2; // scaling row + wavelet rows
  std::vector<double> rp(rows, 0.0), rm(rows, 0.0), rd(rows, 0.0);
  parallel_for(rows, [&](std::size_t row) {
    double accp = 0.0, accm = 0.0, accd = 0.0;
    if (row == 0) {
      for (int k = -spec.k_max; k <= spec.k_max; ++k) {
        double tp = std::pow(std::abs(scaling_coeff(fp, k, spec)), spec.p);
        double tm = std::pow(std::abs(scaling_coeff(fm, k, spec)), spec.p);
        accp += tp;
        accm += tm;
        accd += tp - tm;
      }
    } else {
      int j = static_cast<int>(row) - 1;
      double wj = std::pow(std::pow(spec.alpha, j), spec.sigma() * spec.p);
      for (int k = -spec.k_max; k <= spec.k_max; ++k) {
        double tp = std::pow(std::abs(wavelet_coeff_c(fp, j, k, spec)), spec.p) * wj;
        double tm = std::pow(std::abs(wavelet_coeff_c(fm, j, k, spec)), spec.p) * wj;
        accp += tp;
        accm += tm;
        accd += tp - tm;
      }
    }
    rp[row] = accp;
    rm[row] = accm;
    rd[row] = accd;
  });
  WaveletPenaltyPair out;
  out.plus.head = pairwise_sum(rp);
  out.minus.head = pairwise_sum(rm);
  out.difference = std::abs(pairwise_sum(rd));
  return out;
}

} // namespace detail

/// Weighted Besov-type penalty
/// sum_k |<f, chi_{0,k}>|^p + sum_j alpha^{j sigma p} sum_k |<f, psi_{j,k}>|^p
/// over the truncation box, with a moment-aware tail estimate.
inline PenaltySum besov_penalty(const GaussianMixture& f, const WaveletSpec& spec) {
  spec.validate();
  if (!(spec.s <= static_cast<double>(spec.m) + 1.0))
    throw std::invalid_argument("besov_penalty: need s <= m + 1");
  if (f.empty()) return {};
  auto sums = detail::wavelet_pair_penalty_sums(f, GaussianMixture{}, spec);
  PenaltySum out = sums.plus;
  out.tail = detail::besov_tail(f, spec);
  if (out.head > 0.0 && !(out.tail <= kTailRejectFraction * out.head))
    throw TruncationError("besov_penalty: estimated tail exceeds 1e-6 of the head", out.head,
                          out.tail);
  return out;
}

/// | ||f_a^+|| - ||f_a^-|| | for the wavelet penalty, with the order bound
/// C_fit a^{-m} under the moment hypothesis 2m - sigma p + 3/2 > 0.
inline PenaltyReport wavelet_penalty_difference(SeparationParam a, const WaveletSpec& spec) {
  spec.validate();
  if (!(2.0 * static_cast<double>(spec.m) - spec.sigma() * spec.p + 1.5 > 0.0))
    throw std::invalid_argument("wavelet_penalty_difference: need 2m - sigma p + 3/2 > 0");
  auto pair_at = [&](double av) {
    auto [fp, fm] = gil::make_pair(SeparationParam(av));
    auto sums = detail::wavelet_pair_penalty_sums(fp, fm, spec);
    double tail = std::max(detail::besov_tail(fp, spec), detail::besov_tail(fm, spec));
    if (sums.plus.head > 0.0 && !(tail <= kTailRejectFraction * sums.plus.head))
      throw TruncationError("wavelet_penalty_difference: estimated tail exceeds 1e-6 of the head",
                            sums.plus.head, tail);
    return sums;
  };
  auto sums = pair_at(a.value);
  auto cal = pair_at(kPenaltyCalibrationA);
  double c_fit = kPenaltyCalibrationSafety * cal.difference *
                 std::pow(kPenaltyCalibrationA, static_cast<double>(spec.m));
  PenaltyReport rep;
  rep.a = a.value;
  rep.penalty_plus = sums.plus.head;
  rep.penalty_minus = sums.minus.head;
  rep.difference = sums.difference;
  rep.envelope_bound = c_fit * std::pow(a.value, -static_cast<double>(spec.m));
  rep.pass = rep.difference <= rep.envelope_bound * (1.0 + 1e-6);
  return rep;
}

/// Floor below which wavelet coefficients are considered numerically gone.
inline constexpr double kCoeffFloor = 1e-300;

/// Least-squares slope of log |<phi, psi_{j,k}>| against log(beta |k|) at a
/// fixed scale.
inline double decay_slope(int j_fixed, const std::vector<int>& k_values, const WaveletSpec& spec) {
  spec.validate();
  if (j_fixed < 0) throw std::invalid_argument("decay_slope: j must be >= 0");
  if (k_values.size() < 4) throw std::invalid_argument("decay_slope: need at least 4 k values");
  GaussianMixture phi = GaussianMixture::gaussian();
  std::vector<double> xs, ys;
  xs.reserve(k_values.size());
  ys.reserve(k_values.size());
  for (int k : k_values) {
    if (k == 0) throw std::invalid_argument("decay_slope: k must be nonzero");
    double c = std::abs(detail::wavelet_coeff_c(phi, j_fixed, k, spec));
    if (!(c > kCoeffFloor))
      throw OutOfRangeError("decay_slope: coefficient below the 1e-300 floor at k=" +
                                std::to_string(k),
                            c > 0.0 ? std::log(c) : -std::numeric_limits<double>::infinity());
    xs.push_back(std::log(spec.beta * std::abs(static_cast<double>(k))));
    ys.push_back(std::log(c));
  }
  return fit_linear(xs, ys).slope;
}

} // namespace gil
