#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "gil/analytic.hpp"
#include "gil/errors.hpp"
#include "gil/fft.hpp"
#include "gil/grid.hpp"
#include "gil/parallel.hpp"
#include "gil/signals.hpp"

namespace gil {

namespace detail {

inline double trap_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

/// L2 quadrature of a node-indexed difference, accumulated against the
/// largest entry so the result stays representable long after the squares
/// would underflow. Row sums are pairwise-combined in a fixed order.
template <typename Getter>
double trapezoid_l2(const GridSpec& g, Getter&& val) {
  double max_abs = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) max_abs = std::max(max_abs, std::abs(val(i, j)));
  if (max_abs == 0.0) return 0.0;
  std::vector<double> row_sums(static_cast<std::size_t>(g.nx));
  for (int i = 0; i < g.nx; ++i) {
    double wi = trap_weight(i, g.nx);
    double acc = 0.0;
    for (int j = 0; j < g.ny; ++j) {
      double v = val(i, j) / max_abs;
      acc += wi * trap_weight(j, g.ny) * v * v;
    }
    row_sums[static_cast<std::size_t>(i)] = acc;
  }
  double s = pairwise_sum(row_sums);
  return max_abs * std::sqrt(s * g.hx() * g.hy());
}

} // namespace detail

/// Samples |V_phi f_a^+| and |V_phi f_a^-| (optionally with the analytic
/// magnitude partials) from the closed forms. Derivative entries on the
/// magnitudes' zero sets are set to 0 and flagged. Rows are sampled in
/// parallel; every node value is computed independently, so the result does
/// not depend on the worker count.
inline std::pair<MagnitudeField, MagnitudeField>
sample_pair_fields(SeparationParam a, const GridSpec& grid, bool with_derivatives = false) {
  MagnitudeField plus(grid, with_derivatives);
  MagnitudeField minus(grid, with_derivatives);
  parallel_for(static_cast<std::size_t>(grid.nx), [&](std::size_t ii) {
    int i = static_cast<int>(ii);
    double x = grid.x(i);
    for (int j = 0; j < grid.ny; ++j) {
      TFPoint p{x, grid.y(j)};
      std::size_t idx = plus.index(i, j);
      detail::PairPoint pt(a.value, p);
      plus.values[idx] = pt.magnitude(+1.0);
      minus.values[idx] = pt.magnitude(-1.0);
      if (with_derivatives) {
        auto fill = [&](MagnitudeField& f, PairSign s) {
          try {
            f.dx[idx] = d_dx_magnitude(s, a, p);
            f.dy[idx] = d_dy_magnitude(s, a, p);
          } catch (const SingularPointError&) {
            f.dx[idx] = 0.0;
            f.dy[idx] = 0.0;
            f.singular_mask[idx] = 1;
          }
        };
        fill(plus, PairSign::plus);
        fill(minus, PairSign::minus);
      }
    }
  });
  auto count = [](MagnitudeField& f) {
    if (!f.singular_mask.empty())
      for (auto m : f.singular_mask) f.singular_count += m;
  };
  count(plus);
  count(minus);
  return {std::move(plus), std::move(minus)};
}

/// |V_phi f| of an arbitrary mixture, from the closed forms.
inline MagnitudeField sample_magnitude_field(const GaussianMixture& f, const GridSpec& grid) {
  MagnitudeField out(grid);
  parallel_for(static_cast<std::size_t>(grid.nx), [&](std::size_t ii) {
    int i = static_cast<int>(ii);
    double x = grid.x(i);
    for (int j = 0; j < grid.ny; ++j)
      out.values[out.index(i, j)] = std::abs(gabor_of_mixture(f, TFPoint{x, grid.y(j)}));
  });
  return out;
}

/// Discretizes the transform integral directly: per x-column, a rectangle-rule
/// sample of f(t) phi(t-x) e^{-2 pi i t y}, evaluated at FFT bins after
/// zero-padding to bin width <= hy/4 and linearly interpolated to the grid's
/// y-values. Serves as the numerical cross-check of the closed forms.
inline MagnitudeField stft_fft(const GaussianMixture& sig, const GridSpec& grid, double t_step,
                               double t_radius) {
  if (!(t_step > 0.0) || t_step > 1.0 / 16.0 + 1e-15)
    throw std::invalid_argument("stft_fft: t_step must be in (0, 1/16]");
  if (t_radius < sig.max_abs_shift() + 6.0)
    throw std::invalid_argument("stft_fft: t_radius must cover max shift + 6");
  double y_abs = std::max(std::abs(grid.y_min), std::abs(grid.y_max));
  if (y_abs >= 0.5 / t_step)
    throw std::invalid_argument("stft_fft: grid frequencies exceed the Nyquist rate");

  MagnitudeField out(grid);
  if (sig.empty()) return out;

  std::size_t n_samples = static_cast<std::size_t>(std::floor(2.0 * t_radius / t_step + 0.5));
  std::size_t m = 1;
  double min_m = std::max(static_cast<double>(n_samples), 4.0 / (grid.hy() * t_step));
  while (static_cast<double>(m) < min_m) m <<= 1;
  // Keep doubling while the grid's y-values miss the bin lattice; for the
  // dyadic default grids this already holds at the minimal size.
  auto on_bins = [&](std::size_t mm) {
    double span = static_cast<double>(mm) * t_step;
    double a1 = span * grid.hy(), a2 = span * grid.y_min;
    return std::abs(a1 - std::round(a1)) < 1e-9 && std::abs(a2 - std::round(a2)) < 1e-9;
  };
  while (!on_bins(m) && m < (1u << 17)) m <<= 1;

  const double bin_hz = 1.0 / (static_cast<double>(m) * t_step);
  parallel_for(static_cast<std::size_t>(grid.nx), [&](std::size_t ii) {
    int i = static_cast<int>(ii);
    double x = grid.x(i);
    std::vector<complexd> buf(m, complexd{0.0, 0.0});
    for (std::size_t n = 0; n < n_samples; ++n) {
      double t = -t_radius + static_cast<double>(n) * t_step;
      double w = t - x;
      buf[n] = sig.evaluate(t) * std::exp(-kPi * w * w);
    }
    detail::fft_pow2(buf);
    for (int j = 0; j < grid.ny; ++j) {
      double pos = grid.y(j) / bin_hz;
      double base = std::floor(pos);
      double frac = pos - base;
      auto wrap = [&](long long k) {
        long long mm = static_cast<long long>(m);
        return static_cast<std::size_t>(((k % mm) + mm) % mm);
      };
      long long k0 = static_cast<long long>(base);
      double m0 = std::abs(buf[wrap(k0)]);
      double m1 = std::abs(buf[wrap(k0 + 1)]);
      out.values[out.index(i, j)] = t_step * ((1.0 - frac) * m0 + frac * m1);
    }
  });
  return out;
}

/// Trapezoidal || fa - fb ||_{L2} over the common grid.
inline double l2_norm_diff(const MagnitudeField& fa, const MagnitudeField& fb) {
  if (!(fa.grid == fb.grid)) throw GridMismatchError("l2_norm_diff: grids differ");
  return detail::trapezoid_l2(fa.grid, [&](int i, int j) { return fa.at(i, j) - fb.at(i, j); });
}

/// Trapezoidal L2 norm of a single field.
inline double l2_norm(const MagnitudeField& f) {
  return detail::trapezoid_l2(f.grid, [&](int i, int j) { return f.at(i, j); });
}

/// L2 norms of the partial-derivative differences; both require derivative
/// arrays on identical grids.
inline double l2_norm_dx_diff(const MagnitudeField& fa, const MagnitudeField& fb) {
  if (!(fa.grid == fb.grid)) throw GridMismatchError("l2_norm_dx_diff: grids differ");
  if (!fa.has_derivatives() || !fb.has_derivatives())
    throw std::invalid_argument("l2_norm_dx_diff: fields lack derivative arrays");
  return detail::trapezoid_l2(
      fa.grid, [&](int i, int j) { return fa.dx[fa.index(i, j)] - fb.dx[fb.index(i, j)]; });
}

inline double l2_norm_dy_diff(const MagnitudeField& fa, const MagnitudeField& fb) {
  if (!(fa.grid == fb.grid)) throw GridMismatchError("l2_norm_dy_diff: grids differ");
  if (!fa.has_derivatives() || !fb.has_derivatives())
    throw std::invalid_argument("l2_norm_dy_diff: fields lack derivative arrays");
  return detail::trapezoid_l2(
      fa.grid, [&](int i, int j) { return fa.dy[fa.index(i, j)] - fb.dy[fb.index(i, j)]; });
}

/// || fa - fb ||_{L2} + || grad fa - grad fb ||_{L2}, the Sobolev-norm
/// distance used by the instability certificates. Requires derivative arrays.
inline double sobolev_norm_diff(const MagnitudeField& fa, const MagnitudeField& fb) {
  if (!(fa.grid == fb.grid)) throw GridMismatchError("sobolev_norm_diff: grids differ");
  if (!fa.has_derivatives() || !fb.has_derivatives())
    throw std::invalid_argument("sobolev_norm_diff: fields lack derivative arrays");
  return l2_norm_diff(fa, fb) + std::hypot(l2_norm_dx_diff(fa, fb), l2_norm_dy_diff(fa, fb));
}

} // namespace gil
