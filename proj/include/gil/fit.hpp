#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "gil/errors.hpp"

namespace gil {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

/// Ordinary least squares of y against x. Throws DegenerateFitError when the
/// abscissae carry no variance (fewer than two distinct points).
inline LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
  std::size_t n = x.size();
  if (n != y.size() || n < 2)
    throw DegenerateFitError("fit_linear: need at least two paired samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0))
    throw DegenerateFitError("fit_linear: abscissae are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (syy > 0.0) {
    double ss_res = syy - sxy * sxy / sxx;
    f.r_squared = 1.0 - ss_res / syy;
  } else {
    f.r_squared = 1.0;
  }
  return f;
}

} // namespace gil
