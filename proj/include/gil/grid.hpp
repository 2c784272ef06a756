#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gil {

/// A rectangular sampling grid, endpoints included, uniform spacing.
struct GridSpec {
  double x_min, x_max, y_min, y_max;
  int nx, ny;

  GridSpec(double x_min_, double x_max_, double y_min_, double y_max_, int nx_, int ny_)
      : x_min(x_min_), x_max(x_max_), y_min(y_min_), y_max(y_max_), nx(nx_), ny(ny_) {
    if (!(x_min < x_max) || !(y_min < y_max))
      throw std::invalid_argument("GridSpec: empty extent");
    if (nx < 2 || ny < 2)
      throw std::invalid_argument("GridSpec: need at least 2 samples per axis");
  }

  double hx() const { return (x_max - x_min) / (nx - 1); }
  double hy() const { return (y_max - y_min) / (ny - 1); }
  double x(int i) const { return x_min + i * hx(); }
  double y(int j) const { return y_min + j * hy(); }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }

  bool operator==(const GridSpec& o) const {
    return x_min == o.x_min && x_max == o.x_max && y_min == o.y_min && y_max == o.y_max &&
           nx == o.nx && ny == o.ny;
  }

  /// Default truncation [-2a-6, 2a+6] x [-6, 6] at the stated spacing
  /// (default 1/32): covers the ball of radius 2a around the origin plus a
  /// margin where the Gaussian tails sit far below every tolerance used here.
  static GridSpec default_for(double a, double h = 1.0 / 32.0) {
    double xr = 2.0 * a + 6.0;
    int nx = static_cast<int>(2.0 * xr / h + 0.5) + 1;
    int ny = static_cast<int>(12.0 / h + 0.5) + 1;
    return GridSpec(-xr, xr, -6.0, 6.0, nx, ny);
  }

  GridSpec refined() const {
    return GridSpec(x_min, x_max, y_min, y_max, 2 * nx - 1, 2 * ny - 1);
  }

  GridSpec enlarged(double margin) const {
    int extra_x = static_cast<int>(margin / hx() + 0.5);
    int extra_y = static_cast<int>(margin / hy() + 0.5);
    return GridSpec(x_min - extra_x * hx(), x_max + extra_x * hx(),
                    y_min - extra_y * hy(), y_max + extra_y * hy(),
                    nx + 2 * extra_x, ny + 2 * extra_y);
  }
};

/// Sampled |V_phi f| on a grid, x-major storage, optionally with the analytic
/// partial derivatives of the magnitude. Nodes where the derivative formulas
/// are singular carry 0 in the derivative arrays and are flagged.
struct MagnitudeField {
  GridSpec grid;
  std::vector<double> values;
  std::vector<double> dx; // empty unless sampled with derivatives
  std::vector<double> dy;
  std::vector<unsigned char> singular_mask;
  std::size_t singular_count = 0;

  explicit MagnitudeField(const GridSpec& g, bool with_derivatives = false)
      : grid(g), values(g.size(), 0.0) {
    if (with_derivatives) {
      dx.assign(g.size(), 0.0);
      dy.assign(g.size(), 0.0);
      singular_mask.assign(g.size(), 0);
    }
  }

  bool has_derivatives() const { return !dx.empty(); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(grid.ny) +
           static_cast<std::size_t>(j);
  }
  double& at(int i, int j) { return values[index(i, j)]; }
  double at(int i, int j) const { return values[index(i, j)]; }
};

} // namespace gil
