#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gil/grid.hpp"
#include "gil/instability.hpp"
#include "gil/version.hpp"

namespace gil {

/// Shortest decimal that round-trips the double; locale-independent.
inline std::string format_shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Fixed 17-significant-digit form used by the field CSV schema.
inline std::string format_sig17(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

using MetaBlock = std::vector<std::pair<std::string, std::string>>;

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

/// Grid-sampled columns as CSV: '#'-prefixed metadata block, then
/// `x,y,<names...>` rows in x-major order, 17-significant-digit decimals.
inline std::string grid_csv(const GridSpec& grid,
                            const std::vector<std::pair<std::string, const std::vector<double>*>>& cols,
                            const MetaBlock& meta) {
  std::string out;
  out += "# gil ";
  out += kVersion;
  out += "\n";
  for (const auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
  out += "x,y";
  for (const auto& [name, ptr] : cols) out += "," + name;
  out += "\n";
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      std::size_t idx =
          static_cast<std::size_t>(i) * static_cast<std::size_t>(grid.ny) + static_cast<std::size_t>(j);
      out += format_sig17(grid.x(i));
      out += ",";
      out += format_sig17(grid.y(j));
      for (const auto& [name, ptr] : cols) {
        out += ",";
        out += format_sig17((*ptr)[idx]);
      }
      out += "\n";
    }
  }
  return out;
}

inline void write_field_csv(const std::string& path, const MagnitudeField& field,
                            const MetaBlock& meta) {
  std::vector<std::pair<std::string, const std::vector<double>*>> cols;
  cols.emplace_back("value", &field.values);
  if (field.has_derivatives()) {
    cols.emplace_back("dx", &field.dx);
    cols.emplace_back("dy", &field.dy);
  }
  write_text_file(path, grid_csv(field.grid, cols, meta));
}

/// Sweep CSV: `a,measured_l2,measured_w12,bound_l2,bound_w12,ratio` with
/// shortest round-trip decimals.
inline std::string sweep_csv(const std::vector<BoundCertificate>& certs,
                             const std::vector<double>& ratios, const MetaBlock& meta) {
  std::string out;
  out += "# gil ";
  out += kVersion;
  out += "\n";
  for (const auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
  out += "a,measured_l2,measured_w12,bound_l2,bound_w12,ratio\n";
  for (std::size_t i = 0; i < certs.size(); ++i) {
    const auto& c = certs[i];
    out += format_shortest(c.a) + "," + format_shortest(c.measured_l2) + "," +
           format_shortest(c.measured_w12) + "," + format_shortest(c.bound_l2) + "," +
           format_shortest(bound_w12(c.a)) + "," + format_shortest(ratios[i]) + "\n";
  }
  return out;
}

} // namespace gil
