#pragma once

#include <stdexcept>
#include <string>

namespace gil {

/// Magnitude partial derivatives are undefined on the zero set of the
/// magnitude; requesting one there raises this.
class SingularPointError : public std::domain_error {
public:
  explicit SingularPointError(const std::string& what) : std::domain_error(what) {}
};

/// A truncated lattice sum whose estimated tail exceeds the admissible
/// fraction of the head.
class TruncationError : public std::runtime_error {
public:
  TruncationError(const std::string& what, double head, double tail)
      : std::runtime_error(what), head_(head), tail_(tail) {}
  double head() const { return head_; }
  double tail() const { return tail_; }

private:
  double head_;
  double tail_;
};

/// Least-squares rate fit requested on degenerate abscissae.
class DegenerateFitError : public std::invalid_argument {
public:
  explicit DegenerateFitError(const std::string& what) : std::invalid_argument(what) {}
};

/// A quantity left the representable double range; carries the log-domain
/// estimate so callers can still report it.
class OutOfRangeError : public std::runtime_error {
public:
  OutOfRangeError(const std::string& what, double log_estimate)
      : std::runtime_error(what), log_estimate_(log_estimate) {}
  double log_estimate() const { return log_estimate_; }

private:
  double log_estimate_;
};

/// Two fields were combined that do not share a grid.
class GridMismatchError : public std::invalid_argument {
public:
  explicit GridMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace gil
