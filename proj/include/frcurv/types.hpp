#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace frc {

// Reference or physical coordinate. Unused trailing components stay zero.
using Point = std::array<double, 3>;
using PointList = std::vector<Point>;

// Bad inputs that the caller can fix (degree, rule size, selector, enum text).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Non-positive Jacobian somewhere in an element.
struct DegenerateMappingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// M_m + K_m lost positive definiteness (c at or below c_-).
struct StabilityDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite state produced during time integration.
struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what), t(time) {}
  double t;
};

}  // namespace frc
