#pragma once

#include <stdexcept>
#include <string>

namespace s2s1 {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// geometry
struct NotSkew final : Error { using Error::Error; };
struct DegenerateRotation final : Error { using Error::Error; };

// chart
struct PoleSingularity final : Error { using Error::Error; };

// transport and inner loop
struct AlignedSingularity final : Error { using Error::Error; };
struct AntipodalSingularity final : Error { using Error::Error; };
struct NumericalBlowup final : Error { using Error::Error; };

// outer loop
struct InfeasibleBox final : Error { using Error::Error; };
struct ReferenceInfeasible final : Error { using Error::Error; };
struct DegenerateThrust final : Error { using Error::Error; };
struct TiltRestrictionViolated final : Error { using Error::Error; };

// simulator
struct YawUndefined final : Error { using Error::Error; };
struct EmptyTrace final : Error { using Error::Error; };

struct SimulationError final : Error {
  SimulationError(double when, const std::string& what_arg)
      : Error("t=" + std::to_string(when) + ": " + what_arg), t(when) {}
  double t;
};

// configuration and IO
struct ConfigParse final : Error { using Error::Error; };
struct IoError final : Error { using Error::Error; };

}  // namespace s2s1
