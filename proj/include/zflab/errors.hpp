#ifndef ZFLAB_ERRORS_HPP
#define ZFLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zflab {

// Base class for all library errors; everything thrown here derives from it
// so callers can catch one type at the tool boundary.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Scattering function evaluated too close to a pole of its defining formula.
struct PoleError : Error {
  explicit PoleError(const std::string& msg) : Error(msg) {}
};

// Invalid model parameters (mass <= 0, coupling outside (0, pi), unknown kind).
struct ModelError : Error {
  explicit ModelError(const std::string& msg) : Error(msg) {}
};

// A requested tensor or sector exceeds the configured dense-size budget.
struct DimensionError : Error {
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// Operands live on different grids / truncations / models.
struct ShapeMismatchError : Error {
  explicit ShapeMismatchError(const std::string& msg) : Error(msg) {}
};

// Boost parameter is not an integer multiple of the grid spacing.
struct BoostCommensurabilityError : Error {
  explicit BoostCommensurabilityError(const std::string& msg) : Error(msg) {}
};

// A residue contour would enclose (or run too close to) a second singularity.
struct ContourError : Error {
  explicit ContourError(const std::string& msg) : Error(msg) {}
};

// Malformed user-supplied expression or family description.
struct EvaluationError : Error {
  explicit EvaluationError(const std::string& msg) : Error(msg) {}
};

}  // namespace zflab

#endif
