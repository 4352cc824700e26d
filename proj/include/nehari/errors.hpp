#pragma once

#include <stdexcept>
#include <string>

namespace nehari {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidMeshError : Error {
  using Error::Error;
};

struct ShapeError : Error {
  using Error::Error;
};

// A weight sign part vanishes (e.g. "f- == 0").
struct HypothesisError : Error {
  HypothesisError(std::string weight_name, char sign_part)
      : Error("sign hypothesis violated: " + weight_name + sign_part + " == 0"),
        weight(std::move(weight_name)), sign(sign_part) {}
  std::string weight;
  char sign; // '+' or '-'
};

struct DomainError : Error {
  using Error::Error;
};

// Fiber coefficients requested for the zero pair.
struct DegenerateDirectionError : Error {
  using Error::Error;
};

// The requested branch has no root along the given direction.
struct ProjectionUnavailableError : Error {
  using Error::Error;
};

// A fiber root with vanishing second derivative: the direction meets the
// degenerate part of the manifold.
struct M0EncounterError : Error {
  M0EncounterError(double t_, double second_derivative_, double a1_)
      : Error("degenerate fiber root (M0 encounter) at t = " + std::to_string(t_)),
        t(t_), second_derivative(second_derivative_), a1(a1_) {}
  double t;
  double second_derivative;
  double a1;
};

struct PreconditionError : Error {
  using Error::Error;
};

struct FormulaDegeneracyError : Error {
  using Error::Error;
};

struct NoInitialPointError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

} // namespace nehari
