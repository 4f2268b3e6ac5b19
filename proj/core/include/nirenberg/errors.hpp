#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nirenberg {

// Base class for all toolkit errors. Subclasses exist where callers are
// expected to branch on the failure kind.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DomainError : public Error {
public:
  using Error::Error;
};

// geometry
class PoleSingularity : public Error {
public:
  using Error::Error;
};
class NonFiniteSample : public Error {
public:
  using Error::Error;
};

// curvature expression parsing
class SyntaxError : public Error {
public:
  SyntaxError(const std::string& msg, std::size_t position)
      : Error(msg + " (at position " + std::to_string(position) + ")"),
        pos(position) {}
  std::size_t pos;
};
class ArityError : public Error {
public:
  using Error::Error;
};
class PositivityViolation : public Error {
public:
  PositivityViolation(const std::string& msg, std::vector<double> witness_pt)
      : Error(msg), witness(std::move(witness_pt)) {}
  std::vector<double> witness;
};

// critical point analysis
class DegenerateCritical : public Error {
public:
  using Error::Error;
};
class LaplacianDegenerate : public Error {
public:
  using Error::Error;
};

// bubbles / quadrature calibration
class CalibrationFailure : public Error {
public:
  using Error::Error;
};
class QuadratureUnderResolved : public Error {
public:
  using Error::Error;
};
class ConvergenceFailure : public Error {
public:
  using Error::Error;
};

// functional
class StepTooLarge : public Error {
public:
  using Error::Error;
};

// infinity catalog
class CombinatorialOverflow : public Error {
public:
  using Error::Error;
};
class AmbiguousMatch : public Error {
public:
  using Error::Error;
};

// cli / configuration
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace nirenberg
