#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace omc {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad input: malformed files, violated preconditions, out-of-range values.
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// A curve fit could not produce a usable result.
class FitError : public Error {
public:
  explicit FitError(const std::string& what) : Error(what) {}
};

// The jacobian lost rank; `parameter` names the first column with no leverage.
class SingularFitError : public FitError {
public:
  explicit SingularFitError(const std::string& parameter_name)
      : FitError("singular jacobian: parameter '" + parameter_name +
                 "' has no effect on the model near the current estimate"),
        parameter(parameter_name) {}
  std::string parameter;
};

// Iteration budget exhausted; carries the best point seen so far.
class ConvergenceError : public FitError {
public:
  ConvergenceError(std::vector<double> best, double cost, int iterations)
      : FitError("fit did not converge after " + std::to_string(iterations) +
                 " iterations"),
        best_params(std::move(best)), best_cost(cost), iterations(iterations) {}
  std::vector<double> best_params;
  double best_cost = 0.0;
  int iterations = 0;
};

// A design search has no feasible candidate.
class InfeasibleError : public Error {
public:
  explicit InfeasibleError(const std::string& what) : Error(what) {}
};

// No forbidden interval in the scanned frequency range.
class NoBandgapError : public Error {
public:
  explicit NoBandgapError(const std::string& what) : Error(what) {}
};

// Structure has a mirror gap but no localized resonance inside it.
class NoDefectModeError : public Error {
public:
  explicit NoDefectModeError(const std::string& what) : Error(what) {}
};

}  // namespace omc
