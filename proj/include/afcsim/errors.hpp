#pragma once

#include <stdexcept>
#include <string>

namespace afc {

/// Base class for every error raised by the model code.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument or configuration value lies outside its valid domain.
class ParameterError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// The ODE integrator could not reach the end of the pulse.
class IntegrationError : public ModelError {
 public:
  IntegrationError(const std::string& what, double time_reached)
      : ModelError(what), time_reached_(time_reached) {}

  double time_reached() const noexcept { return time_reached_; }

 private:
  double time_reached_;
};

/// A precomputed map does not cover the region an average needs.
class CoverageError : public ModelError {
 public:
  using ModelError::ModelError;
};

class FitError : public ModelError {
 public:
  using ModelError::ModelError;
};

class OptimizationError : public ModelError {
 public:
  using ModelError::ModelError;
};

}  // namespace afc
