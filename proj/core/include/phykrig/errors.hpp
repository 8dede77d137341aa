#pragma once

#include <stdexcept>
#include <string>

namespace phykrig {

// A matrix failed to factorize even after jitter escalation, or some other
// numerical breakdown. Carries the largest jitter that was attempted.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what, double jitter_attempted = 0.0)
      : std::runtime_error(what), jitter_attempted_(jitter_attempted) {}
  double jitter_attempted() const noexcept { return jitter_attempted_; }

private:
  double jitter_attempted_;
};

// Hyperparameter search could not produce a finite objective value.
class OptimizationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Model fitting failed (bad data shapes, missing physics model, ...).
class FitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ODE integration produced a non-finite state. Remembers which RK4 sub-step
// blew up so the caller can report where.
class IntegrationError : public std::runtime_error {
public:
  IntegrationError(const std::string& what, int substep)
      : std::runtime_error(what), substep_(substep) {}
  int substep() const noexcept { return substep_; }

private:
  int substep_;
};

// Bad experiment configuration (unknown key, unparsable value, missing file).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Output emission failed (unwritable directory, ...).
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace phykrig
