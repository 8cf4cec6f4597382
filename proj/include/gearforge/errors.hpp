#pragma once

#include <stdexcept>
#include <string>

namespace gearforge {

// Base for every error raised by the toolkit.
class GearError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition.
class InvalidInput : public GearError {
 public:
  using GearError::GearError;
};

// The requested construction has no solution for this geometry.
class Infeasible : public GearError {
 public:
  using GearError::GearError;
};

// Pitch arclength does not hold a whole number of teeth, or two specs
// cannot share a generating rack.
class Incompatible : public GearError {
 public:
  using GearError::GearError;
};

// Iterative method gave up; carries the best estimate it reached.
class ConvergenceError : public GearError {
 public:
  ConvergenceError(const std::string& what, double best_estimate)
      : GearError(what), best_estimate_(best_estimate) {}
  double best_estimate() const { return best_estimate_; }

 private:
  double best_estimate_;
};

// Root finder was handed an interval without a sign change.
class BracketError : public GearError {
 public:
  using GearError::GearError;
};

// Polygon kernel produced (or would produce) a topology we cannot use.
class ResolutionError : public GearError {
 public:
  using GearError::GearError;
};

// Rotation ratio does not close after a bounded number of turns.
class CycleError : public GearError {
 public:
  using GearError::GearError;
};

class IoError : public GearError {
 public:
  using GearError::GearError;
};

}  // namespace gearforge
