#pragma once

#include <stdexcept>
#include <string>

namespace tpb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A grid is too coarse to represent the requested truncation.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Two fields with incompatible bases or truncations were combined.
class BasisMismatchError : public Error {
 public:
  using Error::Error;
};

/// Every sample handed to a constant probe was degenerate (u_x = 0).
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

/// An iterative method stopped before reaching its tolerance.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Homotopy continuation could not get past a parameter value.
class ContinuationError : public Error {
 public:
  ContinuationError(const std::string& what, double lambda)
      : Error(what), lambda_(lambda) {}
  double lambda() const noexcept { return lambda_; }

 private:
  double lambda_;
};

/// A candidate w fails the difference equation T(w) = -(vw)_x.
class NotInS1Error : public Error {
 public:
  NotInS1Error(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A pointwise exp/log re-projection lost too much accuracy.
class ProjectionAccuracyError : public Error {
 public:
  ProjectionAccuracyError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A field that must be strictly positive is not.
class NonPositiveError : public Error {
 public:
  NonPositiveError(const std::string& what, double minimum)
      : Error(what), minimum_(minimum) {}
  double minimum() const noexcept { return minimum_; }

 private:
  double minimum_;
};

/// The step-halving diagnostic of the period map drifted too far.
class StepCountError : public Error {
 public:
  StepCountError(const std::string& what, double drift)
      : Error(what), drift_(drift) {}
  double drift() const noexcept { return drift_; }

 private:
  double drift_;
};

}  // namespace tpb
