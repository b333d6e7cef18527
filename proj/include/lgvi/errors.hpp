#pragma once

#include <stdexcept>
#include <string>

namespace lgvi {

/// Explicit relative-rotation solve has no solution at the requested step
/// size (the asin argument leaves [0,1)). The adaptive stepper reacts by
/// shrinking h; fixed-step callers see it as a hard failure.
class StepTooLargeError : public std::runtime_error {
 public:
  explicit StepTooLargeError(double a_norm)
      : std::runtime_error("relative-rotation solve infeasible: |a| = " +
                           std::to_string(a_norm) + " >= 1"),
        a_norm_(a_norm) {}
  double a_norm() const { return a_norm_; }

 private:
  double a_norm_;
};

/// Scalar root-find on the discrete-energy residual failed or the step left
/// the admissible [h_min, h_max] bracket.
class StepFailureError : public std::runtime_error {
 public:
  StepFailureError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scene point has non-positive depth at the evaluated pose.
class BehindCameraError : public std::runtime_error {
 public:
  explicit BehindCameraError(int feature_index)
      : std::runtime_error("feature " + std::to_string(feature_index) +
                           " is behind the camera"),
        feature_index_(feature_index) {}
  int feature_index() const { return feature_index_; }

 private:
  int feature_index_;
};

class DegenerateProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lgvi
