// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#ifndef MASERSIM_ERRORS_HPP
#define MASERSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace masersim {

// Bad inputs (config values, malformed data files, violated preconditions
// that a user can fix). CLI exit code 2.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Failures of the numerics themselves (non-convergence, step collapse).
// CLI exit code 3.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonHermitianInput : NumericalError {
  explicit NonHermitianInput(const std::string& msg) : NumericalError(msg) {}
};

struct InconsistentDirectionCosines : ValidationError {
  explicit InconsistentDirectionCosines(const std::string& msg) : ValidationError(msg) {}
};

struct StepSizeUnderflow : NumericalError {
  explicit StepSizeUnderflow(const std::string& msg) : NumericalError(msg) {}
};

struct AtOrAboveOscillation : NumericalError {
  explicit AtOrAboveOscillation(const std::string& msg) : NumericalError(msg) {}
};

struct InfiniteTemperature : NumericalError {
  explicit InfiniteTemperature(const std::string& msg) : NumericalError(msg) {}
};

struct NoConvergence : NumericalError {
  explicit NoConvergence(const std::string& msg) : NumericalError(msg) {}
};

struct InsufficientData : ValidationError {
  explicit InsufficientData(const std::string& msg) : ValidationError(msg) {}
};

struct DegenerateFit : ValidationError {
  explicit DegenerateFit(const std::string& msg) : ValidationError(msg) {}
};

struct NoBreakpoint : NumericalError {
  explicit NoBreakpoint(const std::string& msg) : NumericalError(msg) {}
};

}  // namespace masersim

#endif
