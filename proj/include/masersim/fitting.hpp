// masersim: room-temperature pentacene maser simulation toolkit.
// License: MIT.

#ifndef MASERSIM_FITTING_HPP
#define MASERSIM_FITTING_HPP

#include <string>
#include <vector>

#include "masersim/errors.hpp"

namespace masersim {

struct FitResult {
  std::vector<std::string> parameter_names;
  std::vector<double> parameters;
  std::vector<double> std_errors;       // valid only when converged
  double rss = 0.0;
  bool converged = false;
  bool degenerate_covariance = false;   // near-singular J^T J at the optimum
  int iterations = 0;

  double parameter(const std::string& name) const;
  double std_error(const std::string& name) const;
};

struct FitOptions {
  int max_iterations = 500;
  double rss_rel_change_tol = 1e-10;    // convergence: relative RSS change
  int restarts = 3;                     // multi-start with perturbed inits
  unsigned rng_seed = 12345;
  double f_ratio_threshold = 10.0;      // piecewise-linear acceptance
};

// Ordinary least squares y = intercept + slope x, with standard errors.
// Throws DegenerateFit with fewer than 2 distinct abscissas.
FitResult fit_line(const std::vector<double>& x, const std::vector<double>& y);

// A exp(-Gamma t) cos(Omega1 t + phi) + c. Omega1 is initialized from the
// dominant discrete-spectrum peak; throws InsufficientData when no peak
// exists (constant signal, too few samples, under one period of coverage).
FitResult fit_damped_oscillation(const std::vector<double>& t,
                                 const std::vector<double>& y,
                                 const FitOptions& opt = {});

// amplitude / (1 + (2(x-center)/fwhm)^2) + offset.
FitResult fit_lorentzian(const std::vector<double>& x, const std::vector<double>& y,
                         const FitOptions& opt = {});

// Sum of two Lorentzians plus offset; components ordered by center.
FitResult fit_double_lorentzian(const std::vector<double>& x,
                                const std::vector<double>& y,
                                const FitOptions& opt = {});

// Continuous two-segment linear model; the breakpoint is the extracted
// threshold. Grid search over candidate breakpoints with per-candidate
// linear least squares. Throws NoBreakpoint when the two-segment model does
// not beat one straight line by the configured F-ratio.
FitResult fit_piecewise_linear(const std::vector<double>& x,
                               const std::vector<double>& y,
                               const FitOptions& opt = {});

namespace detail {
// Exposed for Jacobian verification in tests: evaluates model value and
// analytic derivatives at one abscissa.
void damped_cosine_model(double t, const std::vector<double>& p, double& value,
                         std::vector<double>& jac);
void lorentzian_model(double x, const std::vector<double>& p, double& value,
                      std::vector<double>& jac);
void double_lorentzian_model(double x, const std::vector<double>& p, double& value,
                             std::vector<double>& jac);
}  // namespace detail

}  // namespace masersim

#endif
