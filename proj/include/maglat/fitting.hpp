#pragma once
// Damped least-squares fits of the three fixed model forms used throughout:
// gaussian peak, exponential decay, and a line through the origin.  Analytic
// Jacobians, checked against finite differences at the solution.

#include <string>
#include <variant>
#include <vector>

#include "maglat/curves.hpp"

namespace maglat {

struct FitResult {
  std::vector<std::string> param_names;
  std::vector<double> params;
  std::vector<double> sigmas;  // 1-sigma from the residual-scaled normal matrix
  double residual_norm = 0.0;  // sqrt(sum of squared residuals)
  double r_squared = 0.0;      // uncentered for the origin line, else centered
  int iterations = 0;
  double final_step = 0.0;     // last parameter-step norm (relative)
  bool converged = false;
  std::vector<double> residuals;  // y - model(x), per point
  std::vector<std::string> warnings;

  double param(const std::string& name) const;
  double sigma(const std::string& name) const;
};

// amplitude * exp(-gamma (x - b0)^2) [+ baseline].  Initialized from the
// maximum point and the second-moment width unless `init` overrides
// {amplitude, b0, gamma[, baseline]}.  Throws NonConvergence when the peak
// sits on the scan boundary or the iteration stalls.  Needs >= 5 points.
FitResult fit_gaussian_peak(const std::vector<double>& x,
                            const std::vector<double>& y,
                            bool with_baseline = false,
                            const std::vector<double>* init = nullptr);
FitResult fit_gaussian_peak(const ScanCurve& scan, bool with_baseline = false);

// eta0 * exp(-t / tau).  Initialized by log-linear regression on the
// positive values unless `init` overrides {eta0, tau}.  Warns when the data
// span less than one decade of decay; flags R^2 < 0.95.  Needs >= 4 points
// and a positive majority.
FitResult fit_exponential(const std::vector<double>& t,
                          const std::vector<double>& y,
                          const std::vector<double>* init = nullptr);
FitResult fit_exponential(const DecayCurve& decay);

// slope * x by closed-form least squares; R^2 is uncentered.  Accepts a
// single point (slope = y/x); throws on all-zero x.
FitResult fit_linear_origin(const std::vector<double>& x,
                            const std::vector<double>& y);

// Typed CSV ingestion.  Recognizes headers "t_s,efficiency" (decay) and
// "B_G,efficiency" (scan); extra trailing columns are ignored.  Unsorted
// abscissas are sorted with a warning; schema or cell errors throw
// ConfigError naming the column.
std::variant<DecayCurve, ScanCurve> ingest_csv(const std::string& path);

}  // namespace maglat
