#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "omc/spectrum.hpp"

namespace omc {

// One free parameter of a model: name (for diagnostics), start value, box.
struct FitParameter {
  std::string name;
  double initial = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

// A scalar model y(x; p).  `gradient` fills dy/dp_j; when absent the engine
// falls back to central finite differences.
struct LeastSquaresModel {
  std::function<double(double, std::span<const double>)> value;
  std::function<void(double, std::span<const double>, std::span<double>)> gradient;
};

struct LeastSquaresOptions {
  double cost_tol = 1e-10;   // relative cost decrease below this means converged
  double step_tol = 1e-10;   // relative parameter step below this means converged
  int max_iterations = 500;
};

struct LeastSquaresSolution {
  std::vector<double> params;
  std::vector<double> sigmas;    // sqrt of covariance diagonal
  Eigen::MatrixXd covariance;
  double chi2 = 0.0;             // sum of squared weighted residuals
  double residual_norm = 0.0;    // sqrt(chi2)
  int iterations = 0;
};

// Damped Gauss-Newton minimizer of sum(((y - model(x))/sigma)^2) with box
// constraints applied by projection.  With y_sigma absent, unit weights are
// used and the covariance is scaled by the reduced chi-square.
LeastSquaresSolution solve_least_squares(const LeastSquaresModel& model,
                                         const Spectrum& data,
                                         std::vector<FitParameter> params,
                                         const LeastSquaresOptions& options = {});

}  // namespace omc
