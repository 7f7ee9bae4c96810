#include "omc/least_squares.hpp"

#include <algorithm>
#include <cmath>

namespace omc {

namespace {

double clamp_to_box(double v, const FitParameter& p) {
  return std::min(std::max(v, p.lower), p.upper);
}

// Weighted model jacobian, one row per data point.
void fill_jacobian(const LeastSquaresModel& model, const Spectrum& data,
                   const std::vector<double>& weights, std::span<const double> p,
                   Eigen::MatrixXd& jac) {
  const int n = static_cast<int>(p.size());
  std::vector<double> grad(static_cast<std::size_t>(n));
  std::vector<double> probe(p.begin(), p.end());
  for (int i = 0; i < static_cast<int>(data.size()); ++i) {
    if (model.gradient) {
      model.gradient(data.x[static_cast<std::size_t>(i)], p, grad);
    } else {
      // central differences on the model
      for (int j = 0; j < n; ++j) {
        const double pj = probe[static_cast<std::size_t>(j)];
        const double h = std::sqrt(std::numeric_limits<double>::epsilon()) *
                         std::max(std::abs(pj), 1.0);
        probe[static_cast<std::size_t>(j)] = pj + h;
        const double up = model.value(data.x[static_cast<std::size_t>(i)], probe);
        probe[static_cast<std::size_t>(j)] = pj - h;
        const double dn = model.value(data.x[static_cast<std::size_t>(i)], probe);
        probe[static_cast<std::size_t>(j)] = pj;
        grad[static_cast<std::size_t>(j)] = (up - dn) / (2.0 * h);
      }
    }
    for (int j = 0; j < n; ++j) {
      jac(i, j) = grad[static_cast<std::size_t>(j)] * weights[static_cast<std::size_t>(i)];
    }
  }
}

double cost_at(const LeastSquaresModel& model, const Spectrum& data,
               const std::vector<double>& weights, std::span<const double> p,
               Eigen::VectorXd& residual) {
  double cost = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = (data.y[i] - model.value(data.x[i], p)) * weights[i];
    residual(static_cast<Eigen::Index>(i)) = r;
    cost += r * r;
  }
  return cost;
}

// Index of the jacobian column with the least leverage, for diagnostics.
int weakest_column(const Eigen::MatrixXd& jac) {
  int arg = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < jac.cols(); ++j) {
    const double norm = jac.col(j).norm();
    if (norm < best) {
      best = norm;
      arg = j;
    }
  }
  return arg;
}

void check_columns(const Eigen::MatrixXd& jac, const std::vector<FitParameter>& params) {
  double max_norm = 0.0;
  for (int j = 0; j < jac.cols(); ++j) {
    max_norm = std::max(max_norm, jac.col(j).norm());
  }
  for (int j = 0; j < jac.cols(); ++j) {
    if (jac.col(j).norm() <= 1e-14 * std::max(max_norm, 1e-300)) {
      throw SingularFitError(params[static_cast<std::size_t>(j)].name);
    }
  }
}

}  // namespace

LeastSquaresSolution solve_least_squares(const LeastSquaresModel& model,
                                         const Spectrum& data,
                                         std::vector<FitParameter> params,
                                         const LeastSquaresOptions& options) {
  data.validate();
  if (!model.value) {
    throw ValidationError("least-squares model has no value function");
  }
  const int n = static_cast<int>(params.size());
  const int m = static_cast<int>(data.size());
  if (n == 0) {
    throw ValidationError("least-squares fit needs at least one parameter");
  }
  if (m < n + 1) {
    throw ValidationError("need at least " + std::to_string(n + 1) +
                          " points to fit " + std::to_string(n) + " parameters, got " +
                          std::to_string(m));
  }
  for (const auto& p : params) {
    if (!(p.lower <= p.upper)) {
      throw ValidationError("parameter '" + p.name + "' has an empty bound interval");
    }
    if (p.initial < p.lower || p.initial > p.upper) {
      throw ValidationError("initial value of parameter '" + p.name +
                            "' lies outside its bounds");
    }
  }

  std::vector<double> weights(static_cast<std::size_t>(m), 1.0);
  if (data.has_sigma()) {
    for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = 1.0 / data.y_sigma[i];
  }

  std::vector<double> p(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) p[static_cast<std::size_t>(j)] = params[static_cast<std::size_t>(j)].initial;

  Eigen::VectorXd residual(m);
  Eigen::VectorXd trial_residual(m);
  Eigen::VectorXd refine_residual(m);
  Eigen::MatrixXd jac(m, n);

  double cost = cost_at(model, data, weights, p, residual);
  if (!std::isfinite(cost)) {
    throw ValidationError("model is not evaluable at the initial parameters");
  }

  double lambda = 1e-3;
  int iterations = 0;
  bool converged = false;

  for (int iter = 0; iter < options.max_iterations && !converged; ++iter) {
    fill_jacobian(model, data, weights, p, jac);
    if (iter == 0) check_columns(jac, params);

    const Eigen::MatrixXd hess = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * residual;
    const double max_diag = std::max(hess.diagonal().maxCoeff(), 1e-300);

    bool accepted = false;
    std::vector<double> trial(p);
    for (int attempt = 0; attempt < 60; ++attempt) {
      Eigen::MatrixXd damped = hess;
      for (int j = 0; j < n; ++j) {
        damped(j, j) += lambda * std::max(hess(j, j), 1e-12 * max_diag);
      }
      const Eigen::VectorXd step = damped.ldlt().solve(grad);
      for (int j = 0; j < n; ++j) {
        trial[static_cast<std::size_t>(j)] =
            clamp_to_box(p[static_cast<std::size_t>(j)] + step(j), params[static_cast<std::size_t>(j)]);
      }
      double trial_cost = cost_at(model, data, weights, trial, trial_residual);

      // A clamped coordinate invalidates the rest of the step, so re-solve the
      // damped system over the untouched coordinates from the projected point.
      std::vector<int> free_idx;
      for (int j = 0; j < n; ++j) {
        if (trial[static_cast<std::size_t>(j)] == p[static_cast<std::size_t>(j)] + step(j)) {
          free_idx.push_back(j);
        }
      }
      if (!free_idx.empty() && static_cast<int>(free_idx.size()) < n &&
          std::isfinite(trial_cost)) {
        const int k = static_cast<int>(free_idx.size());
        Eigen::MatrixXd damped_ff(k, k);
        Eigen::VectorXd grad_f(k);
        for (int a = 0; a < k; ++a) {
          grad_f(a) = jac.col(free_idx[static_cast<std::size_t>(a)]).dot(trial_residual);
          for (int b = 0; b < k; ++b) {
            damped_ff(a, b) = damped(free_idx[static_cast<std::size_t>(a)],
                                     free_idx[static_cast<std::size_t>(b)]);
          }
        }
        const Eigen::VectorXd step_f = damped_ff.ldlt().solve(grad_f);
        std::vector<double> refined(trial);
        for (int a = 0; a < k; ++a) {
          const auto j = static_cast<std::size_t>(free_idx[static_cast<std::size_t>(a)]);
          refined[j] = clamp_to_box(refined[j] + step_f(a), params[j]);
        }
        const double refined_cost = cost_at(model, data, weights, refined, refine_residual);
        if (std::isfinite(refined_cost) && refined_cost < trial_cost) {
          trial = refined;
          trial_cost = refined_cost;
          trial_residual = refine_residual;
        }
      }
      if (std::isfinite(trial_cost) && trial_cost <= cost) {
        // converged if the accepted step barely moved the cost or the params
        const double decrease = (cost - trial_cost) / std::max(cost, 1e-300);
        double rel_step = 0.0;
        for (int j = 0; j < n; ++j) {
          const double dj = std::abs(trial[static_cast<std::size_t>(j)] - p[static_cast<std::size_t>(j)]);
          rel_step = std::max(rel_step, dj / std::max(1.0, std::abs(p[static_cast<std::size_t>(j)])));
        }
        p = trial;
        cost = trial_cost;
        residual = trial_residual;
        lambda = std::max(lambda / 3.0, 1e-14);
        accepted = true;
        if (decrease < options.cost_tol || rel_step < options.step_tol) converged = true;
        break;
      }
      lambda *= 4.0;
      if (lambda > 1e14) break;
    }
    ++iterations;
    if (!accepted) converged = true;  // no downhill step exists at machine scale
  }

  if (!converged) {
    throw ConvergenceError(p, cost, iterations);
  }

  // covariance from the jacobian at the solution
  fill_jacobian(model, data, weights, p, jac);
  const Eigen::MatrixXd hess = jac.transpose() * jac;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(hess);
  lu.setThreshold(1e-13);
  if (lu.rank() < n) {
    throw SingularFitError(params[static_cast<std::size_t>(weakest_column(jac))].name);
  }
  Eigen::MatrixXd cov = lu.inverse();
  if (!data.has_sigma() && m > n) {
    cov *= cost / static_cast<double>(m - n);
  }

  LeastSquaresSolution out;
  out.params = p;
  out.covariance = cov;
  out.sigmas.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    out.sigmas[static_cast<std::size_t>(j)] = std::sqrt(std::max(cov(j, j), 0.0));
  }
  out.chi2 = cost;
  out.residual_norm = std::sqrt(cost);
  out.iterations = iterations;
  return out;
}

}  // namespace omc
