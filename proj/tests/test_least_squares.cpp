#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "omc/errors.hpp"
#include "omc/least_squares.hpp"

using namespace omc;

namespace {

LeastSquaresModel line_model() {
  LeastSquaresModel m;
  m.value = [](double x, std::span<const double> p) { return p[0] + p[1] * x; };
  m.gradient = [](double x, std::span<const double>, std::span<double> g) {
    g[0] = 1.0;
    g[1] = x;
  };
  return m;
}

LeastSquaresModel exp_model_no_gradient() {
  LeastSquaresModel m;
  m.value = [](double x, std::span<const double> p) { return p[0] * std::exp(-p[1] * x); };
  return m;
}

Spectrum line_data(double intercept, double slope, std::size_t n) {
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(i);
    y[i] = intercept + slope * x[i];
  }
  return Spectrum(std::move(x), std::move(y));
}

}  // namespace

TEST_CASE("exact line recovered from a cold start") {
  const Spectrum data = line_data(1.0, 2.0, 9);
  std::vector<FitParameter> params{{"intercept", 0.0}, {"slope", 0.0}};
  const auto sol = solve_least_squares(line_model(), data, params);
  CHECK(sol.params[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sol.params[1] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(sol.residual_norm < 1e-8);
  CHECK(sol.sigmas[0] < 1e-8);
  CHECK(sol.sigmas[1] < 1e-8);
}

TEST_CASE("nonlinear model without analytic gradient converges") {
  std::vector<double> x(40), y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    x[i] = 0.1 * static_cast<double>(i);
    y[i] = 3.0 * std::exp(-0.7 * x[i]);
  }
  const Spectrum data(std::move(x), std::move(y));
  std::vector<FitParameter> params{{"amp", 1.0, 0.0}, {"rate", 0.1, 0.0}};
  const auto sol = solve_least_squares(exp_model_no_gradient(), data, params);
  CHECK(sol.params[0] == doctest::Approx(3.0).epsilon(1e-7));
  CHECK(sol.params[1] == doctest::Approx(0.7).epsilon(1e-7));
}

TEST_CASE("explicit uncertainties propagate into the covariance") {
  // doubling all y sigmas must double every parameter sigma
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 0.05);
  std::vector<double> x(60), y(60), s1(60, 0.05), s2(60, 0.10);
  for (std::size_t i = 0; i < 60; ++i) {
    x[i] = 0.1 * static_cast<double>(i);
    y[i] = 0.5 + 1.5 * x[i] + gauss(rng);
  }
  std::vector<FitParameter> params{{"intercept", 0.0}, {"slope", 0.0}};
  const auto a =
      solve_least_squares(line_model(), Spectrum(x, y, s1), params);
  const auto b =
      solve_least_squares(line_model(), Spectrum(x, y, s2), params);
  CHECK(b.sigmas[0] == doctest::Approx(2.0 * a.sigmas[0]).epsilon(1e-9));
  CHECK(b.sigmas[1] == doctest::Approx(2.0 * a.sigmas[1]).epsilon(1e-9));
  CHECK(b.params[0] == doctest::Approx(a.params[0]).epsilon(1e-9));
}

TEST_CASE("unit-weight fits rescale the covariance by the reduced chi-square") {
  // for a straight-line fit with unit weights the parameter sigma must match
  // the textbook formula sigma_slope^2 = s^2 / sum((x - xbar)^2)
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 0.2);
  const std::size_t n = 200;
  std::vector<double> x(n), y(n);
  double sx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 0.05 * static_cast<double>(i);
    y[i] = 2.0 - 0.3 * x[i] + gauss(rng);
    sx += x[i];
  }
  const double xbar = sx / static_cast<double>(n);
  std::vector<FitParameter> params{{"intercept", 0.0}, {"slope", 0.0}};
  const auto sol = solve_least_squares(line_model(), Spectrum(x, y), params);

  double ssr = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - sol.params[0] - sol.params[1] * x[i];
    ssr += r * r;
    sxx += (x[i] - xbar) * (x[i] - xbar);
  }
  const double s2 = ssr / (static_cast<double>(n) - 2.0);
  CHECK(sol.sigmas[1] == doctest::Approx(std::sqrt(s2 / sxx)).epsilon(1e-6));
}

TEST_CASE("box constraints clamp the solution") {
  const Spectrum data = line_data(1.0, 2.0, 9);
  std::vector<FitParameter> params{{"intercept", 0.5, 0.0, 10.0},
                                   {"slope", 1.2, 0.0, 1.5}};
  const auto sol = solve_least_squares(line_model(), data, params);
  CHECK(sol.params[1] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(sol.params[1] <= 1.5);
}

TEST_CASE("parameter with no effect raises a singular error naming it") {
  LeastSquaresModel m;
  m.value = [](double x, std::span<const double> p) { return p[0] + 0.0 * p[1] + x; };
  m.gradient = [](double, std::span<const double>, std::span<double> g) {
    g[0] = 1.0;
    g[1] = 0.0;
  };
  const Spectrum data = line_data(0.0, 1.0, 9);
  std::vector<FitParameter> params{{"offset", 0.0}, {"ghost", 1.0}};
  try {
    solve_least_squares(m, data, params);
    FAIL("expected a singular fit error");
  } catch (const SingularFitError& e) {
    CHECK(e.parameter == "ghost");
    CHECK(std::string(e.what()).find("ghost") != std::string::npos);
  }
}

TEST_CASE("iteration cap raises a convergence error carrying the best point") {
  std::vector<double> x(30), y(30);
  for (std::size_t i = 0; i < 30; ++i) {
    x[i] = 0.2 * static_cast<double>(i);
    y[i] = 5.0 * std::exp(-1.3 * x[i]);
  }
  const Spectrum data(std::move(x), std::move(y));
  std::vector<FitParameter> params{{"amp", 0.5, 0.0}, {"rate", 4.0, 0.0}};
  LeastSquaresOptions opts;
  opts.max_iterations = 2;
  opts.cost_tol = 1e-16;
  opts.step_tol = 1e-16;
  try {
    solve_least_squares(exp_model_no_gradient(), data, params, opts);
    FAIL("expected a convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations == 2);
    CHECK(e.best_params.size() == 2);
    CHECK(std::isfinite(e.best_cost));
  }
}

TEST_CASE("quadratic with correlated parameters still converges cleanly") {
  LeastSquaresModel m;
  m.value = [](double x, std::span<const double> p) {
    return p[0] + p[1] * x + p[2] * x * x;
  };
  std::vector<double> x(25), y(25);
  for (std::size_t i = 0; i < 25; ++i) {
    x[i] = -1.0 + 0.08 * static_cast<double>(i);
    y[i] = 0.3 - 1.1 * x[i] + 2.4 * x[i] * x[i];
  }
  const Spectrum data(std::move(x), std::move(y));
  std::vector<FitParameter> params{{"c0", 0.0}, {"c1", 0.0}, {"c2", 0.0}};
  const auto sol = solve_least_squares(m, data, params);
  CHECK(sol.params[0] == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(sol.params[1] == doctest::Approx(-1.1).epsilon(1e-9));
  CHECK(sol.params[2] == doctest::Approx(2.4).epsilon(1e-9));
  CHECK(sol.covariance.rows() == 3);
}
