#include "omc/fit_models.hpp"

#include <cmath>

namespace omc {

double fano_reflection(double delta, double y0, double a0, double q, double kappa) {
  if (!(kappa > 0.0)) {
    throw ValidationError("fano_reflection requires kappa > 0");
  }
  const double denom = kappa * kappa / 4.0 + delta * delta;
  return y0 - a0 * ((1.0 - q * q) * kappa / 2.0 - q * delta) / denom;
}

namespace models {

LeastSquaresModel fano() {
  LeastSquaresModel m;
  m.value = [](double x, std::span<const double> p) {
    return fano_reflection(x - p[4], p[0], p[1], p[2], p[3]);
  };
  m.gradient = [](double x, std::span<const double> p, std::span<double> g) {
    const double a0 = p[1], q = p[2], k = p[3];
    const double d = x - p[4];
    const double den = k * k / 4.0 + d * d;
    const double num = (1.0 - q * q) * k / 2.0 - q * d;
    g[0] = 1.0;
    g[1] = -num / den;
    g[2] = a0 * (q * k + d) / den;
    g[3] = -a0 * ((1.0 - q * q) / 2.0 * den - num * k / 2.0) / (den * den);
    // d(delta)/d(omega0) = -1
    g[4] = -a0 * (q * den + 2.0 * d * num) / (den * den);
  };
  return m;
}

LeastSquaresModel lorentzian() {
  LeastSquaresModel m;
  m.value = [](double x, std::span<const double> p) {
    const double d = x - p[0];
    const double h = p[1] / 2.0;
    return p[3] + p[2] * h * h / (d * d + h * h);
  };
  m.gradient = [](double x, std::span<const double> p, std::span<double> g) {
    const double d = x - p[0];
    const double h = p[1] / 2.0;
    const double den = d * d + h * h;
    g[0] = p[2] * h * h * 2.0 * d / (den * den);
    g[1] = p[2] * h * d * d / (den * den);  // d/d(fwhm) = d/dh * 1/2
    g[2] = h * h / den;
    g[3] = 1.0;
  };
  return m;
}

LeastSquaresModel stretched_exp() {
  LeastSquaresModel m;
  m.value = [](double x, std::span<const double> p) {
    return p[0] * std::exp(-std::pow(x / p[1], p[2])) + p[3];
  };
  m.gradient = [](double x, std::span<const double> p, std::span<double> g) {
    const double u = std::pow(x / p[1], p[2]);
    const double e = std::exp(-u);
    g[0] = e;
    g[1] = p[0] * e * p[2] * u / p[1];
    g[2] = -p[0] * e * u * std::log(x / p[1]);
    g[3] = 1.0;
  };
  return m;
}

LeastSquaresModel rabi() {
  LeastSquaresModel m;
  m.value = [](double x, std::span<const double> p) {
    return p[0] * (1.0 - p[1] / 2.0 * (1.0 - std::cos(p[2] * x) * std::exp(-x * p[3])));
  };
  m.gradient = [](double x, std::span<const double> p, std::span<double> g) {
    const double osc = std::cos(p[2] * x) * std::exp(-x * p[3]);
    g[0] = 1.0 - p[1] / 2.0 * (1.0 - osc);
    g[1] = -p[0] / 2.0 * (1.0 - osc);
    g[2] = -p[0] * p[1] / 2.0 * x * std::sin(p[2] * x) * std::exp(-x * p[3]);
    g[3] = -p[0] * p[1] / 2.0 * x * osc;
  };
  return m;
}

}  // namespace models

}  // namespace omc
