#pragma once

#include "omc/least_squares.hpp"

namespace omc {

// Reflection lineshape with interference asymmetry q and FWHM kappa:
//   R(delta) = y0 - a0 * [(1 - q^2) kappa/2 - q delta] / (kappa^2/4 + delta^2).
double fano_reflection(double delta, double y0, double a0, double q, double kappa);

// Parametric models shared by the named fits and the jacobian checks.  All are
// unit-agnostic: they work in whatever units x and the parameters arrive in.
namespace models {

// p = (y0, a0, q, kappa, omega0); x is absolute frequency.
LeastSquaresModel fano();

// p = (center, fwhm, amplitude, offset); amplitude is the peak height.
LeastSquaresModel lorentzian();

// p = (amplitude, t2, stretch_n, baseline); y = A exp(-(t/T2)^n) + baseline.
LeastSquaresModel stretched_exp();

// p = (pl0, contrast, rabi_omega, decay);
// y = pl0 * (1 - contrast/2 * (1 - cos(rabi_omega t) exp(-t decay))).
LeastSquaresModel rabi();

}  // namespace models

}  // namespace omc
