#include "omc/fitness.hpp"

#include <cmath>

#include "omc/errors.hpp"

namespace omc {

double gaussian_window(AngularFrequency omega, AngularFrequency mu,
                       AngularFrequency sigma) {
  if (!(sigma.rad_s() > 0.0)) {
    throw ValidationError("gaussian_window requires sigma > 0");
  }
  const double u = (omega.rad_s() - mu.rad_s()) / sigma.rad_s();
  return std::exp(-0.5 * u * u);
}

void FitnessWindows::validate() const {
  if (!(delta_o.rad_s() > 0.0) || !(delta_m.rad_s() > 0.0)) {
    throw ValidationError("fitness windows require positive band widths");
  }
  if (!(mu_o.rad_s() > 0.0) || !(mu_m.rad_s() > 0.0)) {
    throw ValidationError("fitness windows require positive band centers");
  }
}

FitnessWindows FitnessWindows::from_gaps(const BandGap& optical,
                                         const BandGap& acoustic) {
  FitnessWindows win;
  win.mu_o = optical.midgap();
  win.delta_o = optical.width();
  win.mu_m = acoustic.midgap();
  win.delta_m = acoustic.width();
  win.validate();
  return win;
}

double fitness(const CavitySolution& sol, const FitnessWindows& win) {
  win.validate();
  const double window_o = gaussian_window(sol.omega_o, win.mu_o, win.sigma_o());
  const double window_m = gaussian_window(sol.omega_m, win.mu_m, win.sigma_m());
  return sol.g0.hz() * sol.q_o * window_o * window_m;
}

}  // namespace omc
