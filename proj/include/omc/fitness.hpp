#pragma once

#include "omc/band_structure.hpp"
#include "omc/cavity_solver.hpp"
#include "omc/quantities.hpp"

namespace omc {

// exp(-(omega - mu)^2 / (2 sigma^2)), in (0, 1]
double gaussian_window(AngularFrequency omega, AngularFrequency mu,
                       AngularFrequency sigma);

// Target bands for the two-window design score.  Sigma is delta/6 so the
// 3-sigma point of each window falls on the band edge.
struct FitnessWindows {
  AngularFrequency mu_o;
  AngularFrequency delta_o;
  AngularFrequency mu_m;
  AngularFrequency delta_m;

  void validate() const;
  AngularFrequency sigma_o() const { return (1.0 / 6.0) * delta_o; }
  AngularFrequency sigma_m() const { return (1.0 / 6.0) * delta_m; }

  static FitnessWindows from_gaps(const BandGap& optical, const BandGap& acoustic);
};

// g0/2pi [Hz] times Qo, discounted by how far each mode sits from its window
// center.  Higher is better.
double fitness(const CavitySolution& sol, const FitnessWindows& win);

}  // namespace omc
