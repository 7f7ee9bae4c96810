#pragma once

#include "omc/device.hpp"
#include "omc/quantities.hpp"

namespace omc {

// Steady-state intracavity photon number for a side-coupled cavity:
//   nc = kappa_e / (detuning^2 + kappa^2/4) * P_in * eta / (hbar * omega_laser).
double intracavity_photons(const DeviceRecord& device, const PumpCondition& pump);

// 4 omega_m / kappa.  > 1 means sideband resolved.
double sideband_resolution(AngularFrequency omega_m, AngularFrequency kappa);

// (4 omega_m/kappa)^2 / (1 + (4 omega_m/kappa)^2), the finite-sideband-
// resolution reduction of the backaction rate.
double sideband_factor(AngularFrequency omega_m, AngularFrequency kappa);

// Total mechanical linewidth under a sideband pump:
//   gamma_m = gamma_i -/+ (4 g0^2 nc / kappa) * sideband_factor,
// minus for Blue, plus for Red.  A Blue result <= 0 throws: the device is
// past the parametric instability threshold.
AngularFrequency backaction_linewidth(AngularFrequency gamma_i, AngularFrequency g0,
                                      double nc, AngularFrequency kappa,
                                      AngularFrequency omega_m, SidebandChoice side);

// C = 4 g0^2 nc / (kappa gamma_m).  gamma_m is caller-supplied; report layers
// must say which linewidth was used.
double cooperativity(AngularFrequency g0, double nc, AngularFrequency kappa,
                     AngularFrequency gamma_m);

// Q * f = q_m * omega_m / 2pi, in Hz.
double qf_product_hz(double q_m, AngularFrequency omega_m);

// Q = omega / fwhm.
double quality_factor(AngularFrequency omega, AngularFrequency fwhm);

// C_sm = 4 g_sm^2 / (gamma_m gamma_s).
double spin_mech_cooperativity(const SpinMechanicalInputs& inputs);

// x_zpf = sqrt(hbar / (2 m_eff omega_m)), in meters.
double zero_point_motion_m(double m_eff_kg, AngularFrequency omega_m);

}  // namespace omc
