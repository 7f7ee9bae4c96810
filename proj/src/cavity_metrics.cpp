#include "omc/cavity_metrics.hpp"

#include <cmath>

namespace omc {

void DeviceRecord::validate() const {
  if (!(lambda_o_nm > 0.0)) {
    throw ValidationError("device '" + label + "': lambda_o_nm must be positive");
  }
  if (!(kappa.rad_s() > 0.0)) {
    throw ValidationError("device '" + label + "': kappa must be positive");
  }
  if (!(kappa_e.rad_s() > 0.0) || kappa_e.rad_s() > kappa.rad_s()) {
    throw ValidationError("device '" + label +
                          "': kappa_e must satisfy 0 < kappa_e <= kappa");
  }
  if (!(omega_m.rad_s() > 0.0)) {
    throw ValidationError("device '" + label + "': omega_m must be positive");
  }
  if (!(gamma_m.rad_s() > 0.0)) {
    throw ValidationError("device '" + label + "': gamma_m must be positive");
  }
}

void PumpCondition::validate() const {
  if (!(fiber_efficiency >= 0.0) || fiber_efficiency > 1.0) {
    throw ValidationError("fiber_efficiency must lie in [0, 1]");
  }
  if (!(omega_laser.rad_s() > 0.0)) {
    throw ValidationError("omega_laser must be positive");
  }
}

void SpinMechanicalInputs::validate() const {
  if (!(g_sm.rad_s() >= 0.0)) {
    throw ValidationError("g_sm must be non-negative");
  }
  if (!(gamma_s.rad_s() > 0.0) || !(gamma_m.rad_s() > 0.0)) {
    throw ValidationError("gamma_s and gamma_m must be positive");
  }
}

double intracavity_photons(const DeviceRecord& device, const PumpCondition& pump) {
  device.validate();
  pump.validate();
  const double kappa = device.kappa.rad_s();
  const double delta = pump.detuning.rad_s();
  const double flux = pump.input_power.watts() * pump.fiber_efficiency /
                      (constants::hbar * pump.omega_laser.rad_s());
  return device.kappa_e.rad_s() / (delta * delta + kappa * kappa / 4.0) * flux;
}

double sideband_resolution(AngularFrequency omega_m, AngularFrequency kappa) {
  if (!(kappa.rad_s() > 0.0) || !(omega_m.rad_s() > 0.0)) {
    throw ValidationError("sideband_resolution needs positive omega_m and kappa");
  }
  return 4.0 * omega_m.rad_s() / kappa.rad_s();
}

double sideband_factor(AngularFrequency omega_m, AngularFrequency kappa) {
  const double r = sideband_resolution(omega_m, kappa);
  return r * r / (1.0 + r * r);
}

AngularFrequency backaction_linewidth(AngularFrequency gamma_i, AngularFrequency g0,
                                      double nc, AngularFrequency kappa,
                                      AngularFrequency omega_m, SidebandChoice side) {
  if (!(gamma_i.rad_s() > 0.0)) {
    throw ValidationError("intrinsic linewidth must be positive");
  }
  if (!(nc >= 0.0)) {
    throw ValidationError("photon number must be non-negative");
  }
  const double g = g0.rad_s();
  const double rate = 4.0 * g * g * nc / kappa.rad_s() * sideband_factor(omega_m, kappa);
  const double out = side == SidebandChoice::Red ? gamma_i.rad_s() + rate
                                                 : gamma_i.rad_s() - rate;
  if (side == SidebandChoice::Blue && out <= 0.0) {
    throw ValidationError("parametric instability threshold exceeded: "
                          "blue-sideband backaction cancels the intrinsic linewidth");
  }
  return AngularFrequency::from_rad_s(out);
}

double cooperativity(AngularFrequency g0, double nc, AngularFrequency kappa,
                     AngularFrequency gamma_m) {
  if (!(kappa.rad_s() > 0.0) || !(gamma_m.rad_s() > 0.0)) {
    throw ValidationError("cooperativity needs positive kappa and gamma_m");
  }
  if (!(nc >= 0.0)) {
    throw ValidationError("photon number must be non-negative");
  }
  const double g = g0.rad_s();
  return 4.0 * g * g * nc / (kappa.rad_s() * gamma_m.rad_s());
}

double qf_product_hz(double q_m, AngularFrequency omega_m) {
  if (!(q_m > 0.0)) {
    throw ValidationError("quality factor must be positive");
  }
  return q_m * omega_m.hz();
}

double quality_factor(AngularFrequency omega, AngularFrequency fwhm) {
  if (!(omega.rad_s() > 0.0) || !(fwhm.rad_s() > 0.0)) {
    throw ValidationError("quality_factor needs positive omega and linewidth");
  }
  return omega.rad_s() / fwhm.rad_s();
}

double spin_mech_cooperativity(const SpinMechanicalInputs& inputs) {
  inputs.validate();
  const double g = inputs.g_sm.rad_s();
  return 4.0 * g * g / (inputs.gamma_m.rad_s() * inputs.gamma_s.rad_s());
}

double zero_point_motion_m(double m_eff_kg, AngularFrequency omega_m) {
  if (!(m_eff_kg > 0.0)) {
    throw ValidationError("effective mass must be positive");
  }
  if (!(omega_m.rad_s() > 0.0)) {
    throw ValidationError("omega_m must be positive");
  }
  return std::sqrt(constants::hbar / (2.0 * m_eff_kg * omega_m.rad_s()));
}

}  // namespace omc
