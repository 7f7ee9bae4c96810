#pragma once

#include <string>

#include "omc/quantities.hpp"

namespace omc {

// Measured parameters of one cavity device.  Linewidths are FWHM.
struct DeviceRecord {
  std::string label;
  double lambda_o_nm = 0.0;    // optical resonance wavelength
  AngularFrequency kappa;      // total optical linewidth
  AngularFrequency kappa_e;    // extrinsic (coupling) linewidth
  AngularFrequency omega_m;    // mechanical frequency
  AngularFrequency gamma_m;    // mechanical linewidth

  AngularFrequency omega_o() const { return wavelength_nm_to_angular(lambda_o_nm); }
  void validate() const;
};

// Which mechanical sideband the pump sits on.
// Red: detuning = -omega_m (cooling / added damping).
// Blue: detuning = +omega_m (amplification / reduced damping).
enum class SidebandChoice { Red, Blue };

// Drive conditions at the device.
struct PumpCondition {
  Power input_power;               // at the fiber input
  double fiber_efficiency = 1.0;   // fraction reaching the cavity, [0, 1]
  AngularFrequency omega_laser;
  AngularFrequency detuning;       // omega_laser - omega_o, signed

  void validate() const;
};

// Inputs for the spin-mechanical figure of merit.
struct SpinMechanicalInputs {
  AngularFrequency g_sm;     // spin-phonon coupling
  AngularFrequency gamma_s;  // spin decoherence rate (convention set by caller)
  AngularFrequency gamma_m;  // mechanical linewidth

  void validate() const;
};

}  // namespace omc
