#include "omc/quantities.hpp"

namespace omc {

AngularFrequency wavelength_to_angular(double wavelength_m) {
  if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m)) {
    throw ValidationError("wavelength must be finite and positive, got " +
                          std::to_string(wavelength_m) + " m");
  }
  return AngularFrequency::from_rad_s(constants::two_pi * constants::speed_of_light /
                                      wavelength_m);
}

AngularFrequency wavelength_nm_to_angular(double wavelength_nm) {
  return wavelength_to_angular(wavelength_nm * 1e-9);
}

double angular_to_wavelength_nm(AngularFrequency omega) {
  if (!(omega.rad_s() > 0.0)) {
    throw ValidationError("wavelength is defined only for positive frequencies");
  }
  return constants::two_pi * constants::speed_of_light / omega.rad_s() * 1e9;
}

Power dbm_to_watts(double dbm) { return Power::from_dbm(dbm); }

double watts_to_dbm(double watts) { return Power::from_watts(watts).dbm(); }

}  // namespace omc
