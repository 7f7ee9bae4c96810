#pragma once

#include <cmath>
#include <compare>

#include "omc/errors.hpp"

namespace omc {

namespace constants {
// CODATA 2018 exact values.
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
}  // namespace constants

// Angular frequency in rad/s.  Signed, so detunings can carry their sign.
// All internal physics uses this type; /2pi conversions happen only at the
// I/O boundary through hz().
class AngularFrequency {
public:
  constexpr AngularFrequency() = default;

  static constexpr AngularFrequency from_rad_s(double value) {
    return AngularFrequency(value);
  }
  static constexpr AngularFrequency from_hz(double ordinary) {
    return AngularFrequency(ordinary * constants::two_pi);
  }

  constexpr double rad_s() const { return value_; }
  constexpr double hz() const { return value_ / constants::two_pi; }

  friend constexpr AngularFrequency operator+(AngularFrequency a, AngularFrequency b) {
    return AngularFrequency(a.value_ + b.value_);
  }
  friend constexpr AngularFrequency operator-(AngularFrequency a, AngularFrequency b) {
    return AngularFrequency(a.value_ - b.value_);
  }
  friend constexpr AngularFrequency operator-(AngularFrequency a) {
    return AngularFrequency(-a.value_);
  }
  friend constexpr AngularFrequency operator*(double s, AngularFrequency a) {
    return AngularFrequency(s * a.value_);
  }
  friend constexpr double operator/(AngularFrequency a, AngularFrequency b) {
    return a.value_ / b.value_;
  }
  friend constexpr auto operator<=>(AngularFrequency a, AngularFrequency b) = default;

private:
  explicit constexpr AngularFrequency(double v) : value_(v) {}
  double value_ = 0.0;
};

// Optical power, stored in watts, never negative.
class Power {
public:
  constexpr Power() = default;

  static Power from_watts(double watts) {
    if (!(watts >= 0.0) || !std::isfinite(watts)) {
      throw ValidationError("power must be finite and non-negative, got " +
                            std::to_string(watts) + " W");
    }
    return Power(watts);
  }
  static Power from_dbm(double dbm) {
    return Power(1e-3 * std::pow(10.0, dbm / 10.0));
  }

  constexpr double watts() const { return watts_; }
  double dbm() const { return 10.0 * std::log10(watts_ / 1e-3); }

private:
  explicit constexpr Power(double w) : watts_(w) {}
  double watts_ = 0.0;
};

// omega = 2 pi c / lambda.
AngularFrequency wavelength_to_angular(double wavelength_m);
AngularFrequency wavelength_nm_to_angular(double wavelength_nm);
double angular_to_wavelength_nm(AngularFrequency omega);

Power dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

}  // namespace omc
