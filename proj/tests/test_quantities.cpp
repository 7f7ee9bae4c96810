#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "omc/quantities.hpp"

using namespace omc;

namespace {
bool within_ulps(double a, double b, int ulps) {
  double lo = b, hi = b;
  for (int i = 0; i < ulps; ++i) {
    lo = std::nextafter(lo, -INFINITY);
    hi = std::nextafter(hi, INFINITY);
  }
  return a >= lo && a <= hi;
}
}  // namespace

TEST_CASE("angular frequency round trips through ordinary frequency") {
  // 1 Hz to 1 PHz, log spaced
  for (int i = 0; i <= 60; ++i) {
    const double f = std::pow(10.0, i * 15.0 / 60.0);
    const double back = AngularFrequency::from_hz(f).hz();
    CHECK(within_ulps(back, f, 1));
  }
  CHECK(AngularFrequency::from_hz(0.0).hz() == 0.0);
  CHECK(AngularFrequency::from_hz(-6.23e9).hz() == doctest::Approx(-6.23e9).epsilon(1e-15));
}

TEST_CASE("wavelength to angular frequency") {
  // lambda numerically equal to c (in meters) gives omega = 2 pi rad/s
  const double w = wavelength_to_angular(constants::speed_of_light).rad_s();
  CHECK(within_ulps(w, constants::two_pi, 1));

  CHECK(wavelength_nm_to_angular(1576.87).hz() ==
        doctest::Approx(190.1186895558924e12).epsilon(1e-12));
  CHECK(wavelength_nm_to_angular(1550.0).hz() ==
        doctest::Approx(193.41448903225807e12).epsilon(1e-12));
  CHECK(wavelength_nm_to_angular(1559.0).hz() ==
        doctest::Approx(192.2979204618345e12).epsilon(1e-12));

  // conversion is its own inverse
  CHECK(angular_to_wavelength_nm(wavelength_nm_to_angular(1576.87)) ==
        doctest::Approx(1576.87).epsilon(1e-12));

  CHECK_THROWS_AS(wavelength_to_angular(0.0), ValidationError);
  CHECK_THROWS_AS(wavelength_to_angular(-1.0), ValidationError);
  CHECK_THROWS_AS(wavelength_to_angular(std::nan("")), ValidationError);
}

TEST_CASE("power conversions") {
  CHECK(dbm_to_watts(0.0).watts() == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(dbm_to_watts(-30.0).watts() == doctest::Approx(1e-6).epsilon(1e-14));
  CHECK(dbm_to_watts(10.0).watts() == doctest::Approx(1e-2).epsilon(1e-14));

  for (int i = 0; i <= 90; ++i) {
    const double dbm = -120.0 + 2.0 * i;
    CHECK(watts_to_dbm(dbm_to_watts(dbm).watts()) == doctest::Approx(dbm).epsilon(1e-12));
  }

  CHECK_THROWS_AS(Power::from_watts(-1e-9), ValidationError);
  CHECK_THROWS_AS(Power::from_watts(std::nan("")), ValidationError);
  // dBm input is valid on the whole real line
  CHECK(dbm_to_watts(-300.0).watts() > 0.0);
}

TEST_CASE("angular frequency arithmetic keeps sign conventions") {
  const auto a = AngularFrequency::from_hz(5.0e9);
  const auto b = AngularFrequency::from_hz(6.23e9);
  CHECK((a - b).hz() == doctest::Approx(-1.23e9).epsilon(1e-12));
  CHECK((-b).rad_s() == -b.rad_s());
  CHECK((2.0 * a).hz() == doctest::Approx(1.0e10).epsilon(1e-15));
  CHECK(a < b);
  CHECK(b / a == doctest::Approx(6.23 / 5.0).epsilon(1e-15));
}
