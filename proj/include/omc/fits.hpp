#pragma once

#include <optional>
#include <vector>

#include "omc/device.hpp"
#include "omc/fit_models.hpp"
#include "omc/quantities.hpp"
#include "omc/spectrum.hpp"

namespace omc {

// A fitted value with its one-sigma uncertainty.
struct Uncertain {
  double value = 0.0;
  double sigma = 0.0;
};

struct FanoFitResult {
  Uncertain y0;       // off-resonant reflection level, detector units
  Uncertain a0;       // lineshape amplitude, detector units * rad/s
  Uncertain q;        // asymmetry parameter
  Uncertain kappa;    // FWHM, rad/s
  Uncertain omega_o;  // resonance, rad/s
  double residual_norm = 0.0;
  int iterations = 0;

  AngularFrequency kappa_angular() const { return AngularFrequency::from_rad_s(kappa.value); }
  AngularFrequency omega_o_angular() const { return AngularFrequency::from_rad_s(omega_o.value); }
  double optical_q() const { return omega_o.value / kappa.value; }
};

struct FanoFitOptions {
  std::optional<double> fixed_q;  // freeze the asymmetry (e.g. 0 for a symmetric dip)
};

FanoFitResult fit_fano(const Spectrum& spectrum, const FanoFitOptions& options = {});

struct LorentzianFitResult {
  Uncertain omega_m;    // peak center, rad/s
  Uncertain gamma_m;    // FWHM, rad/s
  Uncertain amplitude;  // peak height above offset
  Uncertain offset;
  double residual_norm = 0.0;
  int iterations = 0;
  bool under_resolved = false;  // FWHM below twice the typical point spacing

  AngularFrequency omega_m_angular() const { return AngularFrequency::from_rad_s(omega_m.value); }
  AngularFrequency gamma_m_angular() const { return AngularFrequency::from_rad_s(gamma_m.value); }
  double mechanical_q() const { return omega_m.value / gamma_m.value; }
};

LorentzianFitResult fit_lorentzian_psd(const Spectrum& spectrum);

struct BackactionPoint {
  double nc = 0.0;
  AngularFrequency gamma_m;
  SidebandChoice side = SidebandChoice::Red;
};

// Straight-line fit of one pump side.
struct BackactionSideFit {
  Uncertain intercept;  // rad/s at nc = 0
  Uncertain slope;      // rad/s per photon, signed (+ red, - blue)
  Uncertain g0;         // rad/s
  double residual_norm = 0.0;
  int n_points = 0;
};

struct BackactionFitResult {
  Uncertain g0;       // pooled, rad/s
  Uncertain gamma_i;  // pooled, rad/s
  std::optional<BackactionSideFit> red;
  std::optional<BackactionSideFit> blue;
  double residual_norm = 0.0;
  double sideband_factor_used = 0.0;
};

// Closed-form weighted straight-line regression of linewidth vs photon number,
// slope -/+ (4 g0^2/kappa) * sideband_factor shared across sides.
BackactionFitResult fit_backaction(const std::vector<BackactionPoint>& points,
                                   AngularFrequency kappa, AngularFrequency omega_m);

struct CoherenceFitResult {
  Uncertain amplitude;
  Uncertain t2;         // seconds
  Uncertain stretch_n;  // stretch exponent
  Uncertain baseline;
  double residual_norm = 0.0;
  int iterations = 0;
};

// y(t) = A exp(-(t/T2)^n) + baseline
CoherenceFitResult fit_stretched_exponential(const Spectrum& decay);

struct RabiFitResult {
  Uncertain pl0;         // fluorescence level at tau = 0
  Uncertain contrast;    // (PL0 - PL_-1)/PL0, in [0, 1]
  Uncertain rabi_omega;  // rad/s
  Uncertain decay;       // 1/s
  double residual_norm = 0.0;
  int iterations = 0;

  AngularFrequency rabi_frequency() const { return AngularFrequency::from_rad_s(rabi_omega.value); }
};

// PL(tau) = PL0 [1 - contrast/2 (1 - cos(Omega tau) e^(-tau decay))]
RabiFitResult fit_rabi(const Spectrum& trace);

}  // namespace omc
