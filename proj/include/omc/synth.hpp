#pragma once

#include <cstdint>
#include <vector>

#include "omc/device.hpp"
#include "omc/fits.hpp"
#include "omc/spectrum.hpp"

namespace omc::synth {

// Additive Gaussian noise with sigma = fraction * (peak-to-peak of the clean
// trace).  fraction == 0 produces noiseless data regardless of seed.
struct NoiseSpec {
  double fraction = 0.0;
  std::uint64_t seed = 0;
};

// Reflection scan across a fano resonance, linear grid centered on omega_o.
Spectrum fano_scan(double y0, double a0, double q, AngularFrequency kappa,
                   AngularFrequency omega_o, double span_factor, std::size_t n,
                   const NoiseSpec& noise = {});

// Thermomechanical spectrum, linear grid centered on omega_m.
Spectrum lorentzian_psd(AngularFrequency omega_m, AngularFrequency gamma_m,
                        double amplitude, double offset, double span_factor,
                        std::size_t n, const NoiseSpec& noise = {});

// Linewidth-versus-photon-number series for both pump sides.
std::vector<BackactionPoint> backaction_series(AngularFrequency g0, AngularFrequency kappa,
                                               AngularFrequency omega_m,
                                               AngularFrequency gamma_i,
                                               const std::vector<double>& photon_numbers,
                                               bool include_blue,
                                               const NoiseSpec& noise = {});

// Stretched-exponential coherence decay sampled on (0, t_max].
Spectrum stretched_decay(double amplitude, double t2, double stretch_n, double baseline,
                         double t_max, std::size_t n, const NoiseSpec& noise = {});

// Damped Rabi oscillation sampled on (0, t_max].
Spectrum rabi_trace(double pl0, double contrast, AngularFrequency rabi_omega, double decay,
                    double t_max, std::size_t n, const NoiseSpec& noise = {});

}  // namespace omc::synth
