#include "omc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "omc/cavity_metrics.hpp"
#include "omc/fit_models.hpp"

namespace omc::synth {

namespace {

void add_noise(std::vector<double>& y, const NoiseSpec& noise) {
  if (noise.fraction <= 0.0) return;
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double sigma = noise.fraction * (*hi - *lo);
  if (sigma <= 0.0) return;
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  for (double& v : y) v += gauss(rng);
}

Spectrum sample_model(const LeastSquaresModel& model, std::span<const double> p,
                      double x_lo, double x_hi, std::size_t n, const NoiseSpec& noise) {
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    y[i] = model.value(x[i], p);
  }
  add_noise(y, noise);
  return Spectrum(std::move(x), std::move(y));
}

}  // namespace

Spectrum fano_scan(double y0, double a0, double q, AngularFrequency kappa,
                   AngularFrequency omega_o, double span_factor, std::size_t n,
                   const NoiseSpec& noise) {
  const double half = 0.5 * span_factor * kappa.rad_s();
  const double p[5] = {y0, a0, q, kappa.rad_s(), omega_o.rad_s()};
  return sample_model(models::fano(), p, omega_o.rad_s() - half, omega_o.rad_s() + half, n,
                      noise);
}

Spectrum lorentzian_psd(AngularFrequency omega_m, AngularFrequency gamma_m,
                        double amplitude, double offset, double span_factor, std::size_t n,
                        const NoiseSpec& noise) {
  const double half = 0.5 * span_factor * gamma_m.rad_s();
  const double p[4] = {omega_m.rad_s(), gamma_m.rad_s(), amplitude, offset};
  return sample_model(models::lorentzian(), p, omega_m.rad_s() - half,
                      omega_m.rad_s() + half, n, noise);
}

std::vector<BackactionPoint> backaction_series(AngularFrequency g0, AngularFrequency kappa,
                                               AngularFrequency omega_m,
                                               AngularFrequency gamma_i,
                                               const std::vector<double>& photon_numbers,
                                               bool include_blue, const NoiseSpec& noise) {
  const double rate =
      4.0 * g0.rad_s() * g0.rad_s() / kappa.rad_s() * sideband_factor(omega_m, kappa);
  std::vector<BackactionPoint> points;
  for (double nc : photon_numbers) {
    points.push_back({nc, AngularFrequency::from_rad_s(gamma_i.rad_s() + rate * nc),
                      SidebandChoice::Red});
  }
  if (include_blue) {
    for (double nc : photon_numbers) {
      points.push_back({nc, AngularFrequency::from_rad_s(gamma_i.rad_s() - rate * nc),
                        SidebandChoice::Blue});
    }
  }
  if (noise.fraction > 0.0) {
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> gauss(0.0, noise.fraction * gamma_i.rad_s());
    for (auto& p : points) {
      p.gamma_m = AngularFrequency::from_rad_s(p.gamma_m.rad_s() + gauss(rng));
    }
  }
  return points;
}

Spectrum stretched_decay(double amplitude, double t2, double stretch_n, double baseline,
                         double t_max, std::size_t n, const NoiseSpec& noise) {
  const double p[4] = {amplitude, t2, stretch_n, baseline};
  const double t_lo = t_max / static_cast<double>(n);
  return sample_model(models::stretched_exp(), p, t_lo, t_max, n, noise);
}

Spectrum rabi_trace(double pl0, double contrast, AngularFrequency rabi_omega, double decay,
                    double t_max, std::size_t n, const NoiseSpec& noise) {
  const double p[4] = {pl0, contrast, rabi_omega.rad_s(), decay};
  const double t_lo = t_max / static_cast<double>(n);
  return sample_model(models::rabi(), p, t_lo, t_max, n, noise);
}

}  // namespace omc::synth
