#include "omc/fits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "omc/cavity_metrics.hpp"

namespace omc {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid) - 1, v.end());
  return 0.5 * (hi + v[mid - 1]);
}

double median_spacing(const std::vector<double>& x) {
  std::vector<double> dx(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) dx[i] = x[i + 1] - x[i];
  return median(std::move(dx));
}

// Full width of the peak at index i0 at half its prominence above `floor`,
// by linear interpolation of the crossings.  y is peak-up.
double half_prominence_width(const std::vector<double>& x, const std::vector<double>& y,
                             std::size_t i0, double floor_level) {
  const double target = floor_level + 0.5 * (y[i0] - floor_level);
  double left = x.front() - 1.0, right = x.back() + 1.0;
  bool found_left = false, found_right = false;
  for (std::size_t j = i0; j-- > 0;) {
    if (y[j] <= target) {
      const double dy = y[j + 1] - y[j];
      const double t = std::abs(dy) > 0.0 ? (target - y[j]) / dy : 0.0;
      left = x[j] + t * (x[j + 1] - x[j]);
      found_left = true;
      break;
    }
  }
  for (std::size_t j = i0 + 1; j < y.size(); ++j) {
    if (y[j] <= target) {
      const double dy = y[j - 1] - y[j];
      const double t = std::abs(dy) > 0.0 ? (y[j - 1] - target) / dy : 1.0;
      right = x[j - 1] + t * (x[j] - x[j - 1]);
      found_right = true;
      break;
    }
  }
  if (found_left && found_right) return right - left;
  if (found_left) return 2.0 * (x[i0] - left);
  if (found_right) return 2.0 * (right - x[i0]);
  return (x.back() - x.front()) / 10.0;
}

double weighted_residual_norm(const LeastSquaresModel& model, const Spectrum& data,
                              std::span<const double> p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double w = data.has_sigma() ? 1.0 / data.y_sigma[i] : 1.0;
    const double r = (data.y[i] - model.value(data.x[i], p)) * w;
    acc += r * r;
  }
  return std::sqrt(acc);
}

Spectrum scaled_copy(const Spectrum& s, double x0, double sx, double sy) {
  std::vector<double> u(s.size()), v(s.size()), vs;
  for (std::size_t i = 0; i < s.size(); ++i) {
    u[i] = (s.x[i] - x0) / sx;
    v[i] = s.y[i] / sy;
  }
  if (s.has_sigma()) {
    vs.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) vs[i] = s.y_sigma[i] / sy;
  }
  return Spectrum(std::move(u), std::move(v), std::move(vs));
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

FanoFitResult fit_fano(const Spectrum& spectrum, const FanoFitOptions& options) {
  spectrum.validate();
  if (spectrum.size() < 6) {
    throw ValidationError("fano fit needs at least 6 points");
  }

  // deepest interior point; a strictly lower boundary sample means the scan
  // never crossed the resonance
  std::size_t dip = 1;
  for (std::size_t i = 2; i + 1 < spectrum.size(); ++i) {
    if (spectrum.y[i] < spectrum.y[dip]) dip = i;
  }
  if (spectrum.y.front() < spectrum.y[dip] || spectrum.y.back() < spectrum.y[dip]) {
    throw FitError("resonance not captured: reflection minimum sits at the scan boundary");
  }

  const double x0 = spectrum.x[dip];
  const double sx = spectrum.x.back() - spectrum.x.front();
  double sy = 0.0;
  for (double v : spectrum.y) sy = std::max(sy, std::abs(v));
  if (sy == 0.0) sy = 1.0;
  const Spectrum scaled = scaled_copy(spectrum, x0, sx, sy);

  // data-driven start: level from the median, width at half prominence
  const double level = median(scaled.y);
  const double depth = level - scaled.y[dip];
  std::vector<double> dip_up(scaled.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) dip_up[i] = -scaled.y[i];
  const double width = half_prominence_width(scaled.x, dip_up, dip, -level);

  std::vector<FitParameter> params;
  params.push_back({"y0", level, -kInf, kInf});
  params.push_back({"a0", depth * width / 2.0, 0.0, kInf});
  if (!options.fixed_q) params.push_back({"q", 0.0, -50.0, 50.0});
  params.push_back({"kappa", width, 1e-9, 1e3});
  params.push_back({"omega_o", 0.0, -1.5, 1.5});

  LeastSquaresModel model = models::fano();
  if (options.fixed_q) {
    const double qfix = *options.fixed_q;
    LeastSquaresModel base = models::fano();
    model.value = [base, qfix](double x, std::span<const double> p) {
      const double full[5] = {p[0], p[1], qfix, p[2], p[3]};
      return base.value(x, full);
    };
    model.gradient = [base, qfix](double x, std::span<const double> p, std::span<double> g) {
      const double full[5] = {p[0], p[1], qfix, p[2], p[3]};
      double gfull[5];
      base.gradient(x, full, gfull);
      g[0] = gfull[0];
      g[1] = gfull[1];
      g[2] = gfull[3];
      g[3] = gfull[4];
    };
  }

  const LeastSquaresSolution sol = solve_least_squares(model, scaled, params);

  FanoFitResult out;
  const bool fq = options.fixed_q.has_value();
  const std::size_t iq = 2;                  // q slot when free
  const std::size_t ik = fq ? 2 : 3;         // kappa slot
  const std::size_t iw = fq ? 3 : 4;         // omega_o slot
  out.y0 = {sol.params[0] * sy, sol.sigmas[0] * sy};
  out.a0 = {sol.params[1] * sy * sx, sol.sigmas[1] * sy * sx};
  out.q = fq ? Uncertain{*options.fixed_q, 0.0}
             : Uncertain{sol.params[iq], sol.sigmas[iq]};
  out.kappa = {sol.params[ik] * sx, sol.sigmas[ik] * sx};
  out.omega_o = {x0 + sol.params[iw] * sx, sol.sigmas[iw] * sx};
  out.iterations = sol.iterations;

  if (!(out.kappa.value > 0.0)) {
    throw FitError("fano fit collapsed to a non-positive linewidth");
  }
  const double full[5] = {out.y0.value, out.a0.value, out.q.value, out.kappa.value,
                          out.omega_o.value};
  out.residual_norm = weighted_residual_norm(models::fano(), spectrum, full);
  return out;
}

LorentzianFitResult fit_lorentzian_psd(const Spectrum& spectrum) {
  spectrum.validate();
  if (spectrum.size() < 5) {
    throw ValidationError("lorentzian fit needs at least 5 points");
  }

  std::size_t peak = 1;
  for (std::size_t i = 2; i + 1 < spectrum.size(); ++i) {
    if (spectrum.y[i] > spectrum.y[peak]) peak = i;
  }
  if (spectrum.y.front() > spectrum.y[peak] || spectrum.y.back() > spectrum.y[peak]) {
    throw FitError("peak not captured: psd maximum sits at the scan boundary");
  }

  const double x0 = spectrum.x[peak];
  const double sx = spectrum.x.back() - spectrum.x.front();
  double sy = 0.0;
  for (double v : spectrum.y) sy = std::max(sy, std::abs(v));
  if (sy == 0.0) sy = 1.0;
  const Spectrum scaled = scaled_copy(spectrum, x0, sx, sy);

  const double offset0 = median(scaled.y);
  const double height = scaled.y[peak] - offset0;
  const double width = half_prominence_width(scaled.x, scaled.y, peak, offset0);

  std::vector<FitParameter> params{
      {"omega_m", 0.0, -1.5, 1.5},
      {"gamma_m", width, 1e-12, 1e3},
      {"amplitude", height, 0.0, kInf},
      {"offset", offset0, -kInf, kInf},
  };

  const LeastSquaresSolution sol = solve_least_squares(models::lorentzian(), scaled, params);

  LorentzianFitResult out;
  out.omega_m = {x0 + sol.params[0] * sx, sol.sigmas[0] * sx};
  out.gamma_m = {sol.params[1] * sx, sol.sigmas[1] * sx};
  out.amplitude = {sol.params[2] * sy, sol.sigmas[2] * sy};
  out.offset = {sol.params[3] * sy, sol.sigmas[3] * sy};
  out.iterations = sol.iterations;

  if (out.omega_m.value < spectrum.x.front() || out.omega_m.value > spectrum.x.back()) {
    throw FitError("fitted peak center left the scanned range");
  }
  if (!(out.gamma_m.value > 0.0)) {
    throw FitError("lorentzian fit collapsed to a non-positive linewidth");
  }
  out.under_resolved = out.gamma_m.value < 2.0 * median_spacing(spectrum.x);

  const double p[4] = {out.omega_m.value, out.gamma_m.value, out.amplitude.value,
                       out.offset.value};
  out.residual_norm = weighted_residual_norm(models::lorentzian(), spectrum, p);
  return out;
}

namespace {

// Plain least-squares line gamma = intercept + slope * z with unit weights.
// Returns {intercept, slope, cov scaled by residual variance, ssr}.
struct LineFit {
  double intercept = 0.0, slope = 0.0;
  double var_intercept = 0.0, var_slope = 0.0;
  double ssr = 0.0;
  int n = 0;
};

LineFit fit_line(const std::vector<double>& z, const std::vector<double>& g) {
  LineFit f;
  f.n = static_cast<int>(z.size());
  const double n = static_cast<double>(z.size());
  double sz = 0.0, szz = 0.0, sg = 0.0, szg = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    sz += z[i];
    szz += z[i] * z[i];
    sg += g[i];
    szg += z[i] * g[i];
  }
  const double det = n * szz - sz * sz;
  const double scale = std::max(szz, 1.0);
  if (!(det > 1e-12 * n * scale)) {
    throw SingularFitError("slope");
  }
  f.intercept = (szz * sg - sz * szg) / det;
  f.slope = (n * szg - sz * sg) / det;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double r = g[i] - f.intercept - f.slope * z[i];
    f.ssr += r * r;
  }
  const double sigma2 = f.n > 2 ? f.ssr / (n - 2.0) : 0.0;
  f.var_intercept = sigma2 * szz / det;
  f.var_slope = sigma2 * n / det;
  return f;
}

}  // namespace

BackactionFitResult fit_backaction(const std::vector<BackactionPoint>& points,
                                   AngularFrequency kappa, AngularFrequency omega_m) {
  std::vector<double> z_all, g_all, nc_red, g_red, nc_blue, g_blue;
  for (const auto& p : points) {
    if (!std::isfinite(p.nc) || p.nc < 0.0) {
      throw ValidationError("photon numbers must be finite and non-negative");
    }
    if (!std::isfinite(p.gamma_m.rad_s())) {
      throw ValidationError("linewidths must be finite");
    }
    const double s = p.side == SidebandChoice::Red ? 1.0 : -1.0;
    z_all.push_back(s * p.nc);
    g_all.push_back(p.gamma_m.rad_s());
    if (p.side == SidebandChoice::Red) {
      nc_red.push_back(p.nc);
      g_red.push_back(p.gamma_m.rad_s());
    } else {
      nc_blue.push_back(p.nc);
      g_blue.push_back(p.gamma_m.rad_s());
    }
  }
  if ((!nc_red.empty() && nc_red.size() < 2) || (!nc_blue.empty() && nc_blue.size() < 2)) {
    throw ValidationError("each pump side present needs at least 2 points");
  }
  if (z_all.size() < 2) {
    throw ValidationError("backaction fit needs at least 2 points");
  }

  const double sf = sideband_factor(omega_m, kappa);
  const double k = kappa.rad_s();

  BackactionFitResult out;
  out.sideband_factor_used = sf;

  // pooled fit: gamma = gamma_i + rate * (sign * nc)
  const LineFit pooled = fit_line(z_all, g_all);
  if (!(pooled.slope > 0.0)) {
    throw FitError("backaction rate came out non-positive; data are inconsistent "
                   "with sideband damping");
  }
  out.gamma_i = {pooled.intercept, std::sqrt(pooled.var_intercept)};
  const double g0 = std::sqrt(pooled.slope * k / (4.0 * sf));
  const double g0_sigma = std::sqrt(pooled.var_slope) * g0 / (2.0 * pooled.slope);
  out.g0 = {g0, g0_sigma};
  out.residual_norm = std::sqrt(pooled.ssr);

  auto side_fit = [&](const std::vector<double>& nc, const std::vector<double>& g,
                      double sign) {
    const LineFit f = fit_line(nc, g);
    BackactionSideFit s;
    s.intercept = {f.intercept, std::sqrt(f.var_intercept)};
    s.slope = {f.slope, std::sqrt(f.var_slope)};
    const double rate = sign * f.slope;
    if (!(rate > 0.0)) {
      throw FitError("backaction rate came out non-positive on one pump side");
    }
    const double side_g0 = std::sqrt(rate * k / (4.0 * sf));
    s.g0 = {side_g0, std::sqrt(f.var_slope) * side_g0 / (2.0 * rate)};
    s.residual_norm = std::sqrt(f.ssr);
    s.n_points = f.n;
    return s;
  };
  if (nc_red.size() >= 2) out.red = side_fit(nc_red, g_red, 1.0);
  if (nc_blue.size() >= 2) out.blue = side_fit(nc_blue, g_blue, -1.0);

  if (!(out.g0.value > 0.0) || !(out.gamma_i.value > 0.0)) {
    throw FitError("backaction fit produced non-positive rates");
  }
  return out;
}

CoherenceFitResult fit_stretched_exponential(const Spectrum& decay) {
  decay.validate();
  if (decay.size() < 5) {
    throw ValidationError("stretched-exponential fit needs at least 5 points");
  }
  if (!(decay.x.front() > 0.0)) {
    throw ValidationError("time values must be strictly positive");
  }

  const double st = decay.x.back();
  double sy = 0.0;
  for (double v : decay.y) sy = std::max(sy, std::abs(v));
  if (sy == 0.0) sy = 1.0;
  const Spectrum scaled = scaled_copy(decay, 0.0, st, sy);

  // tail average for the baseline, 1/e crossing for the time constant
  const std::size_t tail = std::max<std::size_t>(3, scaled.size() / 10);
  double base0 = 0.0;
  for (std::size_t i = scaled.size() - tail; i < scaled.size(); ++i) base0 += scaled.y[i];
  base0 /= static_cast<double>(tail);
  const double amp0 = scaled.y.front() - base0;
  double t2_0 = scaled.x.back() / 3.0;
  const double target = base0 + amp0 / std::exp(1.0);
  for (std::size_t i = 1; std::abs(amp0) > 1e-12 && i < scaled.size(); ++i) {
    const bool crossed = amp0 >= 0.0 ? scaled.y[i] <= target : scaled.y[i] >= target;
    if (crossed) {
      const double step = scaled.y[i - 1] - scaled.y[i];
      const double t = std::abs(step) > 0.0 ? (scaled.y[i - 1] - target) / step : 0.0;
      t2_0 = scaled.x[i - 1] + t * (scaled.x[i] - scaled.x[i - 1]);
      break;
    }
  }
  t2_0 = std::clamp(t2_0, scaled.x.front(), 10.0 * scaled.x.back());

  std::vector<FitParameter> params{
      {"amplitude", amp0, -kInf, kInf},
      {"t2", t2_0, 1e-6, 1e4},
      {"stretch_n", 1.0, 0.05, 8.0},
      {"baseline", base0, -kInf, kInf},
  };

  const LeastSquaresSolution sol =
      solve_least_squares(models::stretched_exp(), scaled, params);

  CoherenceFitResult out;
  out.amplitude = {sol.params[0] * sy, sol.sigmas[0] * sy};
  out.t2 = {sol.params[1] * st, sol.sigmas[1] * st};
  out.stretch_n = {sol.params[2], sol.sigmas[2]};
  out.baseline = {sol.params[3] * sy, sol.sigmas[3] * sy};
  out.iterations = sol.iterations;

  if (!(out.t2.value > 0.0) || !(out.stretch_n.value > 0.0)) {
    throw FitError("coherence fit collapsed to a non-positive time constant or exponent");
  }
  const double p[4] = {out.amplitude.value, out.t2.value, out.stretch_n.value,
                       out.baseline.value};
  out.residual_norm = weighted_residual_norm(models::stretched_exp(), decay, p);
  return out;
}

RabiFitResult fit_rabi(const Spectrum& trace) {
  trace.validate();
  if (trace.size() < 5) {
    throw ValidationError("rabi fit needs at least 5 points");
  }
  const double span = trace.x.back() - trace.x.front();
  if (!(span > 0.0)) {
    throw ValidationError("rabi trace spans zero time");
  }

  // dominant discrete-spectrum peak of the detrended trace
  const double mean = std::accumulate(trace.y.begin(), trace.y.end(), 0.0) /
                      static_cast<double>(trace.size());
  std::vector<double> detrended(trace.size());
  double total_power = 0.0, total_signal = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    detrended[i] = trace.y[i] - mean;
    total_power += detrended[i] * detrended[i];
    total_signal += trace.y[i] * trace.y[i];
  }
  if (total_power <= 1e-20 * std::max(total_signal, 1e-300)) {
    throw FitError("no oscillation detected: trace is constant after detrending");
  }

  const double dt = median_spacing(trace.x);
  const double f_lo = 0.5 / span;
  const double f_hi = 0.5 / dt;
  const int bins = 600;
  std::vector<double> power(static_cast<std::size_t>(bins));
  double best_f = f_lo, best_p = -1.0;
  for (int b = 0; b < bins; ++b) {
    const double f = f_lo + (f_hi - f_lo) * b / (bins - 1.0);
    double c = 0.0, s = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const double ph = constants::two_pi * f * trace.x[i];
      c += detrended[i] * std::cos(ph);
      s += detrended[i] * std::sin(ph);
    }
    power[static_cast<std::size_t>(b)] = c * c + s * s;
    if (power[static_cast<std::size_t>(b)] > best_p) {
      best_p = power[static_cast<std::size_t>(b)];
      best_f = f;
    }
  }
  if (best_p < 20.0 * median(power)) {
    throw FitError("no oscillation detected: spectral peak of the detrended trace "
                   "is below the noise floor");
  }

  const double st = trace.x.back();
  double sy = 0.0;
  for (double v : trace.y) sy = std::max(sy, std::abs(v));
  if (sy == 0.0) sy = 1.0;
  const Spectrum scaled = scaled_copy(trace, 0.0, st, sy);

  const double ymax = *std::max_element(trace.y.begin(), trace.y.end());
  const double ymin = *std::min_element(trace.y.begin(), trace.y.end());
  const double pl0_0 = ymax / sy;
  const double contrast0 = std::clamp((ymax - ymin) / std::max(ymax, 1e-300), 0.01, 1.0);

  std::vector<FitParameter> params{
      {"pl0", pl0_0, 1e-12, kInf},
      {"contrast", contrast0, 0.0, 1.0},
      {"rabi_omega", constants::two_pi * best_f * st,
       constants::two_pi * 0.25 / span * st, 1.5 * constants::pi / dt * st},
      {"decay", 1.0 / span * st, 0.0, 200.0 / span * st},
  };

  const LeastSquaresSolution sol = solve_least_squares(models::rabi(), scaled, params);

  RabiFitResult out;
  out.pl0 = {sol.params[0] * sy, sol.sigmas[0] * sy};
  out.contrast = {sol.params[1], sol.sigmas[1]};
  out.rabi_omega = {sol.params[2] / st, sol.sigmas[2] / st};
  out.decay = {sol.params[3] / st, sol.sigmas[3] / st};
  out.iterations = sol.iterations;

  if (out.rabi_omega.value < constants::two_pi * 0.99 / span) {
    throw FitError("less than one full oscillation period in the trace");
  }
  const double p[4] = {out.pl0.value, out.contrast.value, out.rabi_omega.value,
                       out.decay.value};
  out.residual_norm = weighted_residual_norm(models::rabi(), trace, p);
  return out;
}

}  // namespace omc
