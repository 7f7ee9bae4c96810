// omc: fits, device metrics, and surrogate-based design search for 1D
// optomechanical crystal nanobeams.  Commands read CSV measurements or a JSON
// run configuration and emit deterministic JSON reports (sorted keys, 12
// significant digits) so equal inputs produce byte-identical output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "omc/cavity_metrics.hpp"
#include "omc/cavity_solver.hpp"
#include "omc/config.hpp"
#include "omc/csv.hpp"
#include "omc/errors.hpp"
#include "omc/fit_models.hpp"
#include "omc/fits.hpp"
#include "omc/genetic.hpp"
#include "omc/grid_search.hpp"
#include "omc/layer_stack.hpp"
#include "omc/report.hpp"
#include "omc/synth.hpp"

namespace {

using nlohmann::json;
using namespace omc;

constexpr double kTwoPi = constants::two_pi;

std::string fmt(const char* spec, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string basename_of(const std::string& path) {
  const auto pos = path.find_last_of("/\\");
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

json base_report(const char* command) {
  json r;
  r["command"] = command;
  r["version"] = kToolVersion;
  r["inputs"] = json::object();
  r["notes"] = json::array();
  return r;
}

void add_input(json& report, const std::string& path) {
  report["inputs"][basename_of(path)] = digest_hex(read_file(path));
}

void emit_report(const json& report, const std::string& out_path) {
  const std::string text = render_json(report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

// sigma of a quotient assuming independent errors
Uncertain divide(const Uncertain& num, const Uncertain& den) {
  const double v = num.value / den.value;
  const double rel = std::hypot(num.sigma / num.value, den.sigma / den.value);
  return {v, std::abs(v) * rel};
}

Uncertain scale(const Uncertain& u, double k) {
  return {u.value * k, u.sigma * std::abs(k)};
}

// measurement files carry wavelength in nm; fits run on angular frequency
Spectrum optical_to_angular(const SpectrumTable& table) {
  struct Row {
    double omega, y, sigma;
  };
  std::vector<Row> rows(table.x.size());
  for (std::size_t i = 0; i < table.x.size(); ++i) {
    rows[i] = {wavelength_nm_to_angular(table.x[i]).rad_s(), table.y[i],
               table.sigma.empty() ? 0.0 : table.sigma[i]};
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.omega < b.omega; });
  std::vector<double> x(rows.size()), y(rows.size()), s;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    x[i] = rows[i].omega;
    y[i] = rows[i].y;
  }
  if (!table.sigma.empty()) {
    s.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) s[i] = rows[i].sigma;
  }
  return Spectrum(std::move(x), std::move(y), std::move(s));
}

Spectrum scaled_spectrum(const SpectrumTable& table, double x_factor) {
  std::vector<double> x(table.x.size());
  for (std::size_t i = 0; i < table.x.size(); ++i) x[i] = table.x[i] * x_factor;
  return Spectrum(std::move(x), table.y, table.sigma);
}

void run_fit_optical(const std::string& csv_path, bool dip_contrast,
                     const std::string& out_path) {
  const SpectrumTable table = load_spectrum_csv(csv_path, SpectrumSchema::OpticalScan);
  const Spectrum spectrum = optical_to_angular(table);
  const FanoFitResult fit = fit_fano(spectrum);

  json report = base_report("fit-optical");
  add_input(report, csv_path);
  json& q = report["quantities"];

  const Uncertain f_o = scale(fit.omega_o, 1.0 / kTwoPi);
  const double lambda_nm = angular_to_wavelength_nm(fit.omega_o_angular());
  q["lambda_o_nm"] = quantity(
      Uncertain{lambda_nm, lambda_nm * fit.omega_o.sigma / fit.omega_o.value}, "nm");
  q["f_o_hz"] = quantity(f_o, "Hz");
  q["kappa_hz"] = quantity(scale(fit.kappa, 1.0 / kTwoPi), "Hz");
  q["fano_q"] = quantity(fit.q, "dimensionless");
  q["q_o"] = quantity(divide(fit.omega_o, fit.kappa), "dimensionless");
  q["residual_norm"] = quantity(fit.residual_norm, "arb");

  if (dip_contrast) {
    // deepest point of the fitted lineshape over the scanned range
    const double lo = spectrum.x.front() - fit.omega_o.value;
    const double hi = spectrum.x.back() - fit.omega_o.value;
    double r_min = fit.y0.value;
    for (int i = 0; i <= 4000; ++i) {
      const double delta = lo + (hi - lo) * i / 4000.0;
      r_min = std::min(r_min, fano_reflection(delta, fit.y0.value, fit.a0.value,
                                              fit.q.value, fit.kappa.value));
    }
    const double r_off = fit.y0.value;
    if (r_off > 0.0 && r_min >= 0.0 && r_min <= r_off) {
      const double kappa_e = 0.5 * fit.kappa.value * (1.0 - std::sqrt(r_min / r_off));
      q["dip_contrast"] = quantity(1.0 - r_min / r_off, "dimensionless");
      q["kappa_e_hz"] = quantity(kappa_e / kTwoPi, "Hz");
      report["notes"].push_back(
          "kappa_e from the dip contrast assumes the under-coupled branch of a "
          "single-port cavity; the over-coupled branch gives kappa minus this value");
    } else {
      report["notes"].push_back(
          "dip contrast is outside [0, 1] for the fitted lineshape; kappa_e omitted");
    }
  }
  emit_report(report, out_path);
}

void run_fit_mechanical(const std::string& csv_path, const std::string& out_path) {
  const SpectrumTable table =
      load_spectrum_csv(csv_path, SpectrumSchema::MechanicalPsd);
  const Spectrum spectrum = scaled_spectrum(table, kTwoPi);
  const LorentzianFitResult fit = fit_lorentzian_psd(spectrum);

  json report = base_report("fit-mechanical");
  add_input(report, csv_path);
  json& q = report["quantities"];

  const Uncertain f_m = scale(fit.omega_m, 1.0 / kTwoPi);
  const Uncertain gamma = scale(fit.gamma_m, 1.0 / kTwoPi);
  const Uncertain q_m = divide(fit.omega_m, fit.gamma_m);
  // qf = q_m * f_m; independent-error propagation through omega and gamma
  const double qf = q_m.value * f_m.value;
  const double qf_rel = std::hypot(2.0 * fit.omega_m.sigma / fit.omega_m.value,
                                   fit.gamma_m.sigma / fit.gamma_m.value);
  q["f_m_hz"] = quantity(f_m, "Hz");
  q["gamma_m_hz"] = quantity(gamma, "Hz");
  q["q_m"] = quantity(q_m, "dimensionless");
  q["qf_product_hz"] = quantity(Uncertain{qf, qf * qf_rel}, "Hz");
  q["residual_norm"] = quantity(fit.residual_norm, "arb");
  if (fit.under_resolved) {
    report["notes"].push_back(
        "fitted linewidth is below twice the scan point spacing; treat gamma_m "
        "as an upper bound");
  }
  emit_report(report, out_path);
}

void run_backaction(const std::string& csv_path, const std::string& config_path,
                    double nc_eval, const std::string& out_path) {
  const RunConfig cfg = load_run_config(config_path);
  cfg.require_device("backaction");
  const std::vector<BackactionPoint> points = load_backaction_csv(csv_path);
  const BackactionFitResult fit =
      fit_backaction(points, cfg.device.kappa, cfg.device.omega_m);

  json report = base_report("backaction");
  add_input(report, csv_path);
  add_input(report, config_path);
  json& q = report["quantities"];

  q["g0_hz"] = quantity(scale(fit.g0, 1.0 / kTwoPi), "Hz");
  q["gamma_i_hz"] = quantity(scale(fit.gamma_i, 1.0 / kTwoPi), "Hz");
  q["sideband_factor"] = quantity(fit.sideband_factor_used, "dimensionless");
  if (fit.red) {
    q["g0_red_hz"] = quantity(scale(fit.red->g0, 1.0 / kTwoPi), "Hz");
    q["slope_red_hz_per_photon"] =
        quantity(scale(fit.red->slope, 1.0 / kTwoPi), "Hz");
  }
  if (fit.blue) {
    q["g0_blue_hz"] = quantity(scale(fit.blue->g0, 1.0 / kTwoPi), "Hz");
    q["slope_blue_hz_per_photon"] =
        quantity(scale(fit.blue->slope, 1.0 / kTwoPi), "Hz");
  }
  if (nc_eval > 0.0) {
    const double c = cooperativity(AngularFrequency::from_rad_s(fit.g0.value),
                                   nc_eval, cfg.device.kappa,
                                   AngularFrequency::from_rad_s(fit.gamma_i.value));
    q["nc"] = quantity(nc_eval, "photons");
    q["cooperativity"] = quantity(c, "dimensionless");
    report["notes"].push_back(
        "cooperativity uses the fitted pooled g0 and the fitted intrinsic "
        "linewidth gamma_i");
  }
  emit_report(report, out_path);
}

void run_spin(const std::string& csv_path, const std::string& kind,
              const std::string& out_path) {
  if (kind != "rabi" && kind != "echo") {
    throw ValidationError("unknown spin trace kind '" + kind +
                          "'; expected rabi or echo");
  }
  const SpectrumTable table = load_spectrum_csv(csv_path, SpectrumSchema::TimeTrace);
  const Spectrum trace = scaled_spectrum(table, 1.0);

  json report = base_report("spin");
  add_input(report, csv_path);
  report["kind"] = kind;
  json& q = report["quantities"];

  if (kind == "echo") {
    const CoherenceFitResult fit = fit_stretched_exponential(trace);
    q["t2_s"] = quantity(fit.t2, "s");
    q["stretch_n"] = quantity(fit.stretch_n, "dimensionless");
    q["amplitude"] = quantity(fit.amplitude, "arb");
    q["baseline"] = quantity(fit.baseline, "arb");
    q["residual_norm"] = quantity(fit.residual_norm, "arb");
  } else {
    const RabiFitResult fit = fit_rabi(trace);
    q["contrast"] = quantity(fit.contrast, "dimensionless");
    q["rabi_hz"] = quantity(scale(fit.rabi_omega, 1.0 / kTwoPi), "Hz");
    q["pl0"] = quantity(fit.pl0, "arb");
    q["decay_rate_per_s"] = quantity(fit.decay, "1/s");
    q["residual_norm"] = quantity(fit.residual_norm, "arb");
  }
  emit_report(report, out_path);
}

void run_metrics(const std::string& config_path, const std::string& out_path) {
  const RunConfig cfg = load_run_config(config_path);
  cfg.require_device("metrics");
  const DeviceRecord& dev = cfg.device;

  json report = base_report("metrics");
  add_input(report, config_path);
  json& q = report["quantities"];

  q["q_o"] = quantity(quality_factor(dev.omega_o(), dev.kappa), "dimensionless");
  const double q_m = quality_factor(dev.omega_m, dev.gamma_m);
  q["q_m"] = quantity(q_m, "dimensionless");
  q["qf_product_hz"] = quantity(qf_product_hz(q_m, dev.omega_m), "Hz");
  q["sideband_resolution"] =
      quantity(sideband_resolution(dev.omega_m, dev.kappa), "dimensionless");

  if (cfg.has_pump) {
    PumpCondition pump = cfg.pump;
    if (pump.omega_laser.rad_s() == 0.0) {
      pump.omega_laser = dev.omega_o() + pump.detuning;
      report["notes"].push_back(
          "laser frequency derived from the device resonance and the detuning");
    }
    pump.validate();
    const double nc = intracavity_photons(dev, pump);
    q["nc"] = quantity(nc, "photons");
    if (cfg.device_g0.rad_s() > 0.0) {
      q["cooperativity"] =
          quantity(cooperativity(cfg.device_g0, nc, dev.kappa, dev.gamma_m),
                   "dimensionless");
      report["notes"].push_back(
          "cooperativity uses the device section's mechanical linewidth "
          "gamma_m_hz, i.e. the linewidth without backaction");
    }
  }
  if (cfg.device_m_eff_kg > 0.0) {
    q["x_zpf_m"] =
        quantity(zero_point_motion_m(cfg.device_m_eff_kg, dev.omega_m), "m");
  }
  if (cfg.has_spin) {
    q["spin_cooperativity"] =
        quantity(spin_mech_cooperativity(cfg.spin), "dimensionless");
    report["notes"].push_back(
        "spin cooperativity uses gamma_s_hz exactly as configured; published "
        "values depend on the chosen decoherence-rate convention");
  }
  emit_report(report, out_path);
}

double bragg_estimate(std::span<const Layer> cell) {
  double transit = 0.0;
  for (const Layer& layer : cell) transit += layer.length * layer.slowness;
  return constants::pi / transit;
}

void write_band_csv(const std::string& path, const std::vector<Layer>& cell,
                    const std::vector<Layer>& stack, double y_boundary, double lo,
                    double hi) {
  std::string out = "frequency_hz,cos_bloch_phase,transmission\n";
  constexpr int kSamples = 800;
  for (int i = 0; i < kSamples; ++i) {
    const double omega = lo + (hi - lo) * i / (kSamples - 1.0);
    out += fmt("%.12g", omega / kTwoPi);
    out += ',';
    out += fmt("%.12g", bloch_trace(cell, omega));
    out += ',';
    out += fmt("%.12g", transmission(stack, omega, y_boundary, y_boundary));
    out += '\n';
  }
  write_file(path, out);
}

void write_band_diagrams(const std::filesystem::path& out_dir,
                         const UnitCellGeometry& cell, const MaterialParams& mat,
                         int n_cells) {
  const std::vector<UnitCellGeometry> cells(static_cast<std::size_t>(n_cells), cell);

  const std::vector<Layer> opt_cell = optical_layers(cell, mat);
  const double wb_o = bragg_estimate(opt_cell);
  write_band_csv((out_dir / "optical_band.csv").string(), opt_cell,
                 optical_stack(cells, mat), optical_boundary_admittance(mat),
                 0.05 * wb_o, 2.2 * wb_o);

  const std::vector<Layer> ac_cell = acoustic_layers(cell, mat);
  const double wb_a = bragg_estimate(ac_cell);
  write_band_csv((out_dir / "acoustic_band.csv").string(), ac_cell,
                 acoustic_stack(cells, mat), acoustic_boundary_admittance(),
                 0.02 * wb_a, 2.4 * wb_a);
}

void write_grid_table(const std::string& path, const GridSearchResult& result) {
  std::string out =
      "a_nm,hx_nm,hy_nm,optical_lower_hz,optical_upper_hz,acoustic_lower_hz,"
      "acoustic_upper_hz,objective\n";
  for (const GridPoint& p : result.table) {
    out += fmt("%.12g", p.cell.a_nm) + "," + fmt("%.12g", p.cell.hx_nm) + "," +
           fmt("%.12g", p.cell.hy_nm) + ",";
    if (p.optical) {
      out += fmt("%.12g", p.optical->lower_edge.hz()) + "," +
             fmt("%.12g", p.optical->upper_edge.hz());
    } else {
      out += ",";
    }
    out += ",";
    if (p.acoustic) {
      out += fmt("%.12g", p.acoustic->lower_edge.hz()) + "," +
             fmt("%.12g", p.acoustic->upper_edge.hz());
    } else {
      out += ",";
    }
    out += "," + fmt("%.12g", p.objective) + "\n";
  }
  write_file(path, out);
}

json cell_json(const UnitCellGeometry& cell) {
  json c;
  c["a_nm"] = quantity(cell.a_nm, "nm");
  c["hx_nm"] = quantity(cell.hx_nm, "nm");
  c["hy_nm"] = quantity(cell.hy_nm, "nm");
  c["w_nm"] = quantity(cell.w_nm, "nm");
  c["t_nm"] = quantity(cell.t_nm, "nm");
  return c;
}

json gap_json(const BandGap& gap) {
  json g;
  g["lower_hz"] = quantity(gap.lower_edge.hz(), "Hz");
  g["upper_hz"] = quantity(gap.upper_edge.hz(), "Hz");
  g["fractional_width"] = quantity(gap.fractional_width(), "dimensionless");
  return g;
}

int thread_cap_from_env(int configured) {
  const char* env = std::getenv("OMC_THREADS");
  if (env == nullptr || *env == '\0') return configured;
  char* end = nullptr;
  const long cap = std::strtol(env, &end, 10);
  if (end == nullptr || *end != '\0' || cap < 1) {
    throw ValidationError(std::string("OMC_THREADS must be a positive integer, got '") +
                          env + "'");
  }
  return std::min(configured, static_cast<int>(cap));
}

void run_design(const std::string& config_path, const std::string& stage,
                const std::string& out_dir, const std::string& out_path) {
  const RunConfig cfg = load_run_config(config_path);
  const MaterialParams& mat = cfg.material;
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);

  json report = base_report("design");
  add_input(report, config_path);
  report["stage"] = stage;
  report["notes"].push_back(
      "geometry comes from a calibrated 1D layered surrogate; frequencies are "
      "comparable to full simulations only after calibration and dimensions are "
      "not fabrication-ready");
  json artifacts = json::object();

  UnitCellGeometry mirror = cfg.base_design.mirror_cell;
  std::optional<BandGap> optical_gap;
  std::optional<BandGap> acoustic_gap;

  if (stage == "grid" || stage == "both") {
    cfg.require_grid("design");
    const GridSearchResult result = grid_search_mirror(cfg.grid, mat);
    write_grid_table((dir / "grid_table.csv").string(), result);
    artifacts["grid_table"] = "grid_table.csv";
    mirror = result.best;
    optical_gap = result.best_optical;
    acoustic_gap = result.best_acoustic;
    json g;
    g["objective"] = quantity(result.best_objective, "dimensionless");
    g["points_evaluated"] =
        quantity(static_cast<double>(result.table.size()), "count");
    report["grid"] = std::move(g);
  }
  if (!optical_gap) {
    optical_gap = mirror_optical_gap(mirror, mat);
    acoustic_gap = mirror_acoustic_gap(mirror, mat);
  }
  report["cell"] = cell_json(mirror);
  report["optical_gap"] = gap_json(*optical_gap);
  report["acoustic_gap"] = gap_json(*acoustic_gap);

  write_band_diagrams(dir, mirror, mat, cfg.base_design.n_mirror);
  artifacts["optical_band"] = "optical_band.csv";
  artifacts["acoustic_band"] = "acoustic_band.csv";

  if (stage == "ga" || stage == "both") {
    const FitnessWindows windows =
        cfg.windows ? *cfg.windows
                    : FitnessWindows::from_gaps(*optical_gap, *acoustic_gap);
    json w;
    w["mu_o_hz"] = quantity(windows.mu_o.hz(), "Hz");
    w["delta_o_hz"] = quantity(windows.delta_o.hz(), "Hz");
    w["mu_m_hz"] = quantity(windows.mu_m.hz(), "Hz");
    w["delta_m_hz"] = quantity(windows.delta_m.hz(), "Hz");
    report["windows"] = std::move(w);

    DesignVector base = cfg.base_design;
    base.mirror_cell = mirror;

    // reference point: the same structure with a plain linear taper
    DesignVector untapered = base;
    untapered.taper_exponents = {};
    double baseline = 0.0;
    try {
      baseline = fitness(cavity_response(untapered, mat), windows);
    } catch (const Error& e) {
      report["notes"].push_back(std::string("baseline taper evaluation failed: ") +
                                e.what());
    }

    GaConfig ga_cfg = cfg.ga;
    ga_cfg.parallel_evaluations = thread_cap_from_env(ga_cfg.parallel_evaluations);

    const std::string trace_path = (dir / "ga_trace.jsonl").string();
    artifacts["ga_trace"] = "ga_trace.jsonl";
    json g;
    try {
      const DesignGaResult result = ga_optimize(ga_cfg, base, cfg.bounds, windows, mat);
      write_file(trace_path, result.trace.to_json_lines());
      if (result.best_evaluation.fitness <= 0.0) {
        std::string why = "search ended with no scoring design";
        if (!result.best_evaluation.note.empty()) {
          why += "; last failure: " + result.best_evaluation.note;
        }
        throw InfeasibleError(why);
      }
      g["defect_scale"] = quantity(result.best.defect_scale, "dimensionless");
      g["exp_a"] = quantity(result.best.taper_exponents.a, "dimensionless");
      g["exp_hx"] = quantity(result.best.taper_exponents.hx, "dimensionless");
      g["exp_hy"] = quantity(result.best.taper_exponents.hy, "dimensionless");
      g["fitness"] = quantity(result.best_evaluation.fitness, "Hz");
      g["baseline_fitness"] = quantity(baseline, "Hz");
      g["f_o_hz"] = quantity(result.best_evaluation.omega_o_hz, "Hz");
      g["q_o"] = quantity(result.best_evaluation.q_o, "dimensionless");
      g["f_m_hz"] = quantity(result.best_evaluation.omega_m_hz, "Hz");
      g["g0_hz"] = quantity(result.best_evaluation.g0_hz, "Hz");
      g["rng_seed"] = quantity(static_cast<double>(ga_cfg.rng_seed), "count");
      g["evaluations"] =
          quantity(static_cast<double>(result.trace.evaluations.size()), "count");
    } catch (const GaInfeasibleError& e) {
      // keep the evidence on disk before the nonzero exit
      write_file(trace_path, e.trace.to_json_lines());
      throw;
    }
    report["ga"] = std::move(g);
  }
  report["artifacts"] = std::move(artifacts);
  emit_report(report, out_path);
}

std::vector<double> parse_photon_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string token = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      std::size_t used = 0;
      const double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      values.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError("bad photon number '" + token + "' in list");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

// forward-model corpus generator; numbers are written with 17 significant
// digits so noiseless fits can recover them to full double precision
struct SynthArgs {
  std::string kind;
  std::string out;
  double noise = 0.0;
  std::uint64_t seed = 1;
  double y0 = 1.0;
  double a0_scale = 0.35;
  double fano_q = 0.3;
  double kappa_hz = 5.03e9;
  double lambda_nm = 1576.87;
  double fm_hz = 6.23e9;
  double gamma_hz = 3280.0;
  double amp = 0.0;     // 0 picks the per-kind default
  double offset = 0.05;
  double span = 0.0;    // 0 picks the per-kind default
  std::size_t n = 0;    // 0 picks the per-kind default
  double g0_hz = 216e3;
  double gamma_i_hz = 28e3;
  std::string nc_list = "500,1000,2000,5000,10000,20000,41000";
  bool red_only = false;
  double t2_s = 227e-6;
  double stretch = 1.44;
  double baseline = 0.5;
  double t_max = 0.0;   // 0 picks the per-kind default
  double pl0 = 1.0;
  double contrast = 0.312;
  double rabi_hz = 5e6;
  double decay = 2e5;
};

void write_xy_csv(const std::string& path, const char* header,
                  const std::vector<std::pair<double, double>>& rows) {
  std::string out = header;
  out += '\n';
  for (const auto& [x, y] : rows) {
    out += fmt("%.17g", x) + "," + fmt("%.17g", y) + "\n";
  }
  write_file(path, out);
}

void run_synth(const SynthArgs& a) {
  const synth::NoiseSpec noise{a.noise, a.seed};
  if (a.kind == "fano") {
    const AngularFrequency kappa = AngularFrequency::from_hz(a.kappa_hz);
    const AngularFrequency omega_o = wavelength_nm_to_angular(a.lambda_nm);
    const Spectrum s =
        synth::fano_scan(a.y0, a.a0_scale * kappa.rad_s(), a.fano_q, kappa, omega_o,
                         a.span > 0.0 ? a.span : 12.0, a.n > 0 ? a.n : 1201, noise);
    std::vector<std::pair<double, double>> rows(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      // wavelength ascending, so reverse the frequency-ascending scan
      const std::size_t j = s.size() - 1 - i;
      rows[i] = {angular_to_wavelength_nm(AngularFrequency::from_rad_s(s.x[j])),
                 s.y[j]};
    }
    write_xy_csv(a.out, "wavelength_nm,reflection", rows);
  } else if (a.kind == "psd") {
    const Spectrum s = synth::lorentzian_psd(
        AngularFrequency::from_hz(a.fm_hz), AngularFrequency::from_hz(a.gamma_hz),
        a.amp > 0.0 ? a.amp : 1.0, a.offset, a.span > 0.0 ? a.span : 40.0,
        a.n > 0 ? a.n : 1601, noise);
    std::vector<std::pair<double, double>> rows(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      rows[i] = {s.x[i] / kTwoPi, s.y[i]};
    }
    write_xy_csv(a.out, "frequency_hz,psd", rows);
  } else if (a.kind == "backaction") {
    const std::vector<BackactionPoint> points = synth::backaction_series(
        AngularFrequency::from_hz(a.g0_hz), AngularFrequency::from_hz(a.kappa_hz),
        AngularFrequency::from_hz(a.fm_hz), AngularFrequency::from_hz(a.gamma_i_hz),
        parse_photon_list(a.nc_list), !a.red_only, noise);
    std::string out = "nc,gamma_m_hz,side\n";
    for (const BackactionPoint& p : points) {
      out += fmt("%.17g", p.nc) + "," + fmt("%.17g", p.gamma_m.hz()) + "," +
             (p.side == SidebandChoice::Red ? "red" : "blue") + "\n";
    }
    write_file(a.out, out);
  } else if (a.kind == "echo") {
    const Spectrum s = synth::stretched_decay(
        a.amp > 0.0 ? a.amp : 0.45, a.t2_s, a.stretch, a.baseline,
        a.t_max > 0.0 ? a.t_max : 1e-3, a.n > 0 ? a.n : 160, noise);
    std::vector<std::pair<double, double>> rows(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) rows[i] = {s.x[i], s.y[i]};
    write_xy_csv(a.out, "time_s,signal", rows);
  } else if (a.kind == "rabi") {
    const Spectrum s = synth::rabi_trace(
        a.pl0, a.contrast, AngularFrequency::from_hz(a.rabi_hz), a.decay,
        a.t_max > 0.0 ? a.t_max : 1e-6, a.n > 0 ? a.n : 301, noise);
    std::vector<std::pair<double, double>> rows(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) rows[i] = {s.x[i], s.y[i]};
    write_xy_csv(a.out, "time_s,signal", rows);
  } else {
    throw ValidationError("unknown synth kind '" + a.kind +
                          "'; expected fano, psd, backaction, echo, or rabi");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optomechanical crystal characterization and design tools"};
  app.require_subcommand(1);

  std::string csv_path, config_path, out_path, out_dir = ".", kind, stage = "both";
  bool dip_contrast = false;
  double nc_eval = 0.0;

  auto* fit_optical =
      app.add_subcommand("fit-optical", "Fit a reflection scan to a fano lineshape");
  fit_optical->add_option("csv", csv_path, "wavelength_nm,reflection file")
      ->required();
  fit_optical->add_flag("--dip-contrast", dip_contrast,
                        "also estimate kappa_e from the fitted dip contrast");
  fit_optical->add_option("--out", out_path, "write the report here (default stdout)");
  fit_optical->callback([&] { run_fit_optical(csv_path, dip_contrast, out_path); });

  auto* fit_mech = app.add_subcommand(
      "fit-mechanical", "Fit a thermomechanical spectrum to a lorentzian");
  fit_mech->add_option("csv", csv_path, "frequency_hz,psd file")->required();
  fit_mech->add_option("--out", out_path, "write the report here (default stdout)");
  fit_mech->callback([&] { run_fit_mechanical(csv_path, out_path); });

  auto* backaction = app.add_subcommand(
      "backaction", "Fit linewidth versus photon number for g0 and gamma_i");
  backaction->add_option("csv", csv_path, "nc,gamma_m_hz,side file")->required();
  backaction->add_option("--config", config_path, "run configuration with the device")
      ->required();
  backaction->add_option("--nc", nc_eval,
                         "also report the cooperativity at this photon number");
  backaction->add_option("--out", out_path, "write the report here (default stdout)");
  backaction->callback([&] { run_backaction(csv_path, config_path, nc_eval, out_path); });

  auto* spin = app.add_subcommand("spin", "Fit a spin time trace");
  spin->add_option("csv", csv_path, "time_s,signal file")->required();
  spin->add_option("--kind", kind, "rabi or echo")->required();
  spin->add_option("--out", out_path, "write the report here (default stdout)");
  spin->callback([&] { run_spin(csv_path, kind, out_path); });

  auto* metrics = app.add_subcommand(
      "metrics", "Derived figures of merit for a configured device");
  metrics->add_option("--config", config_path, "run configuration")->required();
  metrics->add_option("--out", out_path, "write the report here (default stdout)");
  metrics->callback([&] { run_metrics(config_path, out_path); });

  auto* design =
      app.add_subcommand("design", "Mirror-cell grid search and taper optimization");
  design->add_option("--config", config_path, "run configuration")->required();
  design->add_option("--stage", stage, "grid, ga, or both")
      ->check(CLI::IsMember({"grid", "ga", "both"}));
  design->add_option("--out-dir", out_dir, "directory for trace and band files");
  design->add_option("--out", out_path, "write the report here (default stdout)");
  design->callback([&] { run_design(config_path, stage, out_dir, out_path); });

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate forward-model test data");
  synth_cmd->group("");
  synth_cmd->add_option("--kind", synth_args.kind)->required();
  synth_cmd->add_option("--out", synth_args.out)->required();
  synth_cmd->add_option("--noise", synth_args.noise);
  synth_cmd->add_option("--seed", synth_args.seed);
  synth_cmd->add_option("--y0", synth_args.y0);
  synth_cmd->add_option("--a0-scale", synth_args.a0_scale);
  synth_cmd->add_option("--fano-q", synth_args.fano_q);
  synth_cmd->add_option("--kappa-hz", synth_args.kappa_hz);
  synth_cmd->add_option("--lambda-nm", synth_args.lambda_nm);
  synth_cmd->add_option("--fm-hz", synth_args.fm_hz);
  synth_cmd->add_option("--gamma-hz", synth_args.gamma_hz);
  synth_cmd->add_option("--amp", synth_args.amp);
  synth_cmd->add_option("--offset", synth_args.offset);
  synth_cmd->add_option("--span", synth_args.span);
  synth_cmd->add_option("--n", synth_args.n);
  synth_cmd->add_option("--g0-hz", synth_args.g0_hz);
  synth_cmd->add_option("--gamma-i-hz", synth_args.gamma_i_hz);
  synth_cmd->add_option("--nc-list", synth_args.nc_list);
  synth_cmd->add_flag("--red-only", synth_args.red_only);
  synth_cmd->add_option("--t2-s", synth_args.t2_s);
  synth_cmd->add_option("--stretch", synth_args.stretch);
  synth_cmd->add_option("--baseline", synth_args.baseline);
  synth_cmd->add_option("--t-max", synth_args.t_max);
  synth_cmd->add_option("--pl0", synth_args.pl0);
  synth_cmd->add_option("--contrast", synth_args.contrast);
  synth_cmd->add_option("--rabi-hz", synth_args.rabi_hz);
  synth_cmd->add_option("--decay", synth_args.decay);
  synth_cmd->callback([&] { run_synth(synth_args); });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const FitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NoBandgapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const NoDefectModeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
