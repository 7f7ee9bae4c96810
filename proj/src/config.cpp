#include "omc/config.hpp"

#include <initializer_list>

#include <json.hpp>

#include "omc/errors.hpp"
#include "omc/report.hpp"

namespace omc {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& section,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* name : allowed) {
      if (key == name) known = true;
    }
    if (!known) {
      throw ValidationError("unknown key '" + key + "' in " + section);
    }
  }
}

const json& section(const json& root, const char* name) { return root.at(name); }

double number_at(const json& obj, const std::string& section_name, const char* key) {
  if (!obj.contains(key)) {
    throw ValidationError("section '" + section_name + "' is missing '" + key + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ValidationError("section '" + section_name + "': '" + key +
                          "' must be a number");
  }
  return v.get<double>();
}

double number_or(const json& obj, const std::string& section_name, const char* key,
                 double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ValidationError("section '" + section_name + "': '" + key +
                          "' must be a number");
  }
  return v.get<double>();
}

int int_or(const json& obj, const std::string& section_name, const char* key,
           int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ValidationError("section '" + section_name + "': '" + key +
                          "' must be an integer");
  }
  return v.get<int>();
}

void parse_material(const json& m, MaterialParams& out) {
  reject_unknown(m, "section 'material'",
                 {"slab_index", "sound_speed", "density", "refractive_index"});
  out.effective_slab_index = number_or(m, "material", "slab_index", out.effective_slab_index);
  out.longitudinal_sound_speed =
      number_or(m, "material", "sound_speed", out.longitudinal_sound_speed);
  out.density = number_or(m, "material", "density", out.density);
  out.refractive_index = number_or(m, "material", "refractive_index", out.refractive_index);
  out.validate();
}

void parse_device(const json& d, RunConfig& cfg) {
  reject_unknown(d, "section 'device'",
                 {"label", "lambda_o_nm", "kappa_hz", "kappa_e_hz", "omega_m_hz",
                  "gamma_m_hz", "g0_hz", "m_eff_kg"});
  DeviceRecord& dev = cfg.device;
  if (d.contains("label")) {
    if (!d.at("label").is_string()) {
      throw ValidationError("device.label must be a string");
    }
    dev.label = d.at("label").get<std::string>();
  }
  dev.lambda_o_nm = number_at(d, "device", "lambda_o_nm");
  dev.kappa = AngularFrequency::from_hz(number_at(d, "device", "kappa_hz"));
  dev.kappa_e =
      AngularFrequency::from_hz(number_at(d, "device", "kappa_e_hz"));
  dev.omega_m =
      AngularFrequency::from_hz(number_at(d, "device", "omega_m_hz"));
  dev.gamma_m =
      AngularFrequency::from_hz(number_at(d, "device", "gamma_m_hz"));
  cfg.device_g0 = AngularFrequency::from_hz(number_or(d, "device", "g0_hz", 0.0));
  cfg.device_m_eff_kg = number_or(d, "device", "m_eff_kg", 0.0);
  dev.validate();
}

void parse_pump(const json& p, PumpCondition& pump) {
  reject_unknown(p, "section 'pump'",
                 {"input_power_w", "fiber_efficiency", "detuning_hz", "laser_hz"});
  pump.input_power = Power::from_watts(number_at(p, "pump", "input_power_w"));
  pump.fiber_efficiency = number_or(p, "pump", "fiber_efficiency", 1.0);
  pump.detuning =
      AngularFrequency::from_hz(number_at(p, "pump", "detuning_hz"));
  pump.omega_laser = AngularFrequency::from_hz(number_or(p, "pump", "laser_hz", 0.0));
}

GridAxis parse_axis(const json& g, const char* prefix) {
  GridAxis axis;
  const std::string base(prefix);
  axis.min_nm = number_at(g, "grid", (base + "_min_nm").c_str());
  axis.max_nm = number_at(g, "grid", (base + "_max_nm").c_str());
  axis.steps = int_or(g, "grid", (base + "_steps").c_str(), 1);
  return axis;
}

void parse_grid(const json& g, GridSpec& grid) {
  reject_unknown(g, "section 'grid'",
                 {"a_min_nm", "a_max_nm", "a_steps", "hx_min_nm", "hx_max_nm",
                  "hx_steps", "hy_min_nm", "hy_max_nm", "hy_steps", "w_nm", "t_nm"});
  grid.a = parse_axis(g, "a");
  grid.hx = parse_axis(g, "hx");
  grid.hy = parse_axis(g, "hy");
  grid.w_nm = number_or(g, "grid", "w_nm", grid.w_nm);
  grid.t_nm = number_or(g, "grid", "t_nm", grid.t_nm);
  grid.validate();
}

void parse_ga(const json& g, GaConfig& ga) {
  reject_unknown(g, "section 'ga'",
                 {"population_size", "generations", "crossover_fraction",
                  "mutation_rate", "mutation_scale", "elitism_count", "rng_seed",
                  "parallel_evaluations"});
  ga.population_size = int_or(g, "ga", "population_size", ga.population_size);
  ga.generations = int_or(g, "ga", "generations", ga.generations);
  ga.crossover_fraction = number_or(g, "ga", "crossover_fraction", ga.crossover_fraction);
  ga.mutation_rate = number_or(g, "ga", "mutation_rate", ga.mutation_rate);
  ga.mutation_scale = number_or(g, "ga", "mutation_scale", ga.mutation_scale);
  ga.elitism_count = int_or(g, "ga", "elitism_count", ga.elitism_count);
  if (g.contains("rng_seed")) {
    if (!g.at("rng_seed").is_number_integer() && !g.at("rng_seed").is_number_unsigned()) {
      throw ValidationError("ga.rng_seed must be an integer");
    }
    ga.rng_seed = g.at("rng_seed").get<std::uint64_t>();
  }
  ga.parallel_evaluations =
      int_or(g, "ga", "parallel_evaluations", ga.parallel_evaluations);
  ga.validate();
}

FitnessWindows parse_windows(const json& w) {
  reject_unknown(w, "section 'windows'",
                 {"mu_o_hz", "delta_o_hz", "mu_m_hz", "delta_m_hz"});
  FitnessWindows win;
  win.mu_o = AngularFrequency::from_hz(number_at(w, "windows", "mu_o_hz"));
  win.delta_o =
      AngularFrequency::from_hz(number_at(w, "windows", "delta_o_hz"));
  win.mu_m = AngularFrequency::from_hz(number_at(w, "windows", "mu_m_hz"));
  win.delta_m =
      AngularFrequency::from_hz(number_at(w, "windows", "delta_m_hz"));
  win.validate();
  return win;
}

void parse_spin(const json& s, SpinMechanicalInputs& spin, const RunConfig& cfg) {
  reject_unknown(s, "section 'spin'", {"g_sm_hz", "gamma_s_hz"});
  spin.g_sm = AngularFrequency::from_hz(number_at(s, "spin", "g_sm_hz"));
  spin.gamma_s =
      AngularFrequency::from_hz(number_at(s, "spin", "gamma_s_hz"));
  if (cfg.has_device) {
    spin.gamma_m = cfg.device.gamma_m;
  }
}

void parse_design(const json& d, RunConfig& cfg) {
  reject_unknown(d, "section 'design'",
                 {"n_mirror", "n_taper", "defect_scale", "mirror_a_nm", "mirror_hx_nm",
                  "mirror_hy_nm", "mirror_w_nm", "mirror_t_nm", "defect_scale_min",
                  "defect_scale_max", "exp_min", "exp_max"});
  DesignVector& base = cfg.base_design;
  base.n_mirror = int_or(d, "design", "n_mirror", base.n_mirror);
  base.n_taper = int_or(d, "design", "n_taper", base.n_taper);
  base.defect_scale = number_or(d, "design", "defect_scale", base.defect_scale);
  base.mirror_cell.a_nm = number_or(d, "design", "mirror_a_nm", base.mirror_cell.a_nm);
  base.mirror_cell.hx_nm = number_or(d, "design", "mirror_hx_nm", base.mirror_cell.hx_nm);
  base.mirror_cell.hy_nm = number_or(d, "design", "mirror_hy_nm", base.mirror_cell.hy_nm);
  base.mirror_cell.w_nm = number_or(d, "design", "mirror_w_nm", base.mirror_cell.w_nm);
  base.mirror_cell.t_nm = number_or(d, "design", "mirror_t_nm", base.mirror_cell.t_nm);
  base.validate();

  DesignBounds& bounds = cfg.bounds;
  bounds.defect_scale.lo =
      number_or(d, "design", "defect_scale_min", bounds.defect_scale.lo);
  bounds.defect_scale.hi =
      number_or(d, "design", "defect_scale_max", bounds.defect_scale.hi);
  const double exp_lo = number_or(d, "design", "exp_min", bounds.exp_a.lo);
  const double exp_hi = number_or(d, "design", "exp_max", bounds.exp_a.hi);
  bounds.exp_a = {exp_lo, exp_hi};
  bounds.exp_hx = {exp_lo, exp_hi};
  bounds.exp_hy = {exp_lo, exp_hi};
  bounds.validate();
}

}  // namespace

void RunConfig::require_device(const std::string& command) const {
  if (!has_device) {
    throw ValidationError(command + " needs a 'device' section in the config");
  }
}

void RunConfig::require_pump(const std::string& command) const {
  if (!has_pump) {
    throw ValidationError(command + " needs a 'pump' section in the config");
  }
}

void RunConfig::require_grid(const std::string& command) const {
  if (!has_grid) {
    throw ValidationError(command + " needs a 'grid' section in the config");
  }
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  json root = json::parse(text, nullptr, false);
  if (root.is_discarded()) {
    throw ValidationError("'" + origin + "' is not valid JSON");
  }
  if (!root.is_object()) {
    throw ValidationError("'" + origin + "' must hold a JSON object");
  }
  reject_unknown(root, "config root",
                 {"material", "device", "pump", "grid", "ga", "windows", "design",
                  "spin"});

  RunConfig cfg;
  cfg.base_design.mirror_cell = reference_mirror_cell();
  if (root.contains("material")) {
    parse_material(section(root, "material"), cfg.material);
    cfg.has_material = true;
  }
  if (root.contains("device")) {
    parse_device(section(root, "device"), cfg);
    cfg.has_device = true;
  }
  if (root.contains("pump")) {
    parse_pump(section(root, "pump"), cfg.pump);
    cfg.has_pump = true;
  }
  if (root.contains("grid")) {
    parse_grid(section(root, "grid"), cfg.grid);
    cfg.has_grid = true;
  }
  if (root.contains("ga")) {
    parse_ga(section(root, "ga"), cfg.ga);
  }
  if (root.contains("windows")) {
    cfg.windows = parse_windows(section(root, "windows"));
  }
  if (root.contains("design")) {
    parse_design(section(root, "design"), cfg);
  }
  if (root.contains("spin")) {
    parse_spin(section(root, "spin"), cfg.spin, cfg);
    cfg.has_spin = true;
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(read_file(path), path);
}

}  // namespace omc
