#pragma once

#include <optional>
#include <string>

#include "omc/device.hpp"
#include "omc/fitness.hpp"
#include "omc/genetic.hpp"
#include "omc/geometry.hpp"
#include "omc/grid_search.hpp"

namespace omc {

// One JSON run configuration.  Ordinary frequencies in the file use the _hz
// suffix and are converted to angular here; sections a command does not need
// may be absent.
struct RunConfig {
  MaterialParams material;
  bool has_material = false;

  DeviceRecord device;
  bool has_device = false;
  AngularFrequency device_g0;  // optional published coupling for metrics
  double device_m_eff_kg = 0.0;

  PumpCondition pump;
  bool has_pump = false;

  GridSpec grid;
  bool has_grid = false;

  GaConfig ga;

  std::optional<FitnessWindows> windows;

  SpinMechanicalInputs spin;
  bool has_spin = false;

  DesignVector base_design;  // mirror cell, counts, taper defaults
  DesignBounds bounds;

  // throws when the named section was not in the file
  void require_device(const std::string& command) const;
  void require_pump(const std::string& command) const;
  void require_grid(const std::string& command) const;
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& text, const std::string& origin);

}  // namespace omc
