#pragma once

#include <string>
#include <vector>

#include "omc/fits.hpp"

namespace omc {

enum class SpectrumSchema { OpticalScan, MechanicalPsd, TimeTrace };

// One parsed measurement file.  x holds the first column in its file units
// (wavelength_nm, frequency_hz, or time_s depending on schema).
struct SpectrumTable {
  SpectrumSchema schema = SpectrumSchema::OpticalScan;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> sigma;  // empty when the file has no sigma column
};

// Header-driven load: the first row must name one of the recognized column
// sets (case-insensitive), optionally followed by "sigma".  Values must be
// finite and at least 8 data rows are required.
SpectrumTable load_spectrum_csv(const std::string& path);

// Same, but additionally requires the schema the caller expects.
SpectrumTable load_spectrum_csv(const std::string& path, SpectrumSchema expected);

// Linewidth-versus-photon-number table with header (nc, gamma_m_hz, side);
// side is "red" or "blue".  Needs at least 2 data rows.
std::vector<BackactionPoint> load_backaction_csv(const std::string& path);

std::string schema_name(SpectrumSchema schema);

}  // namespace omc
