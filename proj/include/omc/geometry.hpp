#pragma once

#include <vector>

#include "omc/quantities.hpp"

namespace omc {

// Patterned nanobeam unit cell, all lengths in nanometers.
struct UnitCellGeometry {
  double a_nm = 0.0;   // lattice constant
  double w_nm = 0.0;   // beam width
  double hx_nm = 0.0;  // hole length along the beam
  double hy_nm = 0.0;  // hole width across the beam
  double t_nm = 0.0;   // beam thickness

  void validate() const;

  // solid cross-section area of the hole segment over the full beam area
  double hole_area_fraction() const { return 1.0 - hy_nm / w_nm; }
};

UnitCellGeometry reference_mirror_cell();

struct MaterialParams {
  double refractive_index = 2.4;         // bulk, telecom band
  double effective_slab_index = 2.0;     // 1D surrogate slab index
  double density = 3515.0;               // kg/m^3
  double longitudinal_sound_speed = 17500.0;  // m/s

  void validate() const;

  // Preset whose slab index and sound speed were tuned so the reference
  // mirror cell's optical gap brackets 192 THz and the reference design's
  // mechanical mode lands near 6 GHz.  The surrogate stays 1D either way;
  // frequencies it produces are calibrated, not predictive.
  static MaterialParams calibrated_diamond();
};

// Shape exponents of the mirror-to-defect power-law interpolation.
struct TaperExponents {
  double a = 1.0;
  double hx = 1.0;
  double hy = 1.0;
};

// Full cavity: n_mirror mirror cells, then n_taper cells interpolating
// toward the defect geometry, mirrored about the center.  The defect
// endpoint scales (a, hx, hy) uniformly by defect_scale, which keeps every
// interpolated cell inside the unit-cell invariants.
struct DesignVector {
  UnitCellGeometry mirror_cell;
  int n_mirror = 8;
  int n_taper = 6;
  double defect_scale = 0.85;
  TaperExponents taper_exponents;

  void validate() const;

  // cell geometry at taper index j = 1..n_taper (j = n_taper is the defect)
  UnitCellGeometry taper_cell(int j) const;

  // left-to-right cell sequence of the whole structure
  std::vector<UnitCellGeometry> cells() const;
};

}  // namespace omc
