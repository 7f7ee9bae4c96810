#pragma once

#include <optional>
#include <vector>

#include "omc/band_structure.hpp"
#include "omc/geometry.hpp"

namespace omc {

// Inclusive sweep of one geometry parameter, in nanometers.
struct GridAxis {
  double min_nm = 0.0;
  double max_nm = 0.0;
  int steps = 1;

  std::vector<double> values() const;
};

// Mirror-cell sweep over (a, hx, hy) with the beam cross-section held fixed.
struct GridSpec {
  GridAxis a;
  GridAxis hx;
  GridAxis hy;
  double w_nm = 800.0;
  double t_nm = 250.0;

  void validate() const;
  static GridSpec around(const UnitCellGeometry& cell, double rel_span, int steps);
};

struct GridPoint {
  UnitCellGeometry cell;
  std::optional<BandGap> optical;
  std::optional<BandGap> acoustic;
  double objective = 0.0;  // product of fractional gap widths, 0 unless both open
};

struct GridSearchResult {
  UnitCellGeometry best;
  BandGap best_optical;
  BandGap best_acoustic;
  double best_objective = 0.0;
  std::vector<GridPoint> table;  // enumeration order: a, then hx, then hy ascending
};

// Evaluates both mirror bandgaps at every grid point and returns the cell
// maximizing the product of fractional widths, ties broken toward the
// lexicographically smallest (a, hx, hy).  The full table is always part of
// the result so other scalarizations can be applied offline.
GridSearchResult grid_search_mirror(const GridSpec& grid, const MaterialParams& mat,
                                    int resolution = 1600);

}  // namespace omc
