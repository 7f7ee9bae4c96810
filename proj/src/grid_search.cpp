#include "omc/grid_search.hpp"

#include <cmath>
#include <sstream>

#include "omc/cavity_solver.hpp"
#include "omc/errors.hpp"

namespace omc {

std::vector<double> GridAxis::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    out.push_back(min_nm);
    return out;
  }
  const double span = max_nm - min_nm;
  for (int i = 0; i < steps; ++i) {
    out.push_back(min_nm + span * static_cast<double>(i) / static_cast<double>(steps - 1));
  }
  return out;
}

void GridSpec::validate() const {
  for (const auto* axis : {&a, &hx, &hy}) {
    if (axis->steps < 1) {
      throw ValidationError("grid axis needs at least one step");
    }
    if (axis->steps == 1) {
      if (axis->max_nm != axis->min_nm) {
        throw ValidationError("a single-step grid axis must have min == max");
      }
    } else if (!(axis->max_nm > axis->min_nm)) {
      throw ValidationError("grid axis range must be increasing");
    }
  }
  // the binding corners: smallest lattice with the largest hole, and the
  // all-minimum cell for positivity
  UnitCellGeometry tight{a.min_nm, w_nm, hx.max_nm, hy.max_nm, t_nm};
  tight.validate();
  UnitCellGeometry small{a.min_nm, w_nm, hx.min_nm, hy.min_nm, t_nm};
  small.validate();
}

GridSpec GridSpec::around(const UnitCellGeometry& cell, double rel_span, int steps) {
  if (!(rel_span > 0.0) || rel_span >= 1.0) {
    throw ValidationError("grid span must be a relative fraction in (0, 1)");
  }
  GridSpec grid;
  grid.a = {cell.a_nm * (1.0 - rel_span), cell.a_nm * (1.0 + rel_span), steps};
  grid.hx = {cell.hx_nm * (1.0 - rel_span), cell.hx_nm * (1.0 + rel_span), steps};
  grid.hy = {cell.hy_nm * (1.0 - rel_span), cell.hy_nm * (1.0 + rel_span), steps};
  grid.w_nm = cell.w_nm;
  grid.t_nm = cell.t_nm;
  grid.validate();
  return grid;
}

GridSearchResult grid_search_mirror(const GridSpec& grid, const MaterialParams& mat,
                                    int resolution) {
  grid.validate();
  mat.validate();

  GridSearchResult result;
  const auto as = grid.a.values();
  const auto hxs = grid.hx.values();
  const auto hys = grid.hy.values();
  result.table.reserve(as.size() * hxs.size() * hys.size());

  const GridPoint* best = nullptr;
  for (const double a : as) {
    for (const double hx : hxs) {
      for (const double hy : hys) {
        GridPoint pt;
        pt.cell = {a, grid.w_nm, hx, hy, grid.t_nm};
        try {
          pt.optical = mirror_optical_gap(pt.cell, mat, resolution);
        } catch (const NoBandgapError&) {
        }
        try {
          pt.acoustic = mirror_acoustic_gap(pt.cell, mat, resolution);
        } catch (const NoBandgapError&) {
        }
        if (pt.optical && pt.acoustic) {
          pt.objective = pt.optical->fractional_width() * pt.acoustic->fractional_width();
        }
        result.table.push_back(pt);
      }
    }
  }

  for (const GridPoint& pt : result.table) {
    if (pt.optical && pt.acoustic && (!best || pt.objective > best->objective)) {
      best = &pt;
    }
  }

  if (!best) {
    std::ostringstream msg;
    msg << "no grid point opens both bandgaps";
    const GridPoint* best_opt = nullptr;
    const GridPoint* best_ac = nullptr;
    for (const GridPoint& pt : result.table) {
      if (pt.optical && (!best_opt || pt.optical->fractional_width() >
                                          best_opt->optical->fractional_width())) {
        best_opt = &pt;
      }
      if (pt.acoustic && (!best_ac || pt.acoustic->fractional_width() >
                                          best_ac->acoustic->fractional_width())) {
        best_ac = &pt;
      }
    }
    if (best_opt) {
      msg << "; widest optical gap " << best_opt->optical->fractional_width()
          << " at a=" << best_opt->cell.a_nm << " hx=" << best_opt->cell.hx_nm
          << " hy=" << best_opt->cell.hy_nm << " nm";
    } else {
      msg << "; no optical gap anywhere on the grid";
    }
    if (best_ac) {
      msg << "; widest acoustic gap " << best_ac->acoustic->fractional_width()
          << " at a=" << best_ac->cell.a_nm << " hx=" << best_ac->cell.hx_nm
          << " hy=" << best_ac->cell.hy_nm << " nm";
    } else {
      msg << "; no acoustic gap anywhere on the grid";
    }
    throw InfeasibleError(msg.str());
  }

  result.best = best->cell;
  result.best_optical = *best->optical;
  result.best_acoustic = *best->acoustic;
  result.best_objective = best->objective;
  return result;
}

}  // namespace omc
