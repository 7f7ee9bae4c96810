#include "omc/geometry.hpp"

#include <cmath>
#include <string>

#include "omc/errors.hpp"

namespace omc {

namespace {

void require_finite_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw ValidationError(std::string(name) + " must be finite and positive");
  }
}

}  // namespace

void UnitCellGeometry::validate() const {
  require_finite_positive(a_nm, "lattice constant");
  require_finite_positive(w_nm, "beam width");
  require_finite_positive(hx_nm, "hole length");
  require_finite_positive(hy_nm, "hole width");
  require_finite_positive(t_nm, "thickness");
  if (hx_nm >= a_nm) {
    throw ValidationError("hole length must be smaller than the lattice constant");
  }
  if (hy_nm >= w_nm) {
    throw ValidationError("hole width must be smaller than the beam width");
  }
}

UnitCellGeometry reference_mirror_cell() { return {650.0, 800.0, 343.0, 617.0, 250.0}; }

void MaterialParams::validate() const {
  require_finite_positive(refractive_index, "refractive index");
  require_finite_positive(effective_slab_index, "effective slab index");
  require_finite_positive(density, "density");
  require_finite_positive(longitudinal_sound_speed, "sound speed");
  if (effective_slab_index > refractive_index) {
    throw ValidationError("effective slab index cannot exceed the bulk refractive index");
  }
}

MaterialParams MaterialParams::calibrated_diamond() {
  MaterialParams mat;
  mat.effective_slab_index = 1.337;
  mat.longitudinal_sound_speed = 10660.0;
  return mat;
}

void DesignVector::validate() const {
  mirror_cell.validate();
  if (n_mirror < 1) throw ValidationError("need at least one mirror cell per side");
  if (n_taper < 0) throw ValidationError("taper cell count cannot be negative");
  if (!std::isfinite(defect_scale) || defect_scale <= 0.0 || defect_scale > 1.0) {
    throw ValidationError("defect scale must lie in (0, 1]");
  }
  for (double e : {taper_exponents.a, taper_exponents.hx, taper_exponents.hy}) {
    if (!std::isfinite(e) || e <= 0.0) {
      throw ValidationError("taper exponents must be finite and positive");
    }
  }
  for (int j = 1; j <= n_taper; ++j) taper_cell(j).validate();
}

UnitCellGeometry DesignVector::taper_cell(int j) const {
  const double u = static_cast<double>(j) / static_cast<double>(n_taper);
  auto blend = [&](double mirror_value, double exponent) {
    const double defect_value = mirror_value * defect_scale;
    return mirror_value + (defect_value - mirror_value) * std::pow(u, exponent);
  };
  UnitCellGeometry cell = mirror_cell;
  cell.a_nm = blend(mirror_cell.a_nm, taper_exponents.a);
  cell.hx_nm = blend(mirror_cell.hx_nm, taper_exponents.hx);
  cell.hy_nm = blend(mirror_cell.hy_nm, taper_exponents.hy);
  return cell;
}

std::vector<UnitCellGeometry> DesignVector::cells() const {
  validate();
  std::vector<UnitCellGeometry> out;
  out.reserve(static_cast<std::size_t>(2 * (n_mirror + n_taper)));
  for (int i = 0; i < n_mirror; ++i) out.push_back(mirror_cell);
  for (int j = 1; j <= n_taper; ++j) out.push_back(taper_cell(j));
  for (int j = n_taper; j >= 1; --j) out.push_back(taper_cell(j));
  for (int i = 0; i < n_mirror; ++i) out.push_back(mirror_cell);
  return out;
}

}  // namespace omc
