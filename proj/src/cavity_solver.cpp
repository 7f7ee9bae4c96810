#include "omc/cavity_solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "omc/cavity_metrics.hpp"
#include "omc/errors.hpp"

namespace omc {

namespace {

using Complex = std::complex<double>;

// Bragg estimate of the first gap center, used only to size search ranges.
double bragg_frequency(std::span<const Layer> cell) {
  double optical_path = 0.0;
  for (const Layer& l : cell) optical_path += l.length * l.slowness;
  return constants::pi / optical_path;
}

Complex newton_root(std::span<const Layer> stack, double y_in, double y_out,
                    Complex start) {
  Complex z = start;
  for (int i = 0; i < 80; ++i) {
    const double h = 1e-7 * std::abs(z);
    const Complex d = response_denominator(stack, z, y_in, y_out);
    const Complex dp = response_denominator(stack, z + h, y_in, y_out);
    const Complex dm = response_denominator(stack, z - h, y_in, y_out);
    const Complex deriv = (dp - dm) / (2.0 * h);
    if (std::abs(deriv) == 0.0) break;
    const Complex step = d / deriv;
    z -= step;
    if (std::abs(step) <= 1e-13 * std::abs(z)) break;
  }
  return z;
}

std::vector<UnitCellGeometry> stretched(const DesignVector& design, double rel) {
  std::vector<UnitCellGeometry> cells = design.cells();
  const std::size_t first = static_cast<std::size_t>(design.n_mirror);
  const std::size_t count = static_cast<std::size_t>(2 * design.n_taper);
  for (std::size_t i = first; i < first + count; ++i) {
    cells[i].a_nm *= 1.0 + rel;
  }
  return cells;
}

double taper_region_length_m(const DesignVector& design) {
  double total = 0.0;
  for (int j = 1; j <= design.n_taper; ++j) total += design.taper_cell(j).a_nm;
  return 2.0 * total * 1e-9;
}

}  // namespace

DefectMode locate_defect_mode(std::span<const Layer> stack, const BandGap& gap,
                              double y_in, double y_out, int resolution) {
  const double lo = gap.lower_edge.rad_s();
  const double hi = gap.upper_edge.rad_s();
  const double dw = (hi - lo) / static_cast<double>(resolution + 1);

  std::vector<double> mag(static_cast<std::size_t>(resolution));
  for (int i = 0; i < resolution; ++i) {
    const double w = lo + dw * static_cast<double>(i + 1);
    mag[static_cast<std::size_t>(i)] =
        std::abs(response_denominator(stack, w, y_in, y_out));
  }
  std::vector<double> sorted = mag;
  std::nth_element(sorted.begin(), sorted.begin() + resolution / 2, sorted.end());
  const double typical = std::max(sorted[static_cast<std::size_t>(resolution / 2)], 1e-300);

  // interior local minima of |denominator|, most promising first
  std::vector<int> candidates;
  for (int i = 1; i + 1 < resolution; ++i) {
    const auto u = static_cast<std::size_t>(i);
    if (mag[u] <= mag[u - 1] && mag[u] <= mag[u + 1]) candidates.push_back(i);
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](int a, int b) { return mag[static_cast<std::size_t>(a)] < mag[static_cast<std::size_t>(b)]; });
  if (candidates.size() > 6) candidates.resize(6);

  std::vector<Complex> roots;
  for (int i : candidates) {
    const double w = lo + dw * static_cast<double>(i + 1);
    const Complex z = newton_root(stack, y_in, y_out, Complex(w, 0.0));
    const double residual = std::abs(response_denominator(stack, z, y_in, y_out));
    if (residual > 1e-6 * typical) continue;
    if (!(z.real() > lo && z.real() < hi)) continue;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
    bool duplicate = false;
    for (const Complex& r : roots) {
      if (std::abs(r - z) < 1e-8 * std::abs(z)) duplicate = true;
    }
    if (!duplicate) roots.push_back(z);
  }

  if (roots.empty()) {
    throw NoDefectModeError("no defect mode inside the mirror bandgap");
  }

  const double mid = gap.midgap().rad_s();
  const Complex best = *std::min_element(
      roots.begin(), roots.end(), [&](const Complex& a, const Complex& b) {
        return std::abs(a.real() - mid) < std::abs(b.real() - mid);
      });

  DefectMode mode;
  mode.omega = AngularFrequency::from_rad_s(best.real());
  const double gamma = 2.0 * std::abs(best.imag());
  mode.q = gamma > 0.0 ? best.real() / gamma : std::numeric_limits<double>::infinity();
  const double edge_distance = std::min(best.real() - lo, hi - best.real());
  mode.near_edge = edge_distance < 0.02 * gap.width().rad_s();
  return mode;
}

AngularFrequency stretched_optical_mode(const DesignVector& design,
                                        const MaterialParams& mat, double rel_elongation) {
  const auto mirror = optical_layers(design.mirror_cell, mat);
  const double wb = bragg_frequency(mirror);
  const BandGap gap = find_bandgap(mirror, AngularFrequency::from_rad_s(0.05 * wb),
                                   AngularFrequency::from_rad_s(2.2 * wb), 1600);
  const auto stack = optical_stack(stretched(design, rel_elongation), mat);
  const double y = optical_boundary_admittance(mat);
  return locate_defect_mode(stack, gap, y, y).omega;
}

double effective_mass(const DesignVector& design, const MaterialParams& mat,
                      AngularFrequency omega_m) {
  const auto cells = design.cells();
  const auto stack = acoustic_stack(cells, mat);
  const double y = acoustic_boundary_admittance();
  const double w = omega_m.rad_s();

  // boundary state for a unit incoming wave, then march through the stack
  const Matrix2c m_total = stack_matrix(stack, w);
  const Complex denom = y * m_total(0, 0) + y * y * m_total(0, 1) + m_total(1, 0) +
                        y * m_total(1, 1);
  const Complex r = (y * m_total(0, 0) + y * y * m_total(0, 1) - m_total(1, 0) -
                     y * m_total(1, 1)) /
                    denom;
  Eigen::Vector2cd state;
  state << 1.0 + r, y * (1.0 - r);

  // per-cell solid cross sections, two layers per cell
  std::vector<double> areas;
  areas.reserve(stack.size());
  for (const auto& cell : cells) {
    areas.push_back(cell.t_nm * (cell.w_nm - cell.hy_nm) * 1e-18);
    areas.push_back(cell.t_nm * cell.w_nm * 1e-18);
  }

  const int samples = 8;
  double weighted = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < stack.size(); ++i) {
    const Layer& layer = stack[i];
    const double dx = layer.length / static_cast<double>(samples);
    Layer slice = layer;
    slice.length = dx;
    const Matrix2c inv_step = layer_matrix(slice, w).inverse();
    Eigen::Vector2cd local = state;
    for (int sfrag = 0; sfrag < samples; ++sfrag) {
      const double u2_left = std::norm(local(0));
      local = inv_step * local;
      const double u2_right = std::norm(local(0));
      weighted += areas[i] * 0.5 * (u2_left + u2_right) * dx;
      peak = std::max(peak, std::max(u2_left, u2_right));
    }
    state = local;
  }
  if (peak <= 0.0) {
    throw ValidationError("mechanical mode profile vanished; cannot form an effective mass");
  }
  return mat.density * weighted / peak;
}

BandGap mirror_optical_gap(const UnitCellGeometry& cell, const MaterialParams& mat,
                           int resolution) {
  const auto mirror = optical_layers(cell, mat);
  const double wb = bragg_frequency(mirror);
  return find_bandgap(mirror, AngularFrequency::from_rad_s(0.05 * wb),
                      AngularFrequency::from_rad_s(2.2 * wb), resolution);
}

BandGap mirror_acoustic_gap(const UnitCellGeometry& cell, const MaterialParams& mat,
                            int resolution) {
  const auto mirror = acoustic_layers(cell, mat);
  const double wb = bragg_frequency(mirror);
  return find_bandgap(mirror, AngularFrequency::from_rad_s(0.02 * wb),
                      AngularFrequency::from_rad_s(2.4 * wb), resolution);
}

CavitySolution cavity_response(const DesignVector& design, const MaterialParams& mat) {
  design.validate();
  mat.validate();
  const auto cells = design.cells();

  const BandGap gap_opt = mirror_optical_gap(design.mirror_cell, mat);
  const double y_opt = optical_boundary_admittance(mat);
  const DefectMode optical =
      locate_defect_mode(optical_stack(cells, mat), gap_opt, y_opt, y_opt);

  const BandGap gap_ac = mirror_acoustic_gap(design.mirror_cell, mat);
  const double y_ac = acoustic_boundary_admittance();
  const DefectMode mechanical =
      locate_defect_mode(acoustic_stack(cells, mat), gap_ac, y_ac, y_ac);

  CavitySolution sol;
  sol.omega_o = optical.omega;
  sol.q_o = optical.q;
  sol.omega_m = mechanical.omega;
  sol.near_band_edge = optical.near_edge || mechanical.near_edge;
  sol.m_eff = effective_mass(design, mat, mechanical.omega);

  const double rel = 1e-4;
  const double ds = rel * taper_region_length_m(design);
  const double up = stretched_optical_mode(design, mat, rel).rad_s();
  const double down = stretched_optical_mode(design, mat, -rel).rad_s();
  const double dwo_ds = (up - down) / (2.0 * ds);
  const double x_zpf = zero_point_motion_m(sol.m_eff, sol.omega_m);
  sol.g0 = AngularFrequency::from_rad_s(std::abs(dwo_ds) * x_zpf);
  return sol;
}

SymmetryDecision symmetry_filter(BandLabel label) {
  switch (label) {
    case BandLabel::FundamentalOptical:
      return {true, "TE-like symmetric band; the 1D surrogate represents this family"};
    case BandLabel::FundamentalAcoustic:
      return {true, "breathing-like symmetric band; the 1D surrogate represents this family"};
    case BandLabel::Antisymmetric:
      return {false, "antisymmetric families have no 1D surrogate counterpart"};
  }
  return {false, "unknown band label"};
}

}  // namespace omc
