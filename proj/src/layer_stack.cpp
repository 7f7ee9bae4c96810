#include "omc/layer_stack.hpp"

#include <cmath>

#include "omc/errors.hpp"

namespace omc {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

}  // namespace

std::vector<Layer> optical_layers(const UnitCellGeometry& cell, const MaterialParams& mat) {
  cell.validate();
  mat.validate();
  const double ns = mat.effective_slab_index;
  const double n_hole = 1.0 + cell.hole_area_fraction() * (ns - 1.0);
  const double c = constants::speed_of_light;
  return {
      {cell.hx_nm * 1e-9, n_hole / c, n_hole},
      {(cell.a_nm - cell.hx_nm) * 1e-9, ns / c, ns},
  };
}

std::vector<Layer> acoustic_layers(const UnitCellGeometry& cell, const MaterialParams& mat) {
  cell.validate();
  mat.validate();
  const double v = mat.longitudinal_sound_speed;
  // impedance of a thin rod is rho * area * v; with shared material and
  // thickness the contrast reduces to the solid area fraction
  return {
      {cell.hx_nm * 1e-9, 1.0 / v, cell.hole_area_fraction()},
      {(cell.a_nm - cell.hx_nm) * 1e-9, 1.0 / v, 1.0},
  };
}

double optical_boundary_admittance(const MaterialParams& mat) {
  return mat.effective_slab_index;
}

double acoustic_boundary_admittance() { return 1.0; }

Matrix2c layer_matrix(const Layer& layer, std::complex<double> omega) {
  const std::complex<double> phi = omega * layer.length * layer.slowness;
  const std::complex<double> c = std::cos(phi);
  const std::complex<double> s = std::sin(phi);
  Matrix2c m;
  m(0, 0) = c;
  m(0, 1) = kI * s / layer.admittance;
  m(1, 0) = kI * s * layer.admittance;
  m(1, 1) = c;
  return m;
}

Matrix2c stack_matrix(std::span<const Layer> layers, std::complex<double> omega) {
  Matrix2c total = Matrix2c::Identity();
  for (const Layer& layer : layers) total *= layer_matrix(layer, omega);
  return total;
}

double bloch_trace(std::span<const Layer> cell, double omega) {
  if (omega < 0.0) throw ValidationError("bloch trace needs a non-negative frequency");
  const Matrix2c m = stack_matrix(cell, omega);
  return 0.5 * (m(0, 0) + m(1, 1)).real();
}

std::complex<double> response_denominator(std::span<const Layer> layers,
                                          std::complex<double> omega, double y_in,
                                          double y_out) {
  const Matrix2c m = stack_matrix(layers, omega);
  return y_in * m(0, 0) + y_in * y_out * m(0, 1) + m(1, 0) + y_out * m(1, 1);
}

double transmission(std::span<const Layer> layers, double omega, double y_in,
                    double y_out) {
  const std::complex<double> d = response_denominator(layers, omega, y_in, y_out);
  const double t = std::abs(2.0 * y_in / d);
  return (y_out / y_in) * t * t;
}

std::vector<Layer> optical_stack(const std::vector<UnitCellGeometry>& cells,
                                 const MaterialParams& mat) {
  std::vector<Layer> out;
  out.reserve(2 * cells.size());
  for (const auto& cell : cells) {
    for (const Layer& layer : optical_layers(cell, mat)) out.push_back(layer);
  }
  return out;
}

std::vector<Layer> acoustic_stack(const std::vector<UnitCellGeometry>& cells,
                                  const MaterialParams& mat) {
  std::vector<Layer> out;
  out.reserve(2 * cells.size());
  for (const auto& cell : cells) {
    for (const Layer& layer : acoustic_layers(cell, mat)) out.push_back(layer);
  }
  return out;
}

}  // namespace omc
