#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "omc/geometry.hpp"

namespace omc {

// Homogeneous 1D segment in SI units.  `slowness` is inverse phase velocity;
// `admittance` sets the impedance contrast between segments (refractive index
// for the optical stack, relative solid cross-section for the acoustic one).
struct Layer {
  double length = 0.0;      // m
  double slowness = 0.0;    // s/m
  double admittance = 1.0;  // dimensionless
};

// Two-segment effective model of one unit cell: the hole segment dilutes the
// slab properties by the open area, the rest of the cell is solid slab.
std::vector<Layer> optical_layers(const UnitCellGeometry& cell, const MaterialParams& mat);
std::vector<Layer> acoustic_layers(const UnitCellGeometry& cell, const MaterialParams& mat);

// admittance of the semi-infinite media the finite stack radiates into
double optical_boundary_admittance(const MaterialParams& mat);
double acoustic_boundary_admittance();

using Matrix2c = Eigen::Matrix2cd;

Matrix2c layer_matrix(const Layer& layer, std::complex<double> omega);
Matrix2c stack_matrix(std::span<const Layer> layers, std::complex<double> omega);

// cos of the Bloch phase across one unit cell; |value| > 1 means forbidden
double bloch_trace(std::span<const Layer> cell, double omega);

// Denominator of the scattering response between semi-infinite boundary media;
// its complex zeros are the resonances of the finite stack.
std::complex<double> response_denominator(std::span<const Layer> layers,
                                          std::complex<double> omega, double y_in,
                                          double y_out);

// Power transmission through the stack at real frequency.
double transmission(std::span<const Layer> layers, double omega, double y_in,
                    double y_out);

// Concatenated per-cell layers for a full structure.
std::vector<Layer> optical_stack(const std::vector<UnitCellGeometry>& cells,
                                 const MaterialParams& mat);
std::vector<Layer> acoustic_stack(const std::vector<UnitCellGeometry>& cells,
                                  const MaterialParams& mat);

}  // namespace omc
