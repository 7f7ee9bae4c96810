#pragma once

#include <span>
#include <string>

#include "omc/band_structure.hpp"
#include "omc/geometry.hpp"
#include "omc/layer_stack.hpp"

namespace omc {

struct CavitySolution {
  AngularFrequency omega_o;  // optical defect mode
  double q_o = 0.0;
  AngularFrequency omega_m;  // mechanical defect mode
  AngularFrequency g0;       // single-photon coupling estimate
  double m_eff = 0.0;        // kg
  bool near_band_edge = false;
};

struct DefectMode {
  AngularFrequency omega;
  double q = 0.0;
  bool near_edge = false;
};

// Localized resonance of the finite stack inside the mirror bandgap, found as
// the complex zero of the scattering denominator nearest midgap.  q is
// radiation-limited (semi-infinite uniform boundary media, lossless layers).
DefectMode locate_defect_mode(std::span<const Layer> stack, const BandGap& gap,
                              double y_in, double y_out, int resolution = 1200);

// First bandgap of an infinite mirror lattice made of this cell, searched
// over a fixed multiple of the Bragg estimate so every caller agrees on the
// window.
BandGap mirror_optical_gap(const UnitCellGeometry& cell, const MaterialParams& mat,
                           int resolution = 1600);
BandGap mirror_acoustic_gap(const UnitCellGeometry& cell, const MaterialParams& mat,
                            int resolution = 1600);

// Optical defect-mode frequency with the taper-region lattice uniformly
// elongated by the given relative amount; the g0 derivative differentiates
// this at zero.
AngularFrequency stretched_optical_mode(const DesignVector& design,
                                        const MaterialParams& mat,
                                        double rel_elongation);

// Effective motional mass of the mechanical mode: density times the
// area-weighted integral of the squared displacement profile, normalized to
// the profile maximum.
double effective_mass(const DesignVector& design, const MaterialParams& mat,
                      AngularFrequency omega_m);

CavitySolution cavity_response(const DesignVector& design, const MaterialParams& mat);

// The 1D surrogate carries only the symmetric (TE-like / breathing-like)
// band family; requests for other families are excluded with a note.
enum class BandLabel { FundamentalOptical, FundamentalAcoustic, Antisymmetric };

struct SymmetryDecision {
  bool included = false;
  std::string note;
};

SymmetryDecision symmetry_filter(BandLabel label);

}  // namespace omc
