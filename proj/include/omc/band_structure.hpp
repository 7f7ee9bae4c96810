#pragma once

#include <span>

#include "omc/layer_stack.hpp"
#include "omc/quantities.hpp"

namespace omc {

struct BandGap {
  AngularFrequency lower_edge;
  AngularFrequency upper_edge;

  AngularFrequency midgap() const {
    return AngularFrequency::from_rad_s(0.5 * (lower_edge.rad_s() + upper_edge.rad_s()));
  }
  AngularFrequency width() const {
    return AngularFrequency::from_rad_s(upper_edge.rad_s() - lower_edge.rad_s());
  }
  double fractional_width() const { return width().rad_s() / midgap().rad_s(); }
  bool contains(AngularFrequency omega) const {
    return omega.rad_s() > lower_edge.rad_s() && omega.rad_s() < upper_edge.rad_s();
  }
};

// First forbidden interval above the lowest allowed band of the periodic
// cell, edges located on the scan grid and refined by bisection on
// |bloch_trace| = 1.
BandGap find_bandgap(std::span<const Layer> cell, AngularFrequency lo, AngularFrequency hi,
                     int resolution = 2000);

}  // namespace omc
