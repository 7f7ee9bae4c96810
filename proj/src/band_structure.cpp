#include "omc/band_structure.hpp"

#include <cmath>

#include "omc/errors.hpp"

namespace omc {

namespace {

// |trace| - 1, negative inside allowed bands
double excess(std::span<const Layer> cell, double omega) {
  return std::abs(bloch_trace(cell, omega)) - 1.0;
}

// refine the allowed/forbidden transition bracketed by [lo, hi]
double bisect_edge(std::span<const Layer> cell, double lo, double hi, bool rising) {
  for (int i = 0; i < 200 && (hi - lo) > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const bool forbidden = excess(cell, mid) > 0.0;
    if (forbidden == rising) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BandGap find_bandgap(std::span<const Layer> cell, AngularFrequency lo, AngularFrequency hi,
                     int resolution) {
  if (!(lo.rad_s() >= 0.0) || !(hi.rad_s() > lo.rad_s())) {
    throw ValidationError("bandgap search range must be non-negative and increasing");
  }
  if (resolution < 16) {
    throw ValidationError("bandgap search needs at least 16 grid points");
  }

  const double w_lo = lo.rad_s();
  const double w_hi = hi.rad_s();
  const double dw = (w_hi - w_lo) / static_cast<double>(resolution);

  bool seen_allowed = false;
  bool in_gap = false;
  double prev = w_lo;
  double lower = 0.0;

  for (int i = 0; i <= resolution; ++i) {
    const double w = w_lo + dw * static_cast<double>(i);
    const bool forbidden = excess(cell, w) > 0.0;
    if (!in_gap) {
      if (!forbidden) {
        seen_allowed = true;
      } else if (seen_allowed) {
        lower = bisect_edge(cell, prev, w, true);
        in_gap = true;
      }
    } else if (!forbidden) {
      const double upper = bisect_edge(cell, prev, w, false);
      return {AngularFrequency::from_rad_s(lower), AngularFrequency::from_rad_s(upper)};
    }
    prev = w;
  }

  if (in_gap) {
    throw NoBandgapError("bandgap does not close inside the search range; raise the upper bound");
  }
  throw NoBandgapError("no forbidden frequency region found in the search range");
}

}  // namespace omc
