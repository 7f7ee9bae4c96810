#include "omc/spectrum.hpp"

#include <cmath>
#include <string>

namespace omc {

void Spectrum::validate() const {
  if (x.size() != y.size()) {
    throw ValidationError("spectrum x and y lengths differ: " +
                          std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  }
  if (!y_sigma.empty() && y_sigma.size() != x.size()) {
    throw ValidationError("spectrum y_sigma length differs from x");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw ValidationError("spectrum contains a non-finite value at row " +
                            std::to_string(i));
    }
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw ValidationError("spectrum x must be strictly increasing; violated at row " +
                            std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < y_sigma.size(); ++i) {
    if (!std::isfinite(y_sigma[i]) || !(y_sigma[i] > 0.0)) {
      throw ValidationError("spectrum y_sigma must be strictly positive; violated at row " +
                            std::to_string(i));
    }
  }
}

}  // namespace omc
