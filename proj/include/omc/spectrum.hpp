#pragma once

#include <cstddef>
#include <vector>

#include "omc/errors.hpp"

namespace omc {

// One measured trace: x is frequency or time (strictly increasing), y the
// detector reading, y_sigma an optional per-point standard deviation.
struct Spectrum {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> y_sigma;  // empty means unweighted

  Spectrum() = default;
  Spectrum(std::vector<double> x_in, std::vector<double> y_in,
           std::vector<double> sigma_in = {})
      : x(std::move(x_in)), y(std::move(y_in)), y_sigma(std::move(sigma_in)) {
    validate();
  }

  std::size_t size() const { return x.size(); }
  bool has_sigma() const { return !y_sigma.empty(); }
  void validate() const;
};

}  // namespace omc
