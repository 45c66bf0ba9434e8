// Copyright 2026 The fmixkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "fmix/error.hpp"
#include "fmix/fft.hpp"
#include "fmix/spectral.hpp"

namespace fmix {

/// Power averaged over integer-radius annuli of the DFT grid.
///
/// Bin r collects every frequency whose magnitude, in units of 1/max(dims),
/// rounds to r, for r = 0 .. max(dims)/2. Corner frequencies beyond that are
/// dropped.
struct RadialSpectrum {
  std::vector<double> power;      // mean |DFT|^2 per annulus
  std::vector<double> frequency;  // mean |f| (cycles/sample) per annulus
  std::vector<std::size_t> count;
};

inline RadialSpectrum radial_power_spectrum(const RealField& field) {
  validate_dims(field.shape());
  Tensor<std::complex<double>> spectrum(field.shape());
  for (std::size_t i = 0; i < field.size(); ++i) spectrum[i] = field[i];
  fft_nd(spectrum, FftDirection::forward);

  const FreqGrid grid = freq_grid(field.shape());
  const double longest = static_cast<double>(*std::max_element(field.shape().begin(), field.shape().end()));
  const std::size_t bins = static_cast<std::size_t>(longest) / 2 + 1;
  RadialSpectrum out{std::vector<double>(bins, 0.0), std::vector<double>(bins, 0.0), std::vector<std::size_t>(bins, 0)};
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const auto r = static_cast<std::size_t>(std::lround(grid.mag[i] * longest));
    if (r >= bins) continue;
    out.power[r] += std::norm(spectrum[i]);
    out.frequency[r] += grid.mag[i];
    ++out.count[r];
  }
  for (std::size_t r = 0; r < bins; ++r) {
    if (out.count[r] == 0) continue;
    out.power[r] /= static_cast<double>(out.count[r]);
    out.frequency[r] /= static_cast<double>(out.count[r]);
  }
  return out;
}

/// Least-squares slope of log(power) against log(frequency), skipping the DC
/// annulus and any empty or zero-power annulus.
inline double spectral_slope(const RadialSpectrum& spectrum) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t r = 1; r < spectrum.power.size(); ++r) {
    if (spectrum.count[r] == 0 || spectrum.power[r] <= 0.0) continue;
    const double x = std::log(spectrum.frequency[r]);
    const double y = std::log(spectrum.power[r]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw InvalidShape("too few frequency annuli to fit a slope");
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace fmix
