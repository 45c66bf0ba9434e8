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
#include <numbers>
#include <string>

#include "fmix/error.hpp"
#include "fmix/fft.hpp"
#include "fmix/sampling.hpp"
#include "fmix/tensor.hpp"

namespace fmix {

/// Real field over 1-3 axes; the grey-scale image before thresholding.
using RealField = Tensor<double>;

/// Per-bin magnitude of the DFT sample frequency, in cycles per sample.
struct FreqGrid {
  Tensor<double> mag;

  const Shape& dims() const noexcept { return mag.shape(); }
};

inline constexpr std::size_t kNaiveDftLimit = 4096;

/// Signed frequency of bin k on an axis of length n: k/n below ceil(n/2), (k-n)/n above.
inline double signed_bin_frequency(std::size_t k, std::size_t n) noexcept {
  const std::size_t half = (n + 1) / 2;
  const double kk = k < half ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
  return kk / static_cast<double>(n);
}

inline FreqGrid freq_grid(const Shape& dims) {
  validate_dims(dims);
  Tensor<double> mag(dims);
  const auto strides = strides_of(dims);
  for (std::size_t flat = 0; flat < mag.size(); ++flat) {
    double sq = 0.0;
    for (std::size_t axis = 0; axis < dims.size(); ++axis) {
      const double f = signed_bin_frequency((flat / strides[axis]) % dims[axis], dims[axis]);
      sq += f * f;
    }
    mag[flat] = std::sqrt(sq);
  }
  return {std::move(mag)};
}

/// Divide each spectrum bin by max(|f|, 1/max(dims))^delta. The clamp keeps
/// the DC bin finite while still giving it the strongest weight.
inline ComplexField apply_low_pass(const ComplexField& z, double delta, const FreqGrid& grid) {
  if (!std::isfinite(delta)) throw InvalidParameter("delta must be finite");
  if (z.shape() != grid.dims())
    throw InvalidShape("spectrum " + to_string(z.shape()) + " vs grid " + to_string(grid.dims()));
  ComplexField out = z;
  if (delta == 0.0) return out;
  const double f_min = 1.0 / static_cast<double>(*std::max_element(z.shape().begin(), z.shape().end()));
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] /= std::pow(std::max(grid.mag[i], f_min), delta);
  return out;
}

/// Re(IDFT(z)) with the 1/N factor on the inverse.
inline RealField inverse_transform_real(const ComplexField& z) {
  validate_dims(z.shape());
  ComplexField work = z;
  fft_nd(work, FftDirection::inverse);
  RealField out(z.shape());
  const double scale = 1.0 / static_cast<double>(z.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = work[i].real() * scale;
  return out;
}

/// Direct O(N^2) summation of the same transform as inverse_transform_real.
/// Test oracle; refuses inputs above kNaiveDftLimit elements.
inline RealField naive_inverse_dft(const ComplexField& z) {
  const Shape& dims = z.shape();
  validate_dims(dims);
  const std::size_t n = z.size();
  if (n > kNaiveDftLimit)
    throw SizeLimit("naive DFT limited to " + std::to_string(kNaiveDftLimit) + " elements, got " +
                    std::to_string(n));
  const auto strides = strides_of(dims);
  auto coord = [&](std::size_t flat, std::size_t axis) { return (flat / strides[axis]) % dims[axis]; };
  RealField out(dims);
  for (std::size_t x = 0; x < n; ++x) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      // Phase in turns, reduced per axis so it stays in [0, rank).
      double turns = 0.0;
      for (std::size_t axis = 0; axis < dims.size(); ++axis)
        turns += static_cast<double>((coord(x, axis) * coord(k, axis)) % dims[axis]) /
                 static_cast<double>(dims[axis]);
      const double phase = 2.0 * std::numbers::pi * turns;
      // Re(z * e^{i phase})
      acc += z[k].real() * std::cos(phase) - z[k].imag() * std::sin(phase);
    }
    out[x] = acc / static_cast<double>(n);
  }
  return out;
}

}  // namespace fmix
