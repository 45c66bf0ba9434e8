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
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fmix/error.hpp"
#include "fmix/rng.hpp"
#include "fmix/sampling.hpp"
#include "fmix/spectral.hpp"
#include "fmix/tensor.hpp"

namespace fmix {

/// Dense {0,1} mask plus the mixing coefficient it was built for.
struct BinaryMask {
  Tensor<std::uint8_t> data;
  double lambda_target = 0.0;

  const Shape& dims() const noexcept { return data.shape(); }
  std::size_t size() const noexcept { return data.size(); }

  std::size_t ones() const noexcept {
    return static_cast<std::size_t>(std::count(data.begin(), data.end(), std::uint8_t{1}));
  }
  double mean() const noexcept { return static_cast<double>(ones()) / static_cast<double>(size()); }

  /// 1 - m, with lambda_target mirrored.
  BinaryMask complement() const {
    BinaryMask out{data, 1.0 - lambda_target};
    for (auto& v : out.data) v = static_cast<std::uint8_t>(1 - v);
    return out;
  }
};

enum class MaskFamily { fmix, cutmix };

inline constexpr double kDefaultAlpha = 1.0;
inline constexpr double kDefaultDelta = 3.0;

struct MaskConfig {
  Shape dims;
  double alpha = kDefaultAlpha;
  double delta = kDefaultDelta;
  MaskFamily family = MaskFamily::fmix;
};

inline void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw InvalidParameter("lambda must lie in [0, 1], got " + std::to_string(lambda));
}

/// Number of ones a mask over n elements carries for coefficient lambda: floor(lambda*n + 0.5).
inline std::size_t target_ones(double lambda, std::size_t n) {
  const auto k = static_cast<std::size_t>(std::floor(lambda * static_cast<double>(n) + 0.5));
  return std::min(k, n);
}

/// Low-pass filtered grey-scale field: Re(IDFT(Z / max(|f|, f_min)^delta)).
inline RealField sample_grey_field(Rng& rng, const Shape& dims, double delta) {
  if (!std::isfinite(delta) || delta < 0.0)
    throw InvalidParameter("delta must be finite and >= 0, got " + std::to_string(delta));
  const ComplexField z = sample_complex_field(rng, dims);
  return inverse_transform_real(apply_low_pass(z, delta, freq_grid(dims)));
}

/// Set the floor(lambda*N + 0.5) largest elements of `grey` to 1. Ties go to
/// the lower flat index, so the result is fully deterministic.
inline BinaryMask binarize_top(const RealField& grey, double lambda) {
  check_lambda(lambda);
  validate_dims(grey.shape());
  for (double v : grey)
    if (!std::isfinite(v)) throw InvalidInput("grey field contains a non-finite value");

  const std::size_t n = grey.size();
  const std::size_t k = target_ones(lambda, n);
  BinaryMask mask{Tensor<std::uint8_t>(grey.shape(), std::uint8_t{0}), lambda};
  if (k == 0) return mask;
  if (k == n) {
    std::fill(mask.data.begin(), mask.data.end(), std::uint8_t{1});
    return mask;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Strict total order: larger value first, then smaller index.
  auto before = [&](std::size_t a, std::size_t b) {
    return grey[a] > grey[b] || (grey[a] == grey[b] && a < b);
  };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k - 1), order.end(), before);
  for (std::size_t i = 0; i < k; ++i) mask.data[order[i]] = 1;
  return mask;
}

inline BinaryMask fmix_mask(Rng& rng, const Shape& dims, double lambda, double delta) {
  check_lambda(lambda);
  return binarize_top(sample_grey_field(rng, dims, delta), lambda);
}

/// Side lengths of the CutMix zero rectangle: round(w * sqrt(1 - lambda)), round(h * sqrt(1 - lambda)).
inline std::pair<std::size_t, std::size_t> cutmix_box(const Shape& dims, double lambda) {
  check_lambda(lambda);
  if (dims.size() != 2) throw InvalidShape("CutMix masks are two-dimensional, got " + to_string(dims));
  validate_dims(dims);
  const double cut = std::sqrt(1.0 - lambda);
  auto side = [&](std::size_t extent) {
    const auto s = static_cast<std::size_t>(std::round(static_cast<double>(extent) * cut));
    return std::min(s, extent);
  };
  return {side(dims[0]), side(dims[1])};
}

/// Ones everywhere except one axis-aligned zero rectangle fully inside the grid.
/// Exactly two position draws are taken from rng regardless of lambda.
inline BinaryMask cutmix_mask(Rng& rng, const Shape& dims, double lambda) {
  const auto [rows, cols] = cutmix_box(dims, lambda);
  const std::size_t top = static_cast<std::size_t>(rng.below(dims[0] - rows + 1));
  const std::size_t left = static_cast<std::size_t>(rng.below(dims[1] - cols + 1));
  BinaryMask mask{Tensor<std::uint8_t>(dims, std::uint8_t{1}), lambda};
  for (std::size_t r = top; r < top + rows; ++r)
    for (std::size_t c = left; c < left + cols; ++c) mask.data[r * dims[1] + c] = 0;
  return mask;
}

/// Realised mean of any CutMix mask for (dims, lambda).
inline double cutmix_mean(const Shape& dims, double lambda) {
  const auto [rows, cols] = cutmix_box(dims, lambda);
  return 1.0 - static_cast<double>(rows * cols) / static_cast<double>(dims[0] * dims[1]);
}

/// Fraction of axis-adjacent element pairs whose values differ. 0 when there are no pairs.
inline double transition_fraction(const BinaryMask& mask) {
  const Shape& dims = mask.dims();
  const auto strides = strides_of(dims);
  std::size_t pairs = 0;
  std::size_t changes = 0;
  for (std::size_t axis = 0; axis < dims.size(); ++axis) {
    const std::size_t stride = strides[axis];
    for (std::size_t flat = 0; flat < mask.size(); ++flat) {
      if ((flat / stride) % dims[axis] + 1 >= dims[axis]) continue;
      ++pairs;
      changes += mask.data[flat] != mask.data[flat + stride];
    }
  }
  return pairs == 0 ? 0.0 : static_cast<double>(changes) / static_cast<double>(pairs);
}

struct GeneratedMask {
  BinaryMask mask;
  double lambda;  // coefficient the mask was drawn for (sampled or fixed)
};

/// One mask from a config: lambda is drawn from Beta(alpha, alpha) first
/// unless `fixed_lambda` is supplied.
inline GeneratedMask generate_mask(Rng& rng, const MaskConfig& config,
                                   std::optional<double> fixed_lambda = std::nullopt) {
  const double lambda = fixed_lambda ? *fixed_lambda : sample_lambda(rng, config.alpha);
  check_lambda(lambda);
  switch (config.family) {
    case MaskFamily::fmix:
      return {fmix_mask(rng, config.dims, lambda, config.delta), lambda};
    case MaskFamily::cutmix:
      return {cutmix_mask(rng, config.dims, lambda), lambda};
  }
  throw InvalidParameter("unknown mask family");
}

}  // namespace fmix
