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

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "fmix/error.hpp"
#include "fmix/tensor.hpp"

namespace fmix {

enum class FftDirection { forward, inverse };

/// Unnormalised 1-D DFT of a fixed length.
///
/// Powers of two run an iterative radix-2 transform; every other length is
/// mapped onto a power-of-two circular convolution (Bluestein's chirp-z).
/// Twiddles are evaluated directly, never by recurrence. The inverse omits
/// the 1/n factor.
class FftPlan {
 public:
  using complex = std::complex<double>;

  explicit FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw InvalidShape("FFT length must be positive");
    if (std::has_single_bit(n)) {
      twiddles_ = make_twiddles(n);
      return;
    }
    conv_len_ = std::bit_ceil(2 * n - 1);
    twiddles_ = make_twiddles(conv_len_);
    // chirp[k] = exp(-i pi k^2 / n); k^2 reduced mod 2n to keep the phase exact.
    chirp_.resize(n);
    const std::size_t period = 2 * n;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t k2 = static_cast<std::size_t>((static_cast<unsigned __int128>(k) * k) % period);
      chirp_[k] = std::polar(1.0, -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n));
    }
    std::vector<complex> kernel(conv_len_, complex{});
    kernel[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n; ++k) kernel[k] = kernel[conv_len_ - k] = std::conj(chirp_[k]);
    radix2(kernel, FftDirection::forward);
    kernel_spectrum_ = std::move(kernel);
  }

  std::size_t size() const noexcept { return n_; }

  void transform(std::span<complex> data, FftDirection dir) const {
    if (data.size() != n_) throw InvalidShape("FFT plan length mismatch");
    if (n_ == 1) return;
    if (chirp_.empty()) {
      radix2(data, dir);
      return;
    }
    // inverse(x) = conj(forward(conj(x)))
    if (dir == FftDirection::inverse)
      for (auto& v : data) v = std::conj(v);
    bluestein(data);
    if (dir == FftDirection::inverse)
      for (auto& v : data) v = std::conj(v);
  }

 private:
  static std::vector<complex> make_twiddles(std::size_t n) {
    std::vector<complex> tw(n / 2);
    for (std::size_t k = 0; k < tw.size(); ++k)
      tw[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    return tw;
  }

  // In-place radix-2 on a power-of-two span using twiddles_ (built for a length
  // that is a multiple of data.size()).
  void radix2(std::span<complex> data, FftDirection dir) const {
    const std::size_t n = data.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
      std::size_t bit = n >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(data[i], data[j]);
    }
    const std::size_t table = twiddles_.size() * 2;
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t step = table / len;
      for (std::size_t start = 0; start < n; start += len) {
        for (std::size_t k = 0; k < half; ++k) {
          complex w = twiddles_[k * step];
          if (dir == FftDirection::inverse) w = std::conj(w);
          const complex t = w * data[start + k + half];
          data[start + k + half] = data[start + k] - t;
          data[start + k] += t;
        }
      }
    }
  }

  void bluestein(std::span<complex> data) const {
    std::vector<complex> work(conv_len_, complex{});
    for (std::size_t k = 0; k < n_; ++k) work[k] = data[k] * chirp_[k];
    radix2(work, FftDirection::forward);
    for (std::size_t k = 0; k < conv_len_; ++k) work[k] *= kernel_spectrum_[k];
    radix2(work, FftDirection::inverse);
    const double scale = 1.0 / static_cast<double>(conv_len_);
    for (std::size_t k = 0; k < n_; ++k) data[k] = work[k] * scale * chirp_[k];
  }

  std::size_t n_;
  std::size_t conv_len_ = 0;
  std::vector<complex> twiddles_;
  std::vector<complex> chirp_;
  std::vector<complex> kernel_spectrum_;
};

/// Unnormalised separable n-D DFT applied in place along every axis.
inline void fft_nd(Tensor<std::complex<double>>& field, FftDirection dir) {
  const Shape& shape = field.shape();
  const auto strides = strides_of(shape);
  const std::size_t total = field.size();
  std::vector<std::complex<double>> line;
  for (std::size_t axis = 0; axis < shape.size(); ++axis) {
    const std::size_t n = shape[axis];
    if (n == 1) continue;
    const FftPlan plan(n);
    const std::size_t stride = strides[axis];
    line.resize(n);
    // Each line is identified by a flat offset whose coordinate on `axis` is 0.
    const std::size_t block = n * stride;
    for (std::size_t outer = 0; outer < total; outer += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const std::size_t base = outer + inner;
        for (std::size_t k = 0; k < n; ++k) line[k] = field[base + k * stride];
        plan.transform(line, dir);
        for (std::size_t k = 0; k < n; ++k) field[base + k * stride] = line[k];
      }
    }
  }
}

}  // namespace fmix
