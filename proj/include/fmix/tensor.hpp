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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fmix/error.hpp"

namespace fmix {

using Shape = std::vector<std::size_t>;

inline constexpr std::size_t kMaxMaskRank = 3;

inline std::string to_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

/// Product of extents. Throws InvalidShape on overflow.
inline std::size_t element_count(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) {
    if (d != 0 && n > std::numeric_limits<std::size_t>::max() / d)
      throw InvalidShape("shape " + to_string(shape) + " overflows size_t");
    n *= d;
  }
  return n;
}

/// Spatial dims accepted by the mask and spectral routines: 1 to 3 axes, each >= 1.
inline void validate_dims(const Shape& dims) {
  if (dims.empty() || dims.size() > kMaxMaskRank)
    throw InvalidShape("expected 1 to 3 axes, got " + std::to_string(dims.size()));
  for (std::size_t d : dims)
    if (d < 1) throw InvalidShape("zero-length axis in " + to_string(dims));
  (void)element_count(dims);
}

/// Dense row-major n-dimensional array.
template <class T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  explicit Tensor(Shape shape, T fill = T{})
      : shape_(std::move(shape)), data_(element_count(shape_), fill) {}
  Tensor(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != element_count(shape_))
      throw InvalidShape("payload of " + std::to_string(data_.size()) +
                         " elements does not fit shape " + to_string(shape_));
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }
  const std::vector<T>& values() const noexcept { return data_; }

  T& operator[](std::size_t flat) noexcept { return data_[flat]; }
  const T& operator[](std::size_t flat) const noexcept { return data_[flat]; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  /// Sub-tensor along the leading axis, copied out.
  Tensor slice(std::size_t index) const {
    if (shape_.empty() || index >= shape_[0]) throw InvalidShape("slice index out of range");
    Shape inner(shape_.begin() + 1, shape_.end());
    const std::size_t stride = element_count(inner);
    return Tensor(std::move(inner),
                  std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(index * stride),
                                 data_.begin() + static_cast<std::ptrdiff_t>((index + 1) * stride)));
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<T> data_;
};

/// Row-major strides for `shape`, in elements.
inline std::vector<std::size_t> strides_of(const Shape& shape) {
  std::vector<std::size_t> strides(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;) strides[i - 1] = strides[i] * shape[i];
  return strides;
}

/// Stack equally shaped tensors along a new leading axis.
template <class T>
Tensor<T> stack(std::span<const Tensor<T>> items) {
  if (items.empty()) throw InvalidShape("cannot stack zero tensors");
  Shape shape = items.front().shape();
  std::vector<T> data;
  data.reserve(items.size() * items.front().size());
  for (const auto& item : items) {
    if (item.shape() != shape) throw InvalidShape("stack: mismatched item shapes");
    data.insert(data.end(), item.begin(), item.end());
  }
  shape.insert(shape.begin(), items.size());
  return Tensor<T>(std::move(shape), std::move(data));
}

}  // namespace fmix
