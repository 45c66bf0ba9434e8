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

// NPY v1.0 reader/writer for the three dtypes the toolkit exchanges:
// "|u1" (masks), "<f4" (images, grey fields) and "<f8". Readers also accept
// v2.0/v3.0 headers. Only C-order, little-endian payloads are handled.

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fmix/error.hpp"
#include "fmix/tensor.hpp"

namespace fmix::npy {

static_assert(std::endian::native == std::endian::little, "npy I/O assumes a little-endian host");

enum class DType { u8, f4, f8 };

inline std::size_t item_size(DType dtype) {
  switch (dtype) {
    case DType::u8: return 1;
    case DType::f4: return 4;
    case DType::f8: return 8;
  }
  return 0;
}

inline const char* descr(DType dtype) {
  switch (dtype) {
    case DType::u8: return "|u1";
    case DType::f4: return "<f4";
    case DType::f8: return "<f8";
  }
  return "";
}

template <class T>
struct dtype_of;
template <>
struct dtype_of<std::uint8_t> {
  static constexpr DType value = DType::u8;
};
template <>
struct dtype_of<float> {
  static constexpr DType value = DType::f4;
};
template <>
struct dtype_of<double> {
  static constexpr DType value = DType::f8;
};

/// Decoded file: dtype, shape and the raw little-endian payload.
struct Array {
  DType dtype = DType::u8;
  Shape shape;
  std::vector<std::byte> payload;

  std::size_t size() const { return element_count(shape); }
};

inline constexpr char kMagic[] = "\x93NUMPY";
inline constexpr std::size_t kMagicLen = 6;

inline std::string header_dict(DType dtype, const Shape& shape) {
  std::string s = "{'descr': '";
  s += descr(dtype);
  s += "', 'fortran_order': False, 'shape': (";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  if (shape.size() == 1) s += ",";
  s += "), }";
  return s;
}

/// Full v1.0 file image: magic, version, header padded so the payload starts on a 64-byte boundary.
inline std::string encode(DType dtype, const Shape& shape, std::span<const std::byte> payload) {
  if (payload.size() != element_count(shape) * item_size(dtype))
    throw InvalidShape("npy payload size does not match shape " + to_string(shape));
  std::string header = header_dict(dtype, shape);
  const std::size_t preamble = kMagicLen + 2 + 2;
  const std::size_t total = preamble + header.size() + 1;
  header.append((64 - total % 64) % 64, ' ');
  header += '\n';
  if (header.size() > 0xFFFF) throw InvalidShape("npy header too long for v1.0");

  std::string out(kMagic, kMagicLen);
  out += '\x01';
  out += '\x00';
  out += static_cast<char>(header.size() & 0xFF);
  out += static_cast<char>(header.size() >> 8);
  out += header;
  out.append(reinterpret_cast<const char*>(payload.data()), payload.size());
  return out;
}

template <class T>
std::string encode(const Tensor<T>& tensor) {
  return encode(dtype_of<T>::value, tensor.shape(), std::as_bytes(tensor.data()));
}

template <class T>
void write(std::ostream& os, const Tensor<T>& tensor) {
  const std::string bytes = encode(tensor);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("failed writing npy stream");
}

namespace detail {

inline std::string dict_value(const std::string& dict, const std::string& key) {
  const std::string needle = "'" + key + "'";
  auto pos = dict.find(needle);
  if (pos == std::string::npos) throw IoError("npy header lacks key " + key);
  pos = dict.find(':', pos + needle.size());
  if (pos == std::string::npos) throw IoError("npy header malformed near " + key);
  ++pos;
  while (pos < dict.size() && std::isspace(static_cast<unsigned char>(dict[pos]))) ++pos;
  if (pos >= dict.size()) throw IoError("npy header truncated");
  std::size_t end;
  if (dict[pos] == '\'') {
    end = dict.find('\'', pos + 1);
    if (end == std::string::npos) throw IoError("npy header has an unterminated string");
    return dict.substr(pos + 1, end - pos - 1);
  }
  if (dict[pos] == '(') {
    end = dict.find(')', pos);
    if (end == std::string::npos) throw IoError("npy header has an unterminated tuple");
    return dict.substr(pos, end - pos + 1);
  }
  end = dict.find_first_of(",}", pos);
  std::string v = dict.substr(pos, end - pos);
  while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.pop_back();
  return v;
}

inline Shape parse_shape(const std::string& tuple) {
  Shape shape;
  std::size_t i = 1;
  while (i < tuple.size()) {
    while (i < tuple.size() && (std::isspace(static_cast<unsigned char>(tuple[i])) || tuple[i] == ',')) ++i;
    if (i >= tuple.size() || tuple[i] == ')') break;
    if (!std::isdigit(static_cast<unsigned char>(tuple[i]))) throw IoError("npy shape is not a tuple of integers");
    std::size_t value = 0;
    while (i < tuple.size() && std::isdigit(static_cast<unsigned char>(tuple[i])))
      value = value * 10 + static_cast<std::size_t>(tuple[i++] - '0');
    shape.push_back(value);
  }
  return shape;
}

inline DType parse_descr(const std::string& d) {
  if (d == "|u1" || d == "<u1" || d == "u1" || d == "|b1") return DType::u8;
  if (d == "<f4") return DType::f4;
  if (d == "<f8") return DType::f8;
  throw IoError("unsupported npy dtype '" + d + "'");
}

}  // namespace detail

inline Array read(std::istream& is) {
  char magic[kMagicLen];
  if (!is.read(magic, kMagicLen) || std::memcmp(magic, kMagic, kMagicLen) != 0)
    throw IoError("not an npy file (bad magic)");
  unsigned char version[2];
  if (!is.read(reinterpret_cast<char*>(version), 2)) throw IoError("truncated npy preamble");
  std::size_t header_len = 0;
  if (version[0] == 1) {
    unsigned char len[2];
    if (!is.read(reinterpret_cast<char*>(len), 2)) throw IoError("truncated npy preamble");
    header_len = len[0] | (std::size_t{len[1]} << 8);
  } else if (version[0] == 2 || version[0] == 3) {
    unsigned char len[4];
    if (!is.read(reinterpret_cast<char*>(len), 4)) throw IoError("truncated npy preamble");
    header_len = len[0] | (std::size_t{len[1]} << 8) | (std::size_t{len[2]} << 16) | (std::size_t{len[3]} << 24);
  } else {
    throw IoError("unsupported npy version " + std::to_string(version[0]));
  }
  std::string dict(header_len, '\0');
  if (!is.read(dict.data(), static_cast<std::streamsize>(header_len))) throw IoError("truncated npy header");

  Array array;
  array.dtype = detail::parse_descr(detail::dict_value(dict, "descr"));
  if (detail::dict_value(dict, "fortran_order") != "False") throw IoError("Fortran-ordered npy files are not supported");
  array.shape = detail::parse_shape(detail::dict_value(dict, "shape"));
  const std::size_t bytes = array.size() * item_size(array.dtype);
  array.payload.resize(bytes);
  if (!is.read(reinterpret_cast<char*>(array.payload.data()), static_cast<std::streamsize>(bytes)))
    throw IoError("npy payload shorter than its declared shape " + to_string(array.shape));
  if (is.peek() != std::char_traits<char>::eof()) throw IoError("npy payload longer than its declared shape");
  return array;
}

inline Array load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read(in);
}

/// Typed view of an array; the dtype must match exactly.
template <class T>
Tensor<T> to_tensor(const Array& array) {
  if (array.dtype != dtype_of<T>::value)
    throw InvalidInput(std::string("npy dtype is ") + descr(array.dtype) + ", expected " + descr(dtype_of<T>::value));
  std::vector<T> data(array.size());
  std::memcpy(data.data(), array.payload.data(), array.payload.size());
  return Tensor<T>(array.shape, std::move(data));
}

/// Any supported dtype widened to double.
inline Tensor<double> to_double(const Array& array) {
  switch (array.dtype) {
    case DType::u8: {
      auto t = to_tensor<std::uint8_t>(array);
      return Tensor<double>(t.shape(), std::vector<double>(t.begin(), t.end()));
    }
    case DType::f4: {
      auto t = to_tensor<float>(array);
      return Tensor<double>(t.shape(), std::vector<double>(t.begin(), t.end()));
    }
    case DType::f8:
      return to_tensor<double>(array);
  }
  throw InvalidInput("unknown dtype");
}

}  // namespace fmix::npy
