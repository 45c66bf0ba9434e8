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

#include "cli/image_io.hpp"

#include <zlib.h>

#include <vector>

#include "fmix/error.hpp"

namespace fmix::cli {

std::string encode_pgm(std::span<const std::uint8_t> pixels, std::size_t width, std::size_t height) {
  if (pixels.size() != width * height) throw InvalidShape("pixel count does not match image size");
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
  return out;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  out += static_cast<char>(v >> 24);
  out += static_cast<char>(v >> 16);
  out += static_cast<char>(v >> 8);
  out += static_cast<char>(v);
}

void put_chunk(std::string& out, const char* type, const std::string& body) {
  put_u32(out, static_cast<std::uint32_t>(body.size()));
  std::string typed(type, 4);
  typed += body;
  out += typed;
  const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(typed.data()), static_cast<uInt>(typed.size()));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

std::string encode_png(std::span<const std::uint8_t> pixels, std::size_t width, std::size_t height) {
  if (pixels.size() != width * height) throw InvalidShape("pixel count does not match image size");
  std::string raw;
  raw.reserve(height * (width + 1));
  for (std::size_t row = 0; row < height; ++row) {
    raw += '\0';  // filter type: none
    raw.append(reinterpret_cast<const char*>(pixels.data() + row * width), width);
  }
  uLongf packed_len = compressBound(static_cast<uLong>(raw.size()));
  std::vector<Bytef> packed(packed_len);
  if (compress2(packed.data(), &packed_len, reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                Z_BEST_COMPRESSION) != Z_OK)
    throw IoError("zlib compression failed");

  std::string out("\x89PNG\r\n\x1a\n", 8);
  std::string ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(width));
  put_u32(ihdr, static_cast<std::uint32_t>(height));
  ihdr += '\x08';  // bit depth
  ihdr += '\x00';  // greyscale
  ihdr += '\x00';  // deflate
  ihdr += '\x00';  // adaptive filtering
  ihdr += '\x00';  // no interlace
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", std::string(reinterpret_cast<const char*>(packed.data()), packed_len));
  put_chunk(out, "IEND", "");
  return out;
}

}  // namespace fmix::cli
