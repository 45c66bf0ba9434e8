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
#include <span>
#include <string>

namespace fmix::cli {

/// Binary greyscale PGM: "P5\n<width> <height>\n255\n" then width*height bytes.
std::string encode_pgm(std::span<const std::uint8_t> pixels, std::size_t width, std::size_t height);

/// 8-bit greyscale PNG, no filtering, zlib-compressed IDAT.
std::string encode_png(std::span<const std::uint8_t> pixels, std::size_t width, std::size_t height);

}  // namespace fmix::cli
