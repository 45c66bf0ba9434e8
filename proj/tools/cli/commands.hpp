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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "fmix/error.hpp"
#include "fmix/masks.hpp"
#include "fmix/tensor.hpp"

namespace fmix::cli {

/// Bad flags or flag combinations; reported with kExitUsage.
class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Command { gen_mask, mix, stats, visualize };
enum class Format { npy, pgm, png, csv };

struct RunConfig {
  Command command = Command::gen_mask;
  Shape dims;
  std::size_t count = 1;
  std::string family = "fmix";
  double alpha = kDefaultAlpha;
  double delta = kDefaultDelta;
  std::optional<double> lambda;
  std::uint64_t seed = 0;
  std::filesystem::path output_path;
  Format format = Format::npy;
  /// gen-mask: write the float32 grey fields instead of thresholded masks.
  bool grey = false;
  /// mix: trailing axes of each item treated as spatial (0 = all).
  std::size_t spatial_rank = 0;
  std::filesystem::path input;
  std::filesystem::path input_b;
};

/// "32x32" -> {32, 32}. Throws UsageError.
Shape parse_dims(const std::string& text);

/// `path` with its extension replaced by `ext` (".json", ".masks.npy", ...).
std::filesystem::path sibling_path(const std::filesystem::path& path, const std::string& suffix);

void cmd_gen_mask(const RunConfig& config);
void cmd_mix(const RunConfig& config);
/// Writes CSV to config.output_path, or to `out` when no path is set.
void cmd_stats(const RunConfig& config, std::ostream& out);
void cmd_visualize(const RunConfig& config);

}  // namespace fmix::cli
