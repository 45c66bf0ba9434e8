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

#include "cli/staged_output.hpp"

#include <fstream>
#include <system_error>

#include <unistd.h>

#include "fmix/error.hpp"

namespace fmix::cli {

namespace fs = std::filesystem;

StagedOutputs::~StagedOutputs() {
  for (const auto& [temp, destination] : staged_) {
    std::error_code ec;
    fs::remove(temp, ec);
  }
}

void StagedOutputs::add(const fs::path& destination, std::string_view bytes) {
  const fs::path temp = destination.parent_path() /
                        ("." + destination.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + destination.string());
    staged_.emplace_back(temp, destination);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("short write to " + destination.string());
  }
}

void StagedOutputs::commit() {
  for (const auto& [temp, destination] : staged_) {
    std::error_code ec;
    fs::rename(temp, destination, ec);
    if (ec) throw IoError("cannot move output into place at " + destination.string() + ": " + ec.message());
  }
  staged_.clear();
}

}  // namespace fmix::cli
