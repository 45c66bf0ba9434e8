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

#include "cli/app.hpp"

#include <cerrno>
#include <cstdlib>
#include <exception>
#include <map>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "fmix/version.hpp"

namespace fmix::cli {

namespace {

std::uint64_t seed_from_env() {
  const char* text = std::getenv("FMIX_SEED");
  if (text == nullptr || *text == '\0') return 0;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (errno != 0 || *end != '\0' || text[0] == '-') throw UsageError("FMIX_SEED must be an unsigned integer");
  return v;
}

const std::map<std::string, Format> kFormats{
    {"npy", Format::npy}, {"pgm", Format::pgm}, {"png", Format::png}, {"csv", Format::csv}};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"FMix mask generation and mixed-sample augmentation toolkit", "fmix"};
  app.set_version_flag("--version", std::string("fmix ") + kVersion);
  app.require_subcommand(1);

  RunConfig config;
  std::string dims_text;
  std::string format_text;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "RNG seed (default: $FMIX_SEED, else 0)");
  };
  auto add_mixing = [&](CLI::App* sub) {
    sub->add_option("--alpha", config.alpha, "Beta(alpha, alpha) parameter for lambda")->capture_default_str();
    sub->add_option("--delta", config.delta, "decay power of the low-pass filter")->capture_default_str();
    sub->add_option("--lambda", lambda, "fixed mixing coefficient; overrides Beta sampling");
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format_text, "output format")
        ->check(CLI::IsMember({"npy", "pgm", "png", "csv"}));
  };

  auto* gen = app.add_subcommand("gen-mask", "generate a stack of FMix or CutMix masks");
  gen->add_option("--dims", dims_text, "mask dimensions, e.g. 64, 32x32, 16x16x16")->required();
  gen->add_option("--count", config.count, "number of masks")->capture_default_str();
  gen->add_option("--family", config.family, "fmix or cutmix")->capture_default_str();
  gen->add_option("--out", config.output_path, "output .npy path (sidecar .json written alongside)")->required();
  gen->add_flag("--grey", config.grey, "write the float32 grey fields instead of masks");
  add_mixing(gen);
  add_seed(gen);

  auto* mix = app.add_subcommand("mix", "mix two equally shaped batches item by item");
  mix->add_option("--a", config.input, "first input .npy (leading axis = batch)")->required();
  mix->add_option("--b", config.input_b, "second input .npy")->required();
  mix->add_option("--family", config.family, "fmix, mixup or cutmix")->capture_default_str();
  mix->add_option("--spatial-rank", config.spatial_rank, "trailing axes masked (0 = all item axes)");
  mix->add_option("--out", config.output_path, "output .npy path")->required();
  add_mixing(mix);
  add_seed(mix);

  auto* stats = app.add_subcommand("stats", "per-item diagnostics of a mask or grey-field file as CSV");
  stats->add_option("--in", config.input, "input .npy")->required();
  stats->add_option("--out", config.output_path, "output .csv (default: stdout)");

  auto* vis = app.add_subcommand("visualize", "render 2D masks or images as 8-bit greyscale");
  vis->add_option("--in", config.input, "input .npy of shape [H, W] or [N, H, W]")->required();
  vis->add_option("--out", config.output_path, "output image path; stacks get _000, _001, ... suffixes")->required();

  for (auto* sub : {gen, mix, stats, vis}) add_format(sub);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "fmix: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    CLI::App* selected = app.get_subcommands().front();
    const std::string name = selected->get_name();
    if (selected->count("--format") == 0) format_text = name == "stats" ? "csv" : name == "visualize" ? "pgm" : "npy";
    config.format = kFormats.at(format_text);
    config.seed = seed ? *seed : seed_from_env();
    config.lambda = lambda;

    if (name == "gen-mask") {
      config.command = Command::gen_mask;
      config.dims = parse_dims(dims_text);
      cmd_gen_mask(config);
    } else if (name == "mix") {
      config.command = Command::mix;
      cmd_mix(config);
    } else if (name == "stats") {
      config.command = Command::stats;
      cmd_stats(config, out);
    } else {
      config.command = Command::visualize;
      cmd_visualize(config);
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "fmix: usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "fmix: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "fmix: invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "fmix: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace fmix::cli
