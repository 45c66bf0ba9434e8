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

#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cli/image_io.hpp"
#include "cli/staged_output.hpp"
#include "fmix/diagnostics.hpp"
#include "fmix/masks.hpp"
#include "fmix/mixing.hpp"
#include "fmix/npy.hpp"
#include "fmix/version.hpp"

namespace fmix::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kRngScheme = "philox4x32-10, key=seed, item i uses stream i";

std::string metadata_bytes(const json& meta) { return meta.dump(2) + "\n"; }

json base_metadata(const char* command, const RunConfig& config) {
  json meta;
  meta["command"] = command;
  meta["seed"] = config.seed;
  meta["rng"] = kRngScheme;
  meta["tool"] = "fmix";
  meta["version"] = kVersion;
  return meta;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Items along the leading axis; a rank-1 file is a single item.
std::pair<std::size_t, Shape> split_items(const Shape& shape) {
  if (shape.empty()) throw InvalidShape("tensor file has no axes");
  if (shape.size() == 1) return {1, shape};
  return {shape[0], Shape(shape.begin() + 1, shape.end())};
}

template <class T>
Tensor<T> item(const Tensor<T>& stack, std::size_t count, std::size_t index) {
  if (count == 1 && stack.rank() == 1) return stack;
  return stack.slice(index);
}

}  // namespace

Shape parse_dims(const std::string& text) {
  Shape dims;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = std::min(text.find_first_of("xX", pos), text.size());
    const std::string part = text.substr(pos, next - pos);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos || part.size() > 9)
      throw UsageError("--dims expects positive integers joined by 'x' (e.g. 32x32), got '" + text + "'");
    dims.push_back(std::stoul(part));
    pos = next + 1;
  }
  try {
    validate_dims(dims);
  } catch (const InvalidShape& e) {
    throw UsageError(std::string("--dims: ") + e.what());
  }
  return dims;
}

fs::path sibling_path(const fs::path& path, const std::string& suffix) {
  fs::path out = path;
  out.replace_extension();
  out += suffix;
  return out;
}

void cmd_gen_mask(const RunConfig& config) {
  if (config.format != Format::npy) throw UsageError("gen-mask writes npy only");
  if (config.count < 1) throw UsageError("--count must be >= 1");
  if (config.output_path.empty()) throw UsageError("--out is required");
  MaskConfig mask_config{config.dims, config.alpha, config.delta, MaskFamily::fmix};
  if (config.family == "cutmix") {
    if (config.dims.size() != 2) throw UsageError("cutmix masks are 2D only, got --dims " + to_string(config.dims));
    if (config.grey) throw UsageError("--grey applies to the fmix family only");
    mask_config.family = MaskFamily::cutmix;
  } else if (config.family != "fmix") {
    throw UsageError("gen-mask --family must be fmix or cutmix");
  }
  if (config.lambda) check_lambda(*config.lambda);
  detail::check_shape_parameter(config.alpha, "alpha");
  if (!std::isfinite(config.delta) || config.delta < 0.0) throw InvalidParameter("delta must be finite and >= 0");

  std::vector<double> lambdas(config.count);
  std::vector<double> means(config.count);
  std::string payload;
  if (config.grey) {
    std::vector<Tensor<float>> fields;
    for (std::size_t i = 0; i < config.count; ++i) {
      Rng rng(config.seed, i);
      lambdas[i] = config.lambda ? *config.lambda : sample_lambda(rng, config.alpha);
      const RealField g = sample_grey_field(rng, config.dims, config.delta);
      fields.emplace_back(g.shape(), std::vector<float>(g.begin(), g.end()));
      means[i] = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    }
    payload = npy::encode(stack<float>(fields));
  } else {
    std::vector<Tensor<std::uint8_t>> masks;
    for (std::size_t i = 0; i < config.count; ++i) {
      Rng rng(config.seed, i);
      auto generated = generate_mask(rng, mask_config, config.lambda);
      lambdas[i] = generated.lambda;
      means[i] = generated.mask.mean();
      masks.push_back(std::move(generated.mask.data));
    }
    payload = npy::encode(stack<std::uint8_t>(masks));
  }

  json meta = base_metadata("gen-mask", config);
  meta["alpha"] = config.alpha;
  meta["delta"] = config.delta;
  meta["family"] = config.family;
  meta["dims"] = config.dims;
  meta["count"] = config.count;
  meta["grey"] = config.grey;
  meta["dtype"] = config.grey ? "float32" : "uint8";
  meta["lambda_fixed"] = config.lambda ? json(*config.lambda) : json(nullptr);
  meta["lambdas"] = lambdas;
  meta["means"] = means;

  StagedOutputs outputs;
  outputs.add(config.output_path, payload);
  outputs.add(sibling_path(config.output_path, ".json"), metadata_bytes(meta));
  outputs.commit();
}

namespace {

template <class T>
void mix_files(const RunConfig& config, MixFamily family, const npy::Array& file_a, const npy::Array& file_b) {
  const auto a = npy::to_tensor<T>(file_a);
  const auto b = npy::to_tensor<T>(file_b);
  PolicyConfig policy;
  policy.alpha = config.alpha;
  policy.delta = config.delta;
  policy.spatial_rank = config.spatial_rank;
  policy.fixed_lambda = config.lambda;
  Rng rng(config.seed, 0);
  PairMix<T> mixed = mix_pairs(rng, family, a, b, policy);

  json meta = base_metadata("mix", config);
  meta["rng"] = "philox4x32-10, key=seed, stream 0";
  meta["alpha"] = config.alpha;
  meta["delta"] = config.delta;
  meta["family"] = to_string(family);
  meta["spatial_rank"] = config.spatial_rank;
  meta["shape"] = a.shape();
  meta["dtype"] = file_a.dtype == npy::DType::u8 ? "uint8" : "float32";
  meta["inputs"] = {config.input.string(), config.input_b.string()};
  meta["lambda_fixed"] = config.lambda ? json(*config.lambda) : json(nullptr);
  meta["lambda_sampled"] = mixed.sampled_lambdas.front();
  meta["lambda"] = mixed.lambdas.front();

  StagedOutputs outputs;
  outputs.add(config.output_path, npy::encode(mixed.inputs));
  if (!mixed.masks.empty()) {
    std::vector<Tensor<std::uint8_t>> masks;
    for (auto& m : mixed.masks) masks.push_back(std::move(m.data));
    const fs::path mask_path = sibling_path(config.output_path, ".masks.npy");
    meta["masks"] = mask_path.filename().string();
    outputs.add(mask_path, npy::encode(stack<std::uint8_t>(masks)));
  }
  outputs.add(sibling_path(config.output_path, ".json"), metadata_bytes(meta));
  outputs.commit();
}

}  // namespace

void cmd_mix(const RunConfig& config) {
  if (config.format != Format::npy) throw UsageError("mix writes npy only");
  if (config.output_path.empty()) throw UsageError("--out is required");
  MixFamily family;
  if (config.family == "fmix")
    family = MixFamily::fmix;
  else if (config.family == "mixup")
    family = MixFamily::mixup;
  else if (config.family == "cutmix")
    family = MixFamily::cutmix;
  else
    throw UsageError("mix --family must be fmix, mixup or cutmix");
  if (config.lambda) check_lambda(*config.lambda);
  detail::check_shape_parameter(config.alpha, "alpha");

  const auto file_a = npy::load(config.input);
  const auto file_b = npy::load(config.input_b);
  if (file_a.dtype != file_b.dtype) throw InvalidInput("inputs have different dtypes");
  if (file_a.shape != file_b.shape)
    throw InvalidShape("input shapes differ: " + to_string(file_a.shape) + " vs " + to_string(file_b.shape));
  switch (file_a.dtype) {
    case npy::DType::u8:
      return mix_files<std::uint8_t>(config, family, file_a, file_b);
    case npy::DType::f4:
      return mix_files<float>(config, family, file_a, file_b);
    case npy::DType::f8:
      break;
  }
  throw InvalidInput("mix accepts uint8 or float32 files");
}

namespace {

std::string mask_stats_csv(const Tensor<std::uint8_t>& data) {
  const auto [count, dims] = split_items(data.shape());
  validate_dims(dims);
  for (auto v : data)
    if (v > 1) throw InvalidInput("uint8 file is not a {0,1} mask stack");
  std::string csv = "item,mean,ones_count,transition_fraction\n";
  double sum_mean = 0, sum_ones = 0, sum_tf = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const BinaryMask mask{item(data, count, i), 0.0};
    const double mean = mask.mean();
    const double tf = transition_fraction(mask);
    sum_mean += mean;
    sum_ones += static_cast<double>(mask.ones());
    sum_tf += tf;
    csv += std::to_string(i) + "," + format_number(mean) + "," + std::to_string(mask.ones()) + "," +
           format_number(tf) + "\n";
  }
  const double n = static_cast<double>(count);
  csv += "all," + format_number(sum_mean / n) + "," + format_number(sum_ones / n) + "," + format_number(sum_tf / n) +
         "\n";
  return csv;
}

std::string grey_stats_csv(const Tensor<double>& data) {
  const auto [count, dims] = split_items(data.shape());
  validate_dims(dims);
  for (double v : data)
    if (!std::isfinite(v)) throw InvalidInput("grey field contains non-finite values");
  std::vector<RadialSpectrum> spectra;
  std::vector<double> means;
  for (std::size_t i = 0; i < count; ++i) {
    const RealField field = item(data, count, i);
    means.push_back(std::accumulate(field.begin(), field.end(), 0.0) / static_cast<double>(field.size()));
    spectra.push_back(radial_power_spectrum(field));
  }
  const std::size_t bins = spectra.front().power.size();
  std::string csv = "item,mean,spectral_slope";
  for (std::size_t r = 0; r < bins; ++r) csv += ",power_" + std::to_string(r);
  csv += "\n";

  auto slope_text = [](const RadialSpectrum& s) {
    try {
      return format_number(spectral_slope(s));
    } catch (const InvalidShape&) {
      return std::string("nan");
    }
  };
  RadialSpectrum average = spectra.front();
  std::fill(average.power.begin(), average.power.end(), 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    csv += std::to_string(i) + "," + format_number(means[i]) + "," + slope_text(spectra[i]);
    for (std::size_t r = 0; r < bins; ++r) {
      csv += "," + format_number(spectra[i].power[r]);
      average.power[r] += spectra[i].power[r] / static_cast<double>(count);
    }
    csv += "\n";
  }
  csv += "all," + format_number(std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(count)) + "," +
         slope_text(average);
  for (double p : average.power) csv += "," + format_number(p);
  return csv + "\n";
}

}  // namespace

void cmd_stats(const RunConfig& config, std::ostream& out) {
  if (config.format != Format::csv) throw UsageError("stats writes csv only");
  const auto array = npy::load(config.input);
  const std::string csv = array.dtype == npy::DType::u8 ? mask_stats_csv(npy::to_tensor<std::uint8_t>(array))
                                                        : grey_stats_csv(npy::to_double(array));
  if (config.output_path.empty()) {
    out << csv;
    return;
  }
  StagedOutputs outputs;
  outputs.add(config.output_path, csv);
  outputs.commit();
}

namespace {

std::vector<std::uint8_t> to_pixels(const Tensor<double>& image, bool is_mask) {
  std::vector<std::uint8_t> pixels(image.size());
  if (is_mask) {
    std::transform(image.begin(), image.end(), pixels.begin(), [](double v) { return v != 0.0 ? 255 : 0; });
    return pixels;
  }
  const auto [lo, hi] = std::minmax_element(image.begin(), image.end());
  const double range = *hi - *lo;
  for (std::size_t i = 0; i < image.size(); ++i)
    pixels[i] = range > 0.0 ? static_cast<std::uint8_t>(std::lround((image[i] - *lo) / range * 255.0)) : 0;
  return pixels;
}

}  // namespace

void cmd_visualize(const RunConfig& config) {
  if (config.format != Format::pgm && config.format != Format::png) throw UsageError("visualize writes pgm or png");
  if (config.output_path.empty()) throw UsageError("--out is required");
  const auto array = npy::load(config.input);
  const auto data = npy::to_double(array);
  if (data.rank() != 2 && data.rank() != 3)
    throw UsageError("visualize needs a 2D image or a stack of 2D images, got shape " + to_string(data.shape()));
  for (double v : data)
    if (!std::isfinite(v)) throw InvalidInput("image contains non-finite values");
  const bool is_mask = array.dtype == npy::DType::u8 &&
                       std::all_of(data.begin(), data.end(), [](double v) { return v == 0.0 || v == 1.0; });

  const std::size_t count = data.rank() == 3 ? data.shape()[0] : 1;
  const std::string ext = config.format == Format::pgm ? ".pgm" : ".png";
  StagedOutputs outputs;
  for (std::size_t i = 0; i < count; ++i) {
    const Tensor<double> image = data.rank() == 3 ? data.slice(i) : data;
    const std::size_t height = image.shape()[0];
    const std::size_t width = image.shape()[1];
    const auto pixels = to_pixels(image, is_mask);
    fs::path path = config.output_path;
    if (count > 1) {
      char suffix[32];
      std::snprintf(suffix, sizeof suffix, "_%03zu", i);
      path = sibling_path(config.output_path, suffix + ext);
    }
    outputs.add(path, config.format == Format::pgm ? encode_pgm(pixels, width, height)
                                                   : encode_png(pixels, width, height));
  }
  outputs.commit();
}

}  // namespace fmix::cli
