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
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "fmix/error.hpp"
#include "fmix/masks.hpp"
#include "fmix/rng.hpp"
#include "fmix/sampling.hpp"
#include "fmix/tensor.hpp"

namespace fmix {

enum class MixFamily { fmix, mixup, cutmix };

inline const char* to_string(MixFamily family) {
  switch (family) {
    case MixFamily::fmix: return "fmix";
    case MixFamily::mixup: return "mixup";
    case MixFamily::cutmix: return "cutmix";
  }
  return "?";
}

/// lambda * x1 + (1 - lambda) * x2, evaluated in double.
template <class T>
Tensor<T> mix_interpolate(const Tensor<T>& x1, const Tensor<T>& x2, double lambda) {
  static_assert(std::is_floating_point_v<T>, "interpolation needs a floating-point element type");
  check_lambda(lambda);
  if (x1.shape() != x2.shape())
    throw InvalidShape("mix_interpolate: " + to_string(x1.shape()) + " vs " + to_string(x2.shape()));
  Tensor<T> out(x1.shape());
  const double rest = 1.0 - lambda;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<T>(lambda * static_cast<double>(x1[i]) + rest * static_cast<double>(x2[i]));
  return out;
}

/// m * x1 + (1 - m) * x2 as a pure selection. The mask covers the trailing
/// axes of the inputs; leading axes (channels, batch) are broadcast over.
template <class T>
Tensor<T> mix_mask(const Tensor<T>& x1, const Tensor<T>& x2, const BinaryMask& mask) {
  if (x1.shape() != x2.shape())
    throw InvalidShape("mix_mask: " + to_string(x1.shape()) + " vs " + to_string(x2.shape()));
  const Shape& md = mask.dims();
  const Shape& xd = x1.shape();
  if (md.size() > xd.size() || !std::equal(md.begin(), md.end(), xd.end() - static_cast<std::ptrdiff_t>(md.size())))
    throw InvalidShape("mask " + to_string(md) + " does not match trailing axes of " + to_string(xd));
  Tensor<T> out(xd);
  const std::size_t plane = mask.size();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mask.data[i % plane] ? x1[i] : x2[i];
  return out;
}

/// Uniform random permutation of [0, size) by Fisher-Yates.
inline std::vector<std::size_t> pair_batch(Rng& rng, std::size_t size) {
  if (size < 1) throw InvalidParameter("batch size must be >= 1");
  std::vector<std::size_t> perm(size);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = size - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  return perm;
}

/// lambda * onehot(y1) + (1 - lambda) * onehot(y2).
inline std::vector<double> mixed_targets(std::size_t y1, std::size_t y2, double lambda, std::size_t num_classes) {
  check_lambda(lambda);
  if (y1 >= num_classes || y2 >= num_classes)
    throw InvalidParameter("class index out of range for " + std::to_string(num_classes) + " classes");
  std::vector<double> out(num_classes, 0.0);
  out[y1] += lambda;
  out[y2] += 1.0 - lambda;
  return out;
}

inline constexpr double kLogProbTolerance = 1e-6;

/// -lambda * logp[y1] - (1 - lambda) * logp[y2]. `logprobs` must be a
/// normalised log-probability vector (entries may be -inf, never NaN or +inf).
inline double mixed_cross_entropy(std::span<const double> logprobs, std::size_t y1, std::size_t y2, double lambda) {
  check_lambda(lambda);
  if (logprobs.empty()) throw InvalidInput("empty log-probability vector");
  if (y1 >= logprobs.size() || y2 >= logprobs.size())
    throw InvalidParameter("class index out of range for " + std::to_string(logprobs.size()) + " classes");
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : logprobs) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
      throw InvalidInput("log-probabilities must not be NaN or +inf");
    peak = std::max(peak, v);
  }
  if (!std::isfinite(peak)) throw InvalidInput("log-probabilities are all -inf");
  double sum = 0.0;
  for (double v : logprobs) sum += std::exp(v - peak);
  const double lse = peak + std::log(sum);
  if (std::abs(lse) > kLogProbTolerance)
    throw InvalidInput("log-probabilities do not normalise (logsumexp = " + std::to_string(lse) + ")");
  double loss = 0.0;
  if (lambda > 0.0) loss -= lambda * logprobs[y1];
  if (lambda < 1.0) loss -= (1.0 - lambda) * logprobs[y2];
  return loss;
}

/// Inputs of shape [B, ...features] with one class index per row.
template <class T>
struct Batch {
  Tensor<T> inputs;
  std::vector<std::size_t> targets;
  std::size_t num_classes = 0;

  std::size_t size() const noexcept { return targets.size(); }

  void validate() const {
    if (inputs.rank() < 2) throw InvalidShape("batch inputs need a batch axis and feature axes");
    if (targets.empty() || inputs.shape()[0] != targets.size())
      throw InvalidShape("batch has " + std::to_string(inputs.shape()[0]) + " rows but " +
                         std::to_string(targets.size()) + " targets");
    if (num_classes == 0) throw InvalidParameter("num_classes must be positive");
    for (std::size_t y : targets)
      if (y >= num_classes) throw InvalidParameter("target " + std::to_string(y) + " out of range");
  }
};

enum class Alternation { round_robin, coin_flip };

struct PolicyConfig {
  double alpha = kDefaultAlpha;
  double delta = kDefaultDelta;
  /// Trailing feature axes treated as spatial by mask families; 0 means all feature axes.
  std::size_t spatial_rank = 0;
  /// Draw a separate lambda for every pair instead of one per batch.
  bool per_sample_lambda = false;
  /// Reuse one FMix/CutMix mask for the whole batch instead of a fresh mask per pair.
  bool shared_mask = false;
  Alternation alternation = Alternation::round_robin;
  /// Overrides Beta sampling when set.
  std::optional<double> fixed_lambda;
};

/// Result of mixing row i of `a` with row i of `b` for every i.
template <class T>
struct PairMix {
  Tensor<T> inputs;
  MixFamily family = MixFamily::mixup;
  /// Weight carried by `a` per row; for mask families this is the mask's realised target.
  std::vector<double> lambdas;
  /// Coefficients drawn before any realisation correction (CutMix side rounding).
  std::vector<double> sampled_lambdas;
  /// One mask per row (or a single shared mask); empty for mixup.
  std::vector<BinaryMask> masks;
};

/// Mixed batch with targets kept as (targets_a, targets_b, lambda) for the
/// interpolated cross-entropy. targets_b[i] == targets_a[perm[i]].
template <class T>
struct MixedBatch {
  Tensor<T> inputs;
  std::vector<std::size_t> targets_a;
  std::vector<std::size_t> targets_b;
  double lambda = 1.0;
  std::vector<std::size_t> perm;
  MixFamily family = MixFamily::mixup;
  std::vector<double> sample_lambdas;
  std::vector<BinaryMask> masks;

  /// Per-row loss weight on targets_a.
  double weight(std::size_t row) const { return sample_lambdas.empty() ? lambda : sample_lambdas[row]; }
};

namespace detail {

inline Shape spatial_dims(const Shape& row_shape, std::size_t spatial_rank) {
  const std::size_t rank = spatial_rank == 0 ? row_shape.size() : spatial_rank;
  if (rank > row_shape.size())
    throw InvalidShape("spatial rank " + std::to_string(rank) + " exceeds feature rank of " + to_string(row_shape));
  Shape dims(row_shape.end() - static_cast<std::ptrdiff_t>(rank), row_shape.end());
  validate_dims(dims);
  return dims;
}

inline void check_family_shape(MixFamily family, const Shape& spatial) {
  if (family == MixFamily::cutmix && spatial.size() != 2)
    throw InvalidShape("CutMix needs exactly two spatial axes, got " + to_string(spatial));
}

}  // namespace detail

/// Mix row i of `a` with row i of `b` under `family`. Draw order from rng:
/// the batch lambda (unless per-sample or fixed), then per row its lambda
/// (per-sample mode) followed by its mask.
template <class T>
PairMix<T> mix_pairs(Rng& rng, MixFamily family, const Tensor<T>& a, const Tensor<T>& b, const PolicyConfig& config) {
  if (a.shape() != b.shape()) throw InvalidShape("mix_pairs: " + to_string(a.shape()) + " vs " + to_string(b.shape()));
  if (a.rank() < 2) throw InvalidShape("inputs need a batch axis and at least one feature axis");
  if (family == MixFamily::mixup && !std::is_floating_point_v<T>)
    throw InvalidParameter("mixup interpolation requires floating-point inputs");
  if (config.fixed_lambda) check_lambda(*config.fixed_lambda);
  if (config.per_sample_lambda && config.shared_mask)
    throw InvalidParameter("a shared mask cannot carry per-sample lambdas");

  const std::size_t rows = a.shape()[0];
  const Shape row_shape(a.shape().begin() + 1, a.shape().end());
  const bool masked = family != MixFamily::mixup;
  Shape spatial;
  if (masked) {
    spatial = detail::spatial_dims(row_shape, config.spatial_rank);
    detail::check_family_shape(family, spatial);
  }

  auto draw_lambda = [&] { return config.fixed_lambda ? *config.fixed_lambda : sample_lambda(rng, config.alpha); };
  auto draw_mask = [&](double lambda) {
    return family == MixFamily::fmix ? fmix_mask(rng, spatial, lambda, config.delta) : cutmix_mask(rng, spatial, lambda);
  };
  auto realised = [&](double lambda) { return family == MixFamily::cutmix ? cutmix_mean(spatial, lambda) : lambda; };

  PairMix<T> out;
  out.family = family;
  out.inputs = Tensor<T>(a.shape());
  const std::size_t row_size = element_count(row_shape);
  const double batch_lambda = config.per_sample_lambda ? 0.0 : draw_lambda();

  if (masked && config.shared_mask) out.masks.push_back(draw_mask(batch_lambda));
  for (std::size_t row = 0; row < rows; ++row) {
    const double lambda = config.per_sample_lambda ? draw_lambda() : batch_lambda;
    out.sampled_lambdas.push_back(lambda);
    out.lambdas.push_back(realised(lambda));
    const Tensor<T> xa = a.slice(row);
    const Tensor<T> xb = b.slice(row);
    Tensor<T> mixed;
    if (!masked) {
      if constexpr (std::is_floating_point_v<T>) mixed = mix_interpolate(xa, xb, lambda);
    } else if (config.shared_mask) {
      mixed = mix_mask(xa, xb, out.masks.front());
    } else {
      out.masks.push_back(draw_mask(lambda));
      mixed = mix_mask(xa, xb, out.masks.back());
    }
    std::copy(mixed.begin(), mixed.end(), out.inputs.begin() + static_cast<std::ptrdiff_t>(row * row_size));
  }
  return out;
}

enum class PolicyKind { fmix, mixup, cutmix, alternate };

/// Batch mixing policy. `alternate` switches between FMix and MixUp on
/// successive steps (round robin starting with FMix, or a fair coin per step).
class MixPolicy {
 public:
  explicit MixPolicy(PolicyKind kind, PolicyConfig config = {}) : kind_(kind), config_(std::move(config)) {
    detail::check_shape_parameter(config_.alpha, "alpha");
    if (!std::isfinite(config_.delta) || config_.delta < 0.0) throw InvalidParameter("delta must be finite and >= 0");
  }

  PolicyKind kind() const noexcept { return kind_; }
  const PolicyConfig& config() const noexcept { return config_; }
  std::size_t steps() const noexcept { return steps_; }

  /// Family for the next step. Consumes one uniform from rng only in coin-flip alternation.
  MixFamily next_family(Rng& rng) {
    const std::size_t step = steps_++;
    switch (kind_) {
      case PolicyKind::fmix: return MixFamily::fmix;
      case PolicyKind::mixup: return MixFamily::mixup;
      case PolicyKind::cutmix: return MixFamily::cutmix;
      case PolicyKind::alternate:
        if (config_.alternation == Alternation::coin_flip)
          return rng.uniform() < 0.5 ? MixFamily::fmix : MixFamily::mixup;
        return step % 2 == 0 ? MixFamily::fmix : MixFamily::mixup;
    }
    throw InvalidParameter("unknown policy");
  }

  /// Pair the batch with a random permutation of itself and mix every pair.
  template <class T>
  MixedBatch<T> step(Rng& rng, const Batch<T>& batch) {
    batch.validate();
    const MixFamily family = next_family(rng);
    // One lambda per batch is drawn before the permutation.
    PolicyConfig cfg = config_;
    if (!cfg.per_sample_lambda && !cfg.fixed_lambda) cfg.fixed_lambda = sample_lambda(rng, cfg.alpha);

    MixedBatch<T> out;
    out.perm = pair_batch(rng, batch.size());
    Tensor<T> partner(batch.inputs.shape());
    const std::size_t row_size = batch.inputs.size() / batch.size();
    for (std::size_t i = 0; i < batch.size(); ++i)
      std::copy_n(batch.inputs.begin() + static_cast<std::ptrdiff_t>(out.perm[i] * row_size), row_size,
                  partner.begin() + static_cast<std::ptrdiff_t>(i * row_size));

    PairMix<T> mixed = mix_pairs(rng, family, batch.inputs, partner, cfg);

    out.inputs = std::move(mixed.inputs);
    out.family = family;
    out.targets_a = batch.targets;
    out.targets_b.resize(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) out.targets_b[i] = batch.targets[out.perm[i]];
    if (cfg.per_sample_lambda) {
      out.lambda = std::accumulate(mixed.lambdas.begin(), mixed.lambdas.end(), 0.0) /
                   static_cast<double>(mixed.lambdas.size());
      out.sample_lambdas = std::move(mixed.lambdas);
    } else {
      out.lambda = mixed.lambdas.front();
    }
    out.masks = std::move(mixed.masks);
    return out;
  }

 private:
  PolicyKind kind_;
  PolicyConfig config_;
  std::size_t steps_ = 0;
};

/// One step of `policy` on `batch`; advances both rng and the policy's schedule.
template <class T>
MixedBatch<T> policy_step(Rng& rng, MixPolicy& policy, const Batch<T>& batch) {
  return policy.step(rng, batch);
}

}  // namespace fmix
