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

#include "fmix/sampling.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace fmix {
namespace {

struct Moments {
  double mean;
  double var;
};

Moments moments(const std::vector<double>& xs) {
  double sum = 0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double sq = 0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, sq / static_cast<double>(xs.size() - 1)};
}

std::vector<double> draw_lambdas(std::uint64_t seed, double alpha, int n) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = sample_lambda(rng, alpha);
  return out;
}

// Two-sample KS distance between xs and the reflected sample 1 - xs.
double reflection_ks(std::vector<double> xs) {
  std::vector<double> ys(xs.size());
  std::transform(xs.begin(), xs.end(), ys.begin(), [](double v) { return 1.0 - v; });
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double n = static_cast<double>(xs.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < xs.size() && j < ys.size()) {
    const double t = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] <= t) ++i;
    while (j < ys.size() && ys[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / n));
  }
  return d;
}

TEST(SampleLambda, UniformAtAlphaOne) {
  const auto xs = draw_lambdas(1, 1.0, 100000);
  for (double x : xs) ASSERT_TRUE(x >= 0.0 && x <= 1.0);
  const auto m = moments(xs);
  EXPECT_NEAR(m.mean, 0.5, 0.02);
  // Beta(1,1) variance: a*b / ((a+b)^2 (a+b+1)) = 1/12.
  EXPECT_NEAR(m.var, 1.0 / 12.0, 0.005);
}

TEST(SampleLambda, VarianceMatchesBetaFormula) {
  for (double alpha : {0.2, 0.5, 2.0, 5.0}) {
    const auto m = moments(draw_lambdas(2, alpha, 100000));
    const double expected = 1.0 / (4.0 * (2.0 * alpha + 1.0));
    EXPECT_NEAR(m.mean, 0.5, 0.01) << alpha;
    EXPECT_NEAR(m.var, expected, 0.05 * expected) << alpha;
  }
}

TEST(SampleLambda, SymmetricAboutHalf) {
  for (double alpha : {0.2, 1.0, 3.0}) {
    const auto xs = draw_lambdas(3, alpha, 100000);
    EXPECT_LE(reflection_ks(xs), 0.01) << alpha;
  }
}

TEST(SampleLambda, SmallAlphaStaysInRange) {
  Rng rng(4);
  for (int i = 0; i < 100000; ++i) {
    const double x = sample_lambda(rng, 0.01);
    ASSERT_TRUE(std::isfinite(x));
    ASSERT_TRUE(x >= 0.0 && x <= 1.0);
  }
}

TEST(SampleLambda, RejectsBadAlpha) {
  Rng rng(0);
  EXPECT_THROW(sample_lambda(rng, 0.0), InvalidParameter);
  EXPECT_THROW(sample_lambda(rng, -1.0), InvalidParameter);
  EXPECT_THROW(sample_lambda(rng, std::numeric_limits<double>::infinity()), InvalidParameter);
  EXPECT_THROW(sample_lambda(rng, std::nan("")), InvalidParameter);
}

TEST(SampleLambda, Deterministic) {
  EXPECT_EQ(draw_lambdas(77, 0.2, 1000), draw_lambdas(77, 0.2, 1000));
  EXPECT_NE(draw_lambdas(77, 0.2, 10), draw_lambdas(78, 0.2, 10));
}

TEST(SampleGamma, MeanAndVarianceEqualShape) {
  for (double shape : {0.2, 1.0, 3.5}) {
    Rng rng(5);
    std::vector<double> xs(200000);
    for (auto& x : xs) x = sample_gamma(rng, shape);
    const auto m = moments(xs);
    EXPECT_NEAR(m.mean, shape, 0.02 * shape) << shape;
    EXPECT_NEAR(m.var, shape, 0.05 * shape) << shape;
  }
}

TEST(ComplexField, ShapeContract) {
  Rng rng(0);
  const auto z = sample_complex_field(rng, {2, 3, 4});
  EXPECT_EQ(z.shape(), (Shape{2, 3, 4}));
  EXPECT_EQ(z.size(), 24u);
}

TEST(ComplexField, SameStateSameField) {
  const Rng state(7);
  Rng a = state, b = state;
  EXPECT_EQ(sample_complex_field(a, {4, 4}), sample_complex_field(b, {4, 4}));
}

TEST(ComplexField, RejectsBadShapes) {
  Rng rng(0);
  EXPECT_THROW(sample_complex_field(rng, {}), InvalidShape);
  EXPECT_THROW(sample_complex_field(rng, {4, 0}), InvalidShape);
  EXPECT_THROW(sample_complex_field(rng, {2, 2, 2, 2}), InvalidShape);
}

TEST(ComplexField, UnitGaussianMoments) {
  Rng rng(8);
  const auto z = sample_complex_field(rng, {100, 100, 100});
  std::vector<double> re, im;
  re.reserve(z.size());
  im.reserve(z.size());
  for (const auto& v : z) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  const double tol = 4.0 / std::sqrt(static_cast<double>(z.size()));
  for (const auto* part : {&re, &im}) {
    const auto m = moments(*part);
    EXPECT_NEAR(m.mean, 0.0, tol);
    EXPECT_NEAR(m.var, 1.0, 0.01);
  }
}

}  // namespace
}  // namespace fmix
