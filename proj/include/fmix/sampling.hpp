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

#include <cmath>
#include <complex>
#include <string>

#include "fmix/error.hpp"
#include "fmix/rng.hpp"
#include "fmix/tensor.hpp"

namespace fmix {

/// Complex spectrum Z over 1-3 axes.
using ComplexField = Tensor<std::complex<double>>;

namespace detail {

inline void check_shape_parameter(double alpha, const char* name) {
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw InvalidParameter(std::string(name) + " must be finite and > 0, got " + std::to_string(alpha));
}

// Marsaglia & Tsang (2000) for shape >= 1, returned as a log.
inline double log_gamma_mt(Rng& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
      return std::log(d) + std::log(v);
  }
}

}  // namespace detail

/// log of a Gamma(shape, 1) draw. Shapes below 1 use the boost
/// Gamma(a) = Gamma(a + 1) * U^(1/a), kept in log space so tiny shapes never underflow.
inline double sample_log_gamma(Rng& rng, double shape) {
  detail::check_shape_parameter(shape, "gamma shape");
  if (shape >= 1.0) return detail::log_gamma_mt(rng, shape);
  const double boosted = detail::log_gamma_mt(rng, shape + 1.0);
  return boosted + std::log(rng.uniform_open()) / shape;
}

inline double sample_gamma(Rng& rng, double shape) { return std::exp(sample_log_gamma(rng, shape)); }

/// Mixing coefficient lambda ~ Beta(alpha, alpha), as G1 / (G1 + G2).
inline double sample_lambda(Rng& rng, double alpha) {
  detail::check_shape_parameter(alpha, "alpha");
  const double log_g1 = sample_log_gamma(rng, alpha);
  const double log_g2 = sample_log_gamma(rng, alpha);
  // G1 / (G1 + G2) = 1 / (1 + exp(log G2 - log G1))
  return 1.0 / (1.0 + std::exp(log_g2 - log_g1));
}

/// Field of iid complex values whose real and imaginary parts are N(0, 1).
/// Elements are filled in row-major order, real part first.
inline ComplexField sample_complex_field(Rng& rng, const Shape& dims) {
  validate_dims(dims);
  ComplexField field(dims);
  for (auto& z : field) {
    const double re = rng.normal();
    const double im = rng.normal();
    z = {re, im};
  }
  return field;
}

}  // namespace fmix
