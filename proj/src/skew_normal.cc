// Copyright 2026 The bhtest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bhtest/skew_normal.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "bhtest/core.h"

namespace bhtest {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // log(2 pi) / 2
constexpr double kLog2 = std::numbers::ln2;
constexpr double kAsymptoticCutoff = -8.0;

double LogStdNormalPdf(double z) { return -0.5 * z * z - kHalfLog2Pi; }

struct Moments {
  double mean;
  double variance;  // population
  double skewness;
};

Moments SampleMoments(std::span<const double> data) {
  const double n = static_cast<double>(data.size());
  double mean = 0.0;
  for (double x : data) mean += x;
  mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double x : data) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  const double skew = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return {mean, m2, skew};
}

}  // namespace

double LogStdNormalCdf(double x) {
  if (x < kAsymptoticCutoff) {
    // Phi(x) = phi(x)/(-x) * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...); the series
    // is truncated well before its terms start growing again.
    const double inv_x2 = 1.0 / (x * x);
    double term = 1.0, series = 1.0;
    for (int k = 1; k <= 20; ++k) {
      term *= -(2.0 * k - 1.0) * inv_x2;
      series += term;
    }
    return LogStdNormalPdf(x) - std::log(-x) + std::log(series);
  }
  if (x > 0.0) return std::log1p(-0.5 * std::erfc(x / std::numbers::sqrt2));
  return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
}

double SnLogPdf(double x, const SkewNormalParams& p) {
  const double z = (x - p.xi) / p.omega;
  return kLog2 - std::log(p.omega) + LogStdNormalPdf(z) +
         LogStdNormalCdf(p.beta * z);
}

double SnPdf(double x, const SkewNormalParams& p) {
  return std::exp(SnLogPdf(x, p));
}

double SnNll(std::span<const double> data, const SkewNormalParams& p) {
  double sum = 0.0;
  for (double x : data) {
    const double z = (x - p.xi) / p.omega;
    sum += LogStdNormalPdf(z) + LogStdNormalCdf(p.beta * z);
  }
  return static_cast<double>(data.size()) * std::log(p.omega) - sum;
}

SkewNormalParams SnFitMom(std::span<const double> data,
                          const FitOptions& options) {
  if (data.empty()) throw Error(ErrorCode::kEmptyState, "no data to fit");
  const Moments m = SampleMoments(data);
  if (m.variance <= options.variance_floor) {
    throw Error(ErrorCode::kDegenerateSample, "sample variance is zero");
  }
  const double s = std::sqrt(m.variance);
  const double g1 =
      std::clamp(m.skewness, -options.skewness_clamp, options.skewness_clamp);
  const double g23 = std::pow(std::abs(g1), 2.0 / 3.0);
  const double c23 = std::pow((4.0 - std::numbers::pi) / 2.0, 2.0 / 3.0);
  const double abs_delta = std::sqrt(std::numbers::pi / 2.0 * g23 / (g23 + c23));
  const double delta = std::copysign(abs_delta, g1);
  SkewNormalParams p;
  p.beta = delta / std::sqrt(1.0 - delta * delta);
  p.omega = s / std::sqrt(1.0 - 2.0 * delta * delta / std::numbers::pi);
  p.xi = m.mean - p.omega * delta * std::sqrt(2.0 / std::numbers::pi);
  p.beta = std::clamp(p.beta, -options.beta_cap, options.beta_cap);
  return p;
}

FitResult SnFitMle(std::span<const double> data, const FitOptions& options) {
  if (data.empty()) throw Error(ErrorCode::kEmptyState, "no data to fit");
  FitResult result;
  const Moments m = SampleMoments(data);
  if (m.variance <= options.variance_floor) {
    result.degenerate = true;
    result.params = {m.mean, options.omega_floor, 0.0};
    result.nll = SnNll(data, result.params);
    result.mode = m.mean;
    return result;
  }

  const SkewNormalParams init = SnFitMom(data, options);
  const double cap = options.beta_cap;
  auto unpack = [cap](std::span<const double> x) {
    return SkewNormalParams{x[0], std::exp(x[1]), std::clamp(x[2], -cap, cap)};
  };
  auto objective = [&](std::span<const double> x) {
    return SnNll(data, unpack(x));
  };
  // Step sizes scale with the initial omega so the search is equivariant
  // under affine transforms of the data.
  const double steps[3] = {0.25 * init.omega, 0.25, 0.5};
  NelderMeadResult nm = NelderMead(
      objective, {init.xi, std::log(init.omega), init.beta}, steps,
      options.simplex);
  // A strongly skewed moment estimate can strand the simplex on the flat
  // region beyond the shape cap; a second start from the normal fit
  // recovers the interior optimum.
  const double sd = std::sqrt(m.variance);
  const double normal_steps[3] = {0.25 * sd, 0.25, 0.5};
  NelderMeadResult alt = NelderMead(
      objective, {m.mean, std::log(sd), 0.0}, normal_steps, options.simplex);
  const int evals = nm.evals + alt.evals;
  if (alt.value < nm.value) nm = std::move(alt);

  result.params = unpack(nm.x);
  result.nll = nm.value;
  result.evals = evals;
  result.mode = SnMode(result.params);
  return result;
}

double SnMode(const SkewNormalParams& p) {
  if (p.beta == 0.0) return p.xi;
  constexpr double kInvPhi = 0.61803398874989484820;  // 1 / golden ratio
  double lo = p.xi - 4.0 * p.omega;
  double hi = p.xi + 4.0 * p.omega;
  const double tol = 1e-10 * p.omega;
  double a = hi - kInvPhi * (hi - lo);
  double b = lo + kInvPhi * (hi - lo);
  double fa = SnLogPdf(a, p);
  double fb = SnLogPdf(b, p);
  while (hi - lo > tol) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + kInvPhi * (hi - lo);
      fb = SnLogPdf(b, p);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - kInvPhi * (hi - lo);
      fa = SnLogPdf(a, p);
    }
  }
  return 0.5 * (lo + hi);
}

double SnPValue(double q, const SkewNormalParams& p) {
  const double ratio = std::exp(SnLogPdf(q, p) - SnLogPdf(SnMode(p), p));
  return std::clamp(ratio, 0.0, 1.0);
}

double SnPValue(double q, const FitResult& fit) {
  if (fit.degenerate) return std::abs(q - fit.params.xi) <= 1e-9 ? 1.0 : 0.0;
  const double ratio = std::exp(SnLogPdf(q, fit.params) -
                                SnLogPdf(fit.mode, fit.params));
  return std::clamp(ratio, 0.0, 1.0);
}

}  // namespace bhtest
