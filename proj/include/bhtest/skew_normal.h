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

// Skew-normal density with location xi, scale omega and shape beta:
//
//   f(x) = (2 / omega) phi(z) Phi(beta z),   z = (x - xi) / omega
//
// plus maximum-likelihood fitting and the mode-ratio p-value
// f(q) / f(mode), which avoids the (closed-form-free) skew-normal CDF.

#ifndef BHTEST_SKEW_NORMAL_H_
#define BHTEST_SKEW_NORMAL_H_

#include <span>

#include "bhtest/nelder_mead.h"

namespace bhtest {

struct SkewNormalParams {
  double xi = 0.0;
  double omega = 1.0;
  double beta = 0.0;

  bool operator==(const SkewNormalParams&) const = default;
};

struct FitOptions {
  double beta_cap = 50.0;
  // Samples with variance at or below this are treated as point masses.
  double variance_floor = 1e-12;
  // Scale reported for degenerate fits.
  double omega_floor = 1e-6;
  // Skewness is clamped to this magnitude before moment inversion.
  double skewness_clamp = 0.99;
  NelderMeadOptions simplex;
};

struct FitResult {
  SkewNormalParams params;
  double nll = 0.0;
  bool degenerate = false;
  double mode = 0.0;
  int evals = 0;
};

// log Phi(x); switches to an asymptotic expansion below x = -8 so that the
// result stays finite for very negative arguments.
double LogStdNormalCdf(double x);

double SnLogPdf(double x, const SkewNormalParams& p);
double SnPdf(double x, const SkewNormalParams& p);

// N log(omega) - sum_x [log phi(z_x) + log Phi(beta z_x)].
double SnNll(std::span<const double> data, const SkewNormalParams& p);

// Method-of-moments estimate. Throws kDegenerateSample when the (population)
// variance is at or below options.variance_floor, kEmptyState on no data.
SkewNormalParams SnFitMom(std::span<const double> data,
                          const FitOptions& options = {});

// Simplex minimisation of SnNll over (xi, log omega, beta) started from the
// moment estimate. Degenerate samples are flagged, not fitted.
FitResult SnFitMle(std::span<const double> data,
                   const FitOptions& options = {});

// Argmax of the density (exactly xi when beta == 0).
double SnMode(const SkewNormalParams& p);

// f(q) / f(mode), clamped to [0, 1].
double SnPValue(double q, const SkewNormalParams& p);
// Uses the cached mode; degenerate fits give 1 if |q - xi| <= 1e-9, else 0.
double SnPValue(double q, const FitResult& fit);

}  // namespace bhtest

#endif  // BHTEST_SKEW_NORMAL_H_
