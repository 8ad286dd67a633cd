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

#ifndef BHTEST_NELDER_MEAD_H_
#define BHTEST_NELDER_MEAD_H_

#include <functional>
#include <span>
#include <vector>

namespace bhtest {

struct NelderMeadOptions {
  double reflect = 1.0;
  double expand = 2.0;
  double contract = 0.5;
  double shrink = 0.5;
  // Stop once every vertex lies within this (max-norm) distance of the best.
  double diameter_tol = 1e-8;
  int max_evals = 2000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evals = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

// Derivative-free simplex minimisation. The initial simplex is x0 plus one
// vertex per coordinate displaced by steps[k]. The returned point is never
// worse than x0.
NelderMeadResult NelderMead(const Objective& f, std::vector<double> x0,
                            std::span<const double> steps,
                            const NelderMeadOptions& options = {});

}  // namespace bhtest

#endif  // BHTEST_NELDER_MEAD_H_
