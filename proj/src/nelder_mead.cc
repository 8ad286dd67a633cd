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

#include "bhtest/nelder_mead.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bhtest {
namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

double Diameter(const std::vector<Vertex>& simplex) {
  double diam = 0.0;
  for (std::size_t v = 1; v < simplex.size(); ++v) {
    for (std::size_t k = 0; k < simplex[0].x.size(); ++k) {
      diam = std::max(diam, std::abs(simplex[v].x[k] - simplex[0].x[k]));
    }
  }
  return diam;
}

}  // namespace

NelderMeadResult NelderMead(const Objective& f, std::vector<double> x0,
                            std::span<const double> steps,
                            const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  simplex.push_back({x0, eval(x0)});
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> x = x0;
    x[k] += steps[k];
    simplex.push_back({x, eval(x)});
  }

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  std::vector<double> centroid(n);
  auto point = [&](double coef, const std::vector<double>& worst) {
    // centroid + coef * (centroid - worst)
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = centroid[k] + coef * (centroid[k] - worst[k]);
    }
    return x;
  };

  bool converged = false;
  while (true) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    if (Diameter(simplex) < options.diameter_tol) {
      converged = true;
      break;
    }
    if (evals >= options.max_evals) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[v].x[k];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    Vertex& worst = simplex[n];
    const double f_best = simplex[0].f;
    const double f_second_worst = simplex[n - 1].f;

    auto xr = point(options.reflect, worst.x);
    const double fr = eval(xr);
    if (fr < f_best) {
      auto xe = point(options.reflect * options.expand, worst.x);
      const double fe = eval(xe);
      if (fe < fr) {
        worst = {std::move(xe), fe};
      } else {
        worst = {std::move(xr), fr};
      }
      continue;
    }
    if (fr < f_second_worst) {
      worst = {std::move(xr), fr};
      continue;
    }
    if (fr < worst.f) {
      auto xc = point(options.reflect * options.contract, worst.x);
      const double fc = eval(xc);
      if (fc <= fr) {
        worst = {std::move(xc), fc};
        continue;
      }
    } else {
      auto xcc = point(-options.contract, worst.x);
      const double fcc = eval(xcc);
      if (fcc < worst.f) {
        worst = {std::move(xcc), fcc};
        continue;
      }
    }
    for (std::size_t v = 1; v <= n; ++v) {
      for (std::size_t k = 0; k < n; ++k) {
        simplex[v].x[k] =
            simplex[0].x[k] + options.shrink * (simplex[v].x[k] - simplex[0].x[k]);
      }
      simplex[v].f = eval(simplex[v].x);
    }
  }

  std::stable_sort(simplex.begin(), simplex.end(), by_value);
  return {simplex[0].x, simplex[0].f, evals, converged};
}

}  // namespace bhtest
