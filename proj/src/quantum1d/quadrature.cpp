// Copyright 2026 The antisym Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <numbers>

#include "antisym/error.hpp"
#include "antisym/quantum1d.hpp"

namespace antisym {

void gauss_legendre_rule(int q, std::vector<double>& nodes, std::vector<double>& weights) {
  if (q < 1) fail(ErrorKind::InvalidArgument, "Gauss-Legendre rule needs q >= 1");
  nodes.assign(static_cast<std::size_t>(q), 0.0);
  weights.assign(static_cast<std::size_t>(q), 0.0);
  const int half = (q + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // q = 1 leaves p1 = x, p0 = 1: the formula below still gives P_1' = 1.
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= q; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = q * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Roots come out descending; fill symmetrically.
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(q - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(q - 1 - i)] = w;
  }
  if (q % 2 == 1) nodes[static_cast<std::size_t>(q / 2)] = 0.0;
}

QuadratureGrid gauss_legendre_grid(double a, double b, int subintervals, int points) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    fail(ErrorKind::InvalidArgument, "quadrature interval must satisfy a < b");
  if (subintervals < 1 || points < 1)
    fail(ErrorKind::InvalidArgument, "quadrature needs at least one subinterval and one point");
  std::vector<double> x, w;
  gauss_legendre_rule(points, x, w);
  QuadratureGrid g;
  g.a = a;
  g.b = b;
  g.subintervals = subintervals;
  g.points_per_subinterval = points;
  const double h = (b - a) / subintervals;
  g.nodes.reserve(static_cast<std::size_t>(subintervals) * x.size());
  g.weights.reserve(g.nodes.capacity());
  for (int s = 0; s < subintervals; ++s) {
    const double left = a + h * s;
    for (std::size_t q = 0; q < x.size(); ++q) {
      g.nodes.push_back(left + 0.5 * h * (x[q] + 1.0));
      g.weights.push_back(0.5 * h * w[q]);
    }
  }
  return g;
}

}  // namespace antisym
