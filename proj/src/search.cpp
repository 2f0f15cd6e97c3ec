// Copyright 2026 The condbell Authors
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

#include "condbell/search.hpp"

#include <cmath>
#include <limits>

namespace condbell {

namespace {

double finite_or_floor(double v) {
  return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
}

}  // namespace

SearchResult grid_maximize(const Objective2& f, Point2 origin, double step, std::size_t nx,
                           std::size_t ny, double tie_tolerance) {
  SearchResult best{origin, -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const Point2 p{origin.x + static_cast<double>(i) * step,
                     origin.y + static_cast<double>(j) * step};
      const double v = finite_or_floor(f(p));
      if ((i == 0 && j == 0) || v > best.value + tie_tolerance) best = {p, v};
    }
  }
  return best;
}

SearchResult coordinate_ascent(const Objective2& f, Point2 start, double step,
                               int iterations) {
  SearchResult cur{start, finite_or_floor(f(start))};
  for (int it = 0; it < iterations; ++it) {
    const Point2 probes[4] = {{cur.arg.x + step, cur.arg.y},
                              {cur.arg.x - step, cur.arg.y},
                              {cur.arg.x, cur.arg.y + step},
                              {cur.arg.x, cur.arg.y - step}};
    SearchResult next = cur;
    for (const Point2& p : probes) {
      const double v = finite_or_floor(f(p));
      if (v > next.value) next = {p, v};
    }
    if (next.value > cur.value) {
      cur = next;
    } else {
      step *= 0.5;
    }
  }
  return cur;
}

}  // namespace condbell
