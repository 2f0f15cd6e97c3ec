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

#ifndef CONDBELL_SEARCH_HPP
#define CONDBELL_SEARCH_HPP

#include <cstddef>
#include <functional>

namespace condbell {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct SearchResult {
  Point2 arg;
  double value = 0.0;
};

using Objective2 = std::function<double(Point2)>;

/// Evaluates `f` on the lattice {x0 + i*step} x {y0 + j*step} with
/// i < nx, j < ny and returns the maximum. Cells are visited in
/// lexicographic (x, y) order and a later cell only wins if it beats the
/// incumbent by more than `tie_tolerance`, so ties resolve to the
/// lexicographically smallest point.
SearchResult grid_maximize(const Objective2& f, Point2 origin, double step, std::size_t nx,
                           std::size_t ny, double tie_tolerance = 1e-12);

/// Compass search: probes +-step along x, then y, moves to the best strict
/// improvement, and halves the step when no probe improves. Runs exactly
/// `iterations` rounds. Non-finite objective values are treated as -inf.
SearchResult coordinate_ascent(const Objective2& f, Point2 start, double step,
                               int iterations);

}  // namespace condbell

#endif  // CONDBELL_SEARCH_HPP
