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

#include "condbell/realizability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "condbell/error.hpp"

namespace condbell {

namespace detail {

namespace {

struct Reduced {
  Eigen::VectorXd base;   // particular solution, free variables at zero
  Eigen::MatrixXd basis;  // columns span the null space
};

// Gauss-Jordan with partial pivoting; nullopt if A x = b is inconsistent.
std::optional<Reduced> reduce(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double tol) {
  using Index = Eigen::Index;
  const Index m = a.rows();
  const Index n = a.cols();
  Eigen::MatrixXd r(m, n + 1);
  r << a, b;

  std::vector<Index> pivots;
  Index row = 0;
  for (Index col = 0; col < n && row < m; ++col) {
    Index best = 0;
    const double mag = r.col(col).segment(row, m - row).cwiseAbs().maxCoeff(&best);
    if (mag <= tol) continue;
    best += row;
    if (best != row) r.row(row).swap(r.row(best));
    r.row(row) /= r(row, col);
    for (Index i = 0; i < m; ++i) {
      if (i != row && r(i, col) != 0.0) r.row(i) -= r(i, col) * r.row(row);
    }
    pivots.push_back(col);
    ++row;
  }
  for (Index i = row; i < m; ++i) {
    if (std::abs(r(i, n)) > tol) return std::nullopt;
  }

  std::vector<Index> free_cols;
  for (Index col = 0, p = 0; col < n; ++col) {
    if (p < static_cast<Index>(pivots.size()) && pivots[p] == col) {
      ++p;
    } else {
      free_cols.push_back(col);
    }
  }

  Reduced out;
  out.base = Eigen::VectorXd::Zero(n);
  out.basis = Eigen::MatrixXd::Zero(n, static_cast<Index>(free_cols.size()));
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    out.base(pivots[i]) = r(static_cast<Index>(i), n);
  }
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    const Index fj = free_cols[j];
    const Index jj = static_cast<Index>(j);
    out.basis(fj, jj) = 1.0;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      out.basis(pivots[i], jj) = -r(static_cast<Index>(i), fj);
    }
  }
  return out;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Each row i encodes coeff(i) . t >= lower(i).
std::optional<Eigen::VectorXd> interval_midpoint(const Eigen::VectorXd& coeff,
                                                 const Eigen::VectorXd& lower, double tol) {
  double lo = -kInf;
  double hi = kInf;
  for (Eigen::Index i = 0; i < coeff.size(); ++i) {
    const double c = coeff(i);
    if (std::abs(c) <= tol) {
      if (lower(i) > 0.0) return std::nullopt;
    } else if (c > 0.0) {
      lo = std::max(lo, lower(i) / c);
    } else {
      hi = std::min(hi, lower(i) / c);
    }
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::InvalidState, "nonnegative solution set is unbounded");
  }
  if (lo > hi) return std::nullopt;
  Eigen::VectorXd t(1);
  t(0) = 0.5 * (lo + hi);
  return t;
}

std::optional<Eigen::VectorXd> polygon_centroid(const Eigen::MatrixXd& coeff,
                                                const Eigen::VectorXd& lower, double tol) {
  const Eigen::Index rows = coeff.rows();
  std::vector<Eigen::Vector2d> vertices;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = i + 1; j < rows; ++j) {
      Eigen::Matrix2d m;
      m.row(0) = coeff.row(i);
      m.row(1) = coeff.row(j);
      const double det = m.determinant();
      if (std::abs(det) <= tol) continue;
      const Eigen::Vector2d v = m.inverse() * Eigen::Vector2d(lower(i), lower(j));
      const bool inside = ((coeff * v - lower).array() >= -tol).all();
      if (!inside) continue;
      const bool seen = std::any_of(vertices.begin(), vertices.end(), [&](const auto& w) {
        return (w - v).cwiseAbs().maxCoeff() <= tol;
      });
      if (!seen) vertices.push_back(v);
    }
  }
  if (vertices.empty()) return std::nullopt;
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (const auto& v : vertices) sum += v;
  return Eigen::VectorXd(sum / static_cast<double>(vertices.size()));
}

}  // namespace

NonnegativeSolution nonnegative_centroid(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                         double tol) {
  NonnegativeSolution out;
  const auto reduced = reduce(a, b, tol);
  if (!reduced) {
    out.consistent = false;
    return out;
  }
  const Eigen::Index k = reduced->basis.cols();
  out.null_dimension = static_cast<std::size_t>(k);
  if (k > 2) {
    throw Error(ErrorCode::InvalidState,
                "null space of dimension " + std::to_string(k) + " is not supported");
  }

  // x = base + basis t >= -tol  <=>  basis t >= -base - tol
  const Eigen::VectorXd lower = -reduced->base.array() - tol;
  std::optional<Eigen::VectorXd> t;
  if (k == 0) {
    if ((lower.array() <= 0.0).all()) t = Eigen::VectorXd();
  } else if (k == 1) {
    t = interval_midpoint(reduced->basis.col(0), lower, tol);
  } else {
    t = polygon_centroid(reduced->basis, lower, tol);
  }
  if (!t) return out;

  Eigen::VectorXd x = reduced->base;
  if (k > 0) x += reduced->basis * *t;
  std::vector<double> point(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) point[static_cast<std::size_t>(i)] = std::max(0.0, x(i));
  out.point = std::move(point);
  return out;
}

}  // namespace detail

const std::array<HalfSpace, 4>& realizable_facets() noexcept {
  static const std::array<HalfSpace, 4> facets{{
      {{-1.0, -1.0, 1.0}, 0.0},
      {{1.0, -1.0, -1.0}, 0.0},
      {{-1.0, 1.0, -1.0}, 0.0},
      {{1.0, 1.0, 1.0}, 2.0},
  }};
  return facets;
}

namespace {

// Smallest uniform shift of the pair probabilities P(u,v) = t/2 that clears
// every facet. At most one facet can be violated for t in the unit cube, and
// moving each coordinate by deficit/3 along that facet's normal stays inside
// the cube.
double pair_shift_to_feasibility(const ConditionalTriple& t) noexcept {
  double worst = 0.0;
  for (const HalfSpace& h : realizable_facets()) {
    const double l1 = std::abs(h.normal[0]) + std::abs(h.normal[1]) + std::abs(h.normal[2]);
    worst = std::max(worst, -h.slack(t) / l1);
  }
  return 0.5 * worst;
}

}  // namespace

RealizabilityVerdict realize(const ConditionalTriple& t) {
  t.validate();
  constexpr Eigen::Index kRows = 7;
  constexpr Eigen::Index kCols = JointPmf::kAtoms;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(kRows, kCols);
  Eigen::VectorXd b(kRows);

  auto is = [](std::size_t atom, Observable o, Outcome x) {
    return JointPmf::outcome_at(atom, o) == x;
  };
  for (std::size_t i = 0; i < JointPmf::kAtoms; ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    a(0, col) = 1.0;
    a(1, col) = is(i, Observable::A, Outcome::Plus) ? 1.0 : 0.0;
    a(2, col) = is(i, Observable::B, Outcome::Plus) ? 1.0 : 0.0;
    a(3, col) = is(i, Observable::C, Outcome::Plus) ? 1.0 : 0.0;
    a(4, col) = is(i, Observable::A, Outcome::Plus) && is(i, Observable::B, Outcome::Plus);
    a(5, col) = is(i, Observable::C, Outcome::Plus) && is(i, Observable::B, Outcome::Minus);
    a(6, col) = is(i, Observable::A, Outcome::Plus) && is(i, Observable::C, Outcome::Plus);
  }
  b << 1.0, 0.5, 0.5, 0.5, 0.5 * t.p_a_given_b_plus, 0.5 * t.p_c_given_b_minus,
      0.5 * t.p_a_given_c_plus;

  const auto solution = detail::nonnegative_centroid(a, b);
  RealizabilityVerdict v;
  if (solution.point) {
    v.feasible = true;
    v.witness = JointPmf::from_atoms(*solution.point);
    v.max_violation = 0.0;
  } else {
    v.feasible = false;
    v.max_violation = pair_shift_to_feasibility(t);
  }
  return v;
}

JointPmf random_symmetric_joint(std::uint64_t seed) {
  RandomStream rng(seed);
  // Representatives of the antipodal pairs; the partner of atom i is 7 - i.
  constexpr std::array<std::size_t, 4> kReps{0, 1, 2, 4};
  std::array<double, 4> weight{};
  double total = 0.0;
  for (double& w : weight) {
    w = -std::log1p(-rng.uniform());
    total += w;
  }
  std::array<double, JointPmf::kAtoms> atoms{};
  for (std::size_t k = 0; k < kReps.size(); ++k) {
    const double half = 0.5 * weight[k] / total;
    atoms[kReps[k]] = half;
    atoms[JointPmf::kAtoms - 1 - kReps[k]] = half;
  }
  return JointPmf::from_atoms(atoms);
}

LatentTriple sample_latent_triple(const JointPmf& pmf, RandomStream& rng) noexcept {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t chosen = JointPmf::kAtoms;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < JointPmf::kAtoms; ++i) {
    if (pmf[i] <= 0.0) continue;
    last_positive = i;
    cumulative += pmf[i];
    if (u < cumulative) {
      chosen = i;
      break;
    }
  }
  if (chosen == JointPmf::kAtoms) chosen = last_positive;
  return LatentTriple{JointPmf::outcome_at(chosen, Observable::A),
                      JointPmf::outcome_at(chosen, Observable::B),
                      JointPmf::outcome_at(chosen, Observable::C)};
}

}  // namespace condbell
