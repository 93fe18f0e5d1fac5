#pragma once
// Exact reference solvers for small dense LPs.
//
// `lp_max_vertex` / `lp_min_cover_vertex` enumerate basic solutions (every
// d-subset of tight constraints) and therefore give the true optimum with a
// deterministic lexicographic tie-break among optimal vertices — the property
// the mechanism audit needs from its allocator.  They are only usable for a
// handful of variables; `lp_max_simplex` (Bland's rule, so deterministic and
// cycle-free) covers the many-constraint/few-variable duals that show up in
// integrality-gap measurements.

#include "mwumech/core.hpp"

namespace mwumech {

struct LpResult {
  bool feasible = false;
  double objective = 0.0;
  Vec x;
};

// Hard caps converting "desk scale" into checkable preconditions.
inline constexpr int kLpMaxVars = 12;
inline constexpr long long kLpMaxBases = 5'000'000;

// max cᵀx  s.t.  rows·x ≤ rhs, x ≥ 0.  Optimal vertex, lexicographically
// smallest among optima (coordinates compared with tolerance kFeasTol).
LpResult lp_max_vertex(const std::vector<Vec> &rows, const Vec &rhs, const Vec &c);

// min cᵀx  s.t.  rows·x ≥ rhs, x ≥ 0, with c ≥ 0 (so a vertex attains the min).
LpResult lp_min_cover_vertex(const std::vector<Vec> &rows, const Vec &rhs, const Vec &c);

// All vertices of {x ≥ 0 : rows·x ≤ rhs}, deduplicated, in lexicographic order.
std::vector<Vec> enumerate_vertices(const std::vector<Vec> &rows, const Vec &rhs);

// max cᵀx  s.t.  rows·x ≤ rhs (rhs ≥ 0), x ≥ 0, via tableau simplex with
// Bland's rule.  No tie-break guarantee on x; use where only the value matters.
LpResult lp_max_simplex(const std::vector<Vec> &rows, const Vec &rhs, const Vec &c);

}  // namespace mwumech
