#include <vector>

#include "doctest.h"
#include "mwumech/rng.hpp"
#include "mwumech/smalllp.hpp"

using namespace mwumech;

TEST_CASE("box maximum sits at the far corner") {
  std::vector<Vec> rows = {{1.0, 0.0}, {0.0, 1.0}};
  Vec rhs = {1.0, 1.0};
  LpResult r = lp_max_vertex(rows, rhs, {1.0, 1.0});
  REQUIRE(r.feasible);
  CHECK(r.objective == doctest::Approx(2.0));
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.x[1] == doctest::Approx(1.0));
}

TEST_CASE("ties resolve to the lexicographically smallest optimum") {
  // max x + y over the simplex x + y <= 1: both unit vertices are optimal.
  std::vector<Vec> rows = {{1.0, 1.0}};
  Vec rhs = {1.0};
  LpResult r = lp_max_vertex(rows, rhs, {1.0, 1.0});
  REQUIRE(r.feasible);
  CHECK(r.objective == doctest::Approx(1.0));
  CHECK(r.x[0] == doctest::Approx(0.0));
  CHECK(r.x[1] == doctest::Approx(1.0));
}

TEST_CASE("covering minimum hits the constraint") {
  // min x + 2y s.t. x + y >= 2: optimum (2, 0).
  std::vector<Vec> rows = {{1.0, 1.0}};
  Vec rhs = {2.0};
  LpResult r = lp_min_cover_vertex(rows, rhs, {1.0, 2.0});
  REQUIRE(r.feasible);
  CHECK(r.objective == doctest::Approx(2.0));
  CHECK(r.x[0] == doctest::Approx(2.0));
  CHECK(r.x[1] == doctest::Approx(0.0));
}

TEST_CASE("infeasible covering is reported, not invented") {
  std::vector<Vec> rows = {{0.0, 0.0}};
  Vec rhs = {1.0};
  LpResult r = lp_min_cover_vertex(rows, rhs, {1.0, 1.0});
  CHECK_FALSE(r.feasible);
}

TEST_CASE("vertex enumeration of the unit square") {
  std::vector<Vec> rows = {{1.0, 0.0}, {0.0, 1.0}};
  Vec rhs = {1.0, 1.0};
  std::vector<Vec> vertices = enumerate_vertices(rows, rhs);
  REQUIRE(vertices.size() == 4);
  CHECK(vertices[0][0] == doctest::Approx(0.0));
  CHECK(vertices[0][1] == doctest::Approx(0.0));
  CHECK(vertices[3][0] == doctest::Approx(1.0));
  CHECK(vertices[3][1] == doctest::Approx(1.0));
}

TEST_CASE("fractional vertices are found") {
  // x0+x1<=1, x1+x2<=1, x0+x2<=1 has the half-integral vertex (.5,.5,.5).
  std::vector<Vec> rows = {{1.0, 1.0, 0.0}, {0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}};
  Vec rhs = {1.0, 1.0, 1.0};
  std::vector<Vec> vertices = enumerate_vertices(rows, rhs);
  bool found = false;
  for (const Vec &v : vertices) {
    if (std::abs(v[0] - 0.5) < 1e-9 && std::abs(v[1] - 0.5) < 1e-9 && std::abs(v[2] - 0.5) < 1e-9) {
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("simplex and vertex enumeration agree on random instances") {
  SeededRng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    int m = int(rng.uniform_int(1, 4));
    int n = int(rng.uniform_int(1, 4));
    std::vector<Vec> rows(size_t(m), Vec(size_t(n), 0.0));
    Vec rhs(size_t(m), 0.0);
    Vec c(size_t(n), 0.0);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) rows[size_t(i)][size_t(j)] = rng.uniform_double(0.0, 3.0);
      rhs[size_t(i)] = rng.uniform_double(0.5, 3.0);
    }
    bool bounded = true;
    for (int j = 0; j < n; ++j) {
      c[size_t(j)] = rng.uniform_double(0.0, 2.0);
      double col_max = 0.0;
      for (int i = 0; i < m; ++i) col_max = std::max(col_max, rows[size_t(i)][size_t(j)]);
      if (c[size_t(j)] > 0.0 && col_max < 1e-6) bounded = false;  // unbounded direction
    }
    if (!bounded) continue;
    LpResult a = lp_max_vertex(rows, rhs, c);
    LpResult b = lp_max_simplex(rows, rhs, c);
    REQUIRE(a.feasible);
    REQUIRE(b.feasible);
    CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
  }
}
