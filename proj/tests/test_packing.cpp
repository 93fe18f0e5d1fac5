#include <cmath>
#include <vector>

#include "doctest.h"
#include "mwumech/auction.hpp"
#include "mwumech/packing.hpp"
#include "mwumech/rng.hpp"
#include "mwumech/smalllp.hpp"

using namespace mwumech;

namespace {

struct MatrixInstance {
  std::vector<Vec> A;
  Vec b;
  Vec c;
};

// Random packing LP; every column keeps at least one entry >= 0.1 so the LP
// stays bounded.
MatrixInstance random_packing(SeededRng &rng, int max_rows, int max_cols) {
  MatrixInstance inst;
  int m = int(rng.uniform_int(1, max_rows));
  int n = int(rng.uniform_int(1, max_cols));
  inst.A.assign(size_t(m), Vec(size_t(n), 0.0));
  for (int j = 0; j < n; ++j) {
    bool has_entry = false;
    for (int i = 0; i < m; ++i) {
      double v = rng.uniform_double(0.0, 5.0);
      if (v < 0.05) v = 0.0;
      inst.A[size_t(i)][size_t(j)] = v;
      has_entry = has_entry || v >= 0.1;
    }
    if (!has_entry) {
      inst.A[size_t(rng.uniform_int(0, m - 1))][size_t(j)] = rng.uniform_double(0.1, 5.0);
    }
  }
  inst.b.assign(size_t(m), 0.0);
  inst.c.assign(size_t(n), 0.0);
  for (int i = 0; i < m; ++i) inst.b[size_t(i)] = rng.uniform_double(0.1, 2.0);
  for (int j = 0; j < n; ++j) inst.c[size_t(j)] = rng.uniform_double(0.1, 2.0);
  return inst;
}

PackingSolution solve_matrix(const MatrixInstance &inst, double epsilon, double kappa) {
  PackingProblem problem;
  problem.num_rows = int(inst.A.size());
  problem.row_capacities = inst.b;
  problem.oracle_kappa = kappa;
  problem.oracle = make_matrix_packing_oracle(inst.A, inst.b, inst.c, kappa);
  return solve_packing(problem, epsilon);
}

}  // namespace

TEST_CASE("single-row packing approaches the best density") {
  MatrixInstance inst;
  inst.A = {{1.0, 2.0}};
  inst.b = {3.0};
  inst.c = {1.0, 1.0};
  // Optimum: spend all capacity on x0 -> objective 3.
  PackingSolution s = solve_matrix(inst, 0.25, 1.0);
  CHECK(s.max_load <= 1.0 + 1e-12);
  CHECK(s.objective >= (1.0 - 0.25) * 3.0 - 1e-9);
  CHECK(s.upper_bound >= 3.0 - 1e-9);
}

TEST_CASE("certificate and feasibility hold on random instances") {
  SeededRng rng(4321);
  for (double epsilon : {0.5, 0.25, 0.1}) {
    for (int trial = 0; trial < 12; ++trial) {
      MatrixInstance inst = random_packing(rng, 5, 5);
      int m = int(inst.A.size());
      int n = int(inst.c.size());
      PackingSolution s = solve_matrix(inst, epsilon, 1.0);

      // Feasibility: every row within capacity.
      Vec x(size_t(n), 0.0);
      for (const auto &[col, val] : s.x_hat) x[size_t(col)] += val;
      for (int i = 0; i < m; ++i) {
        double load = 0.0;
        for (int j = 0; j < n; ++j) load += inst.A[size_t(i)][size_t(j)] * x[size_t(j)];
        CHECK(load <= inst.b[size_t(i)] * (1.0 + 1e-9));
      }

      // Self-contained certificate, and the certificate brackets the true opt.
      LpResult opt = lp_max_vertex(inst.A, inst.b, inst.c);
      REQUIRE(opt.feasible);
      CHECK(s.objective >= (1.0 - epsilon) * s.upper_bound - 1e-9);
      CHECK(s.upper_bound >= opt.objective * (1.0 - 1e-9));
      CHECK(s.objective <= opt.objective * (1.0 + 1e-9));

      long long t_prime =
          (long long)std::ceil(std::max(std::log(double(m)) / ((epsilon / 2) * (epsilon / 2)), 1.0));
      CHECK(s.iterations <= (long long)(m)*t_prime);
    }
  }
}

TEST_CASE("kappa-approximate oracles certify kappa-scaled quality") {
  SeededRng rng(555);
  double kappa = 0.5;
  for (int trial = 0; trial < 8; ++trial) {
    MatrixInstance inst = random_packing(rng, 4, 4);
    PackingSolution s = solve_matrix(inst, 0.25, kappa);
    CHECK(s.max_load <= 1.0 + 1e-12);
    CHECK(s.objective >= (1.0 - 0.25) * kappa * s.upper_bound - 1e-9);
    // The dual bound still upper-bounds the optimum.
    LpResult opt = lp_max_vertex(inst.A, inst.b, inst.c);
    REQUIRE(opt.feasible);
    CHECK(s.upper_bound >= opt.objective * (1.0 - 1e-9));
  }
}

TEST_CASE("all-zero columns are rejected as unbounded directions") {
  std::vector<Vec> A = {{1.0, 0.0}};
  CHECK_THROWS_AS(make_matrix_packing_oracle(A, {1.0}, {1.0, 1.0}), error);

  ColumnOracle zero_col = [](const Vec &) {
    ColumnOracleResponse r;
    r.column_id = 0;
    r.cost = 1.0;
    return r;  // no entries
  };
  PackingProblem problem;
  problem.num_rows = 1;
  problem.row_capacities = {1.0};
  problem.oracle = zero_col;
  CHECK_THROWS_AS(solve_packing(problem, 0.25), error);
}

TEST_CASE("demand oracle scores single-minded players on their bundle") {
  ValuationProfile profile;
  profile.items = 3;
  profile.players.push_back(Valuation::single_minded({1, 2}, 4.0));
  Vec y = {1.0};
  Vec z = {5.0, 1.0, 1.0};  // item 0 is pricey but irrelevant to the bundle
  DemandResult r = auction_demand_oracle(y, z, profile);
  CHECK(r.player == 0);
  CHECK(r.bundle == std::vector<int>{1, 2});
  CHECK(r.ratio == doctest::Approx(0.75));  // (1 + 1 + 1) / 4
}

TEST_CASE("demand oracle handles free additive bundles") {
  ValuationProfile profile;
  profile.items = 2;
  profile.players.push_back(Valuation::additive({2.0, 2.0}));
  Vec y = {0.0};
  Vec z = {0.0, 0.0};
  DemandResult r = auction_demand_oracle(y, z, profile);
  CHECK(r.player == 0);
  CHECK(r.bundle == std::vector<int>{0, 1});
  CHECK(r.ratio == doctest::Approx(0.0));
}

TEST_CASE("demand oracle drops overpriced additive items") {
  ValuationProfile profile;
  profile.items = 2;
  profile.players.push_back(Valuation::additive({4.0, 1.0}));
  Vec y = {2.0};
  Vec z = {1.0, 3.0};
  DemandResult r = auction_demand_oracle(y, z, profile);
  CHECK(r.player == 0);
  // Item 1 costs 3 for value 1; taking it can only hurt the ratio.
  CHECK(r.bundle == std::vector<int>{0});
  CHECK(r.ratio == doctest::Approx(0.75));  // (2 + 1) / 4
}

TEST_CASE("demand oracle picks the best player overall") {
  ValuationProfile profile;
  profile.items = 2;
  profile.players.push_back(Valuation::single_minded({0}, 1.0));
  profile.players.push_back(Valuation::single_minded({1}, 10.0));
  Vec y = {0.5, 0.5};
  Vec z = {0.5, 0.5};
  DemandResult r = auction_demand_oracle(y, z, profile);
  CHECK(r.player == 1);  // ratio 0.1 beats 1.0
  CHECK(r.ratio == doctest::Approx(0.1));
}

TEST_CASE("auction packing produces a feasible near-optimal allocation") {
  SeededRng seeds(2024);
  for (int trial = 0; trial < 10; ++trial) {
    auto kind = trial % 2 == 0 ? InstanceKind::single_minded_uniform
                               : InstanceKind::additive_uniform;
    AuctionInstance instance = generate_instance(kind, int(seeds.uniform_int(1, 3)),
                                                 int(seeds.uniform_int(2, 4)), seeds.next_u64());
    double epsilon = 0.25;
    AuctionPackingResult result = solve_auction_packing(instance, epsilon);

    CHECK(instance.feasible_fractional(result.allocation));
    double welfare = 0.0;
    for (int i = 0; i < instance.players(); ++i) {
      welfare += instance.player_value(i, result.allocation);
    }
    CHECK(result.welfare == doctest::Approx(welfare).epsilon(1e-9));
    CHECK(result.welfare >= (1.0 - epsilon) * result.solution.upper_bound - 1e-9);

    LpResult opt = lp_max_vertex(instance.lp_rows(), instance.lp_rhs(),
                                 instance.valuation_weights());
    REQUIRE(opt.feasible);
    CHECK(result.solution.upper_bound >= opt.objective * (1.0 - 1e-9));
    CHECK(result.welfare <= opt.objective * (1.0 + 1e-9));
  }
}

TEST_CASE("epsilon bounds are enforced") {
  MatrixInstance inst;
  inst.A = {{1.0}};
  inst.b = {1.0};
  inst.c = {1.0};
  CHECK_THROWS_AS(solve_matrix(inst, 0.0, 1.0), error);
  CHECK_THROWS_AS(solve_matrix(inst, 0.51, 1.0), error);
}
