#pragma once
// MWU solver for packing LPs (max cᵀx, Ax ≤ b, x ≥ 0) in the oracle model,
// plus the combinatorial-auction demand oracle that drives it.
//
// The solver keeps per-row loads A_i·x/b_i, weights rows by Π(1+ε'·increment),
// asks the oracle for a column of approximately minimal weighted-cost ratio,
// and steps so the tightest row gains exactly one unit of load.  It stops once
// the maximum load reaches T' = ln(m)/ε'² (ε' = ε/2) and scales by the maximum
// load, which keeps every row within capacity.  Each queried column also
// yields a dual bound OPT ≤ 1/(κ·ratio); the certificate below makes the
// guarantee objective ≥ (1−ε)·κ·upper_bound checkable without an external
// reference optimum.

#include <utility>
#include <vector>

#include "mwumech/auction.hpp"
#include "mwumech/core.hpp"
#include "mwumech/covering.hpp"

namespace mwumech {

struct PackingProblem {
  int num_rows = 0;
  Vec row_capacities;         // b > 0, length num_rows
  double oracle_kappa = 1.0;  // κ ∈ (0,1] promised by the oracle
  // Receives normalized row weights z (1ᵀz = 1) and returns a column whose
  // ratio (Σ_i z_i a_ij / b_i)/c_j is within a factor 1/κ of the minimum.
  // Every column must have a nonzero entry (an all-zero column makes the LP
  // unbounded and is rejected as a malformed response).
  ColumnOracle oracle;
};

struct PackingSolution {
  std::vector<std::pair<long long, double>> x_hat;  // sorted by column id
  long long iterations = 0;
  long long oracle_calls = 0;
  double objective = 0.0;    // cᵀx̂
  double upper_bound = 0.0;  // certified OPT ≤ upper_bound
  double max_load = 0.0;     // max_i A_i x̂ / b_i (≤ 1)
  double threshold = 0.0;    // T' actually used
  double scale = 0.0;        // the max pre-scaling load dividing x
  Vec final_loads;           // pre-scaling loads at termination
};

// epsilon ∈ (0, 1/2]; guarantees objective ≥ (1−ε)·κ·upper_bound with
// upper_bound ≥ OPT ≥ objective.
PackingSolution solve_packing(const PackingProblem &problem, double epsilon);

// Exact (κ = 1) oracle over an explicit matrix: picks the column minimizing
// (Σ_i z_i a_ij / b_i)/c_j, lowest index on ties.  With kappa < 1 it returns
// the lowest-indexed column within factor 1/kappa of that minimum.
ColumnOracle make_matrix_packing_oracle(const std::vector<Vec> &A, const Vec &b, const Vec &c,
                                        double kappa = 1.0);

// Combinatorial-auction demand oracle: given a fixed cost y_k per player and a
// price z_j per item, returns the (player, bundle) minimizing
// (y_k + Σ_{j∈S} z_j)/v_k(S).  Single-minded players are scored on their
// interest bundle (supersets only add cost); additive players via binary
// search on the threshold price β, keeping items with z_j ≤ β·a_j.
struct DemandResult {
  int player = -1;
  std::vector<int> bundle;  // sorted item indices, nonempty
  double ratio = 0.0;       // (y + Σ z)/v, recomputed exactly for the result
};

DemandResult auction_demand_oracle(const Vec &y, const Vec &z, const ValuationProfile &profile);

// Bundle-column packing LP for an auction (player rows + item rows, all
// capacities 1) solved with the demand oracle, decoded back to the instance's
// coordinate space.  This is the MWU ε-approximation allocator.
struct AuctionPackingResult {
  PackingSolution solution;  // in bundle-column space
  Vec allocation;            // coordinate-space fractional point, in Q
  double welfare = 0.0;      // Σ_i v_i(allocation) = solution.objective
};

AuctionPackingResult solve_auction_packing(const AuctionInstance &instance, double epsilon);

}  // namespace mwumech
