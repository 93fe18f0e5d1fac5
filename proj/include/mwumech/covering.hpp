#pragma once
// MWU solver for covering LPs (min cᵀx, Ax ≥ b, x ≥ 0) in the oracle model.
//
// The solver keeps per-row loads A_i·x/b_i, weights active rows by
// (1−ε)^load, asks a column oracle for a good column under the normalized
// weights, and steps so the tightest active row gains exactly one unit of
// load.  It stops once every row's load reaches T = ln(m)/ε² and returns
// x̂ = x/min_load, which is feasible by construction.  With an oracle that
// maximizes value-per-cost within a factor κ the objective satisfies
// cᵀx̂ ≤ (1+4ε)/κ · optimum.

#include <functional>
#include <utility>
#include <vector>

#include "mwumech/core.hpp"

namespace mwumech {

// One column of the constraint matrix, produced on demand by an oracle.
struct ColumnOracleResponse {
  long long column_id = 0;                       // opaque, stable identifier
  double cost = 1.0;                             // c_j > 0
  std::vector<std::pair<int, double>> entries;   // sparse (row, a_ij ≥ 0)
};

// Called with the normalized row weights (full length m, zero on inactive
// rows).  The covering oracle returns a column with (zᵀa_j/b)/c_j within a
// factor κ of the maximum.
using ColumnOracle = std::function<ColumnOracleResponse(const Vec &)>;

struct CoveringProblem {
  int num_rows = 0;
  Vec row_targets;  // b > 0, length num_rows
  ColumnOracle oracle;
};

struct CoveringState {
  Vec row_loads;             // A_i x / b_i, non-decreasing
  std::vector<char> active;  // load < threshold
  double threshold = 0.0;
  long long iteration = 0;
};

// Normalized weights z with z_i ∝ (1−ε)^load_i on active rows, 0 elsewhere.
// Computed in log space so loads near the threshold cannot underflow.
Vec weight_vector(const CoveringState &state, double epsilon);

struct CoveringSolution {
  std::vector<std::pair<long long, double>> x_hat;  // sorted by column id
  long long iterations = 0;
  long long oracle_calls = 0;
  double objective = 0.0;  // cᵀx̂
  double min_load = 0.0;   // min_i A_i x̂ / b_i (≥ 1 − 1e-9)
  double threshold = 0.0;  // T actually used
  double scale = 0.0;      // the min pre-scaling load M dividing x
  Vec final_loads;         // pre-scaling loads at termination
};

// General solver; epsilon ∈ (0, 1/2], kappa ∈ (0, 1].
CoveringSolution solve_covering(const CoveringProblem &problem, double epsilon, double kappa);

// Corollary-style variant with b = c = 1: the oracle receives normalized
// weights z (1ᵀz = 1) and must return a column with zᵀa_j ≥ 1, checked per
// response.  `threshold_override` > 0 replaces T = ln(m)/ε² (the dominating-
// combination reduction runs the (s+1)-row system at T = ln(s)/ε²).
CoveringSolution solve_covering_unit(int num_rows, const ColumnOracle &oracle, double epsilon,
                                     double threshold_override = 0.0);

// Raises a contract error unless 1ᵀz = 1 within 1e-9; guards direct use of the
// unit-oracle interface with unnormalized weights.
void check_normalized_weights(const Vec &z);

// Exact (κ = 1) oracle over an explicit matrix: picks the column maximizing
// (Σ_i z_i a_ij / b_i)/c_j, lowest index on ties.  With kappa < 1 it instead
// returns the lowest-indexed column within factor kappa of that maximum,
// deterministically exercising the approximate-oracle analysis.
ColumnOracle make_matrix_covering_oracle(const std::vector<Vec> &A, const Vec &b, const Vec &c,
                                         double kappa = 1.0);

}  // namespace mwumech
