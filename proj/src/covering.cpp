#include "mwumech/covering.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mwumech/log.hpp"

namespace mwumech {
namespace {

struct SolveOptions {
  double epsilon = 0.0;
  double kappa = 1.0;
  double threshold_override = 0.0;
  bool unit_contract = false;
};

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 0.5) {
    fail(errc::argument, "epsilon must lie in (0, 1/2]");
  }
}

CoveringSolution solve_impl(const CoveringProblem &problem, const SolveOptions &opts) {
  check_epsilon(opts.epsilon);
  if (!(opts.kappa > 0.0) || opts.kappa > 1.0) fail(errc::argument, "kappa must lie in (0, 1]");
  const int m = problem.num_rows;
  if (m < 1) fail(errc::argument, "covering problem needs at least one row");
  if ((int)problem.row_targets.size() != m) fail(errc::argument, "row_targets length mismatch");
  for (double b : problem.row_targets) {
    if (!(b > 0.0)) fail(errc::argument, "row targets must be positive");
  }
  if (!problem.oracle) fail(errc::argument, "covering problem has no oracle");

  const double eps = opts.epsilon;
  double T = opts.threshold_override > 0.0 ? opts.threshold_override
                                           : std::log((double)m) / (eps * eps);
  // ln(1)/ε² = 0 would make the loop exit with an undefined 0/0 scaling; the
  // proof only needs the final min load to be ≥ max(T, 1) ≥ ln(m)/ε².
  T = std::max(T, 1.0);
  // Stop tolerance: bottleneck load bumps are exactly 1 in real arithmetic but
  // carry a few ulps of division noise in floats.
  const double T_eff = T - 1e-9;

  CoveringState state;
  state.row_loads.assign(m, 0.0);
  state.active.assign(m, 1);
  state.threshold = T;

  // column id -> (accumulated raw value, cost)
  std::map<long long, std::pair<double, double>> x_raw;
  const long long cap = 2LL * m * (long long)std::ceil(T) + 2;
  long long oracle_calls = 0;

  while (true) {
    double min_load = state.row_loads[0];
    for (double l : state.row_loads) min_load = std::min(min_load, l);
    if (min_load >= T_eff) break;
    for (int i = 0; i < m; ++i) state.active[i] = state.row_loads[i] < T_eff ? 1 : 0;

    Vec z = weight_vector(state, eps);
    ColumnOracleResponse resp = problem.oracle(z);
    ++oracle_calls;

    if (!(resp.cost > 0.0)) fail(errc::oracle, "oracle returned a non-positive column cost");
    if (opts.unit_contract && std::abs(resp.cost - 1.0) > kZeroTol) {
      fail(errc::oracle, "unit-covering oracle must return cost-1 columns");
    }
    double column_value = 0.0;
    double delta = 0.0;
    bool has_active_entry = false;
    for (auto &[row, a] : resp.entries) {
      if (row < 0 || row >= m) fail(errc::oracle, "oracle entry row out of range");
      if (a < 0.0) fail(errc::oracle, "oracle entry must be non-negative");
      if (a == 0.0) continue;
      column_value += z[row] * a;
      if (state.active[row]) {
        double step = problem.row_targets[row] / a;
        if (!has_active_entry || step < delta) delta = step;
        has_active_entry = true;
      }
    }
    if (!has_active_entry) {
      fail(errc::oracle, "oracle returned a column with zero entries on all active rows");
    }
    if (opts.unit_contract && column_value < 1.0 - kFeasTol) {
      fail(errc::contract, strf("unit-covering oracle contract violated: z'a = %.17g < 1",
                                column_value));
    }

    auto [it, inserted] = x_raw.try_emplace(resp.column_id, 0.0, resp.cost);
    if (!inserted && std::abs(it->second.second - resp.cost) > kZeroTol * (1.0 + resp.cost)) {
      fail(errc::oracle, "oracle returned inconsistent costs for one column id");
    }
    it->second.first += delta;

    for (auto &[row, a] : resp.entries) {
      if (a == 0.0) continue;
      double inc = delta * a / problem.row_targets[row];
      // Active rows move by at most one unit per iteration — the step size is
      // the bottleneck over exactly those rows.
      if (state.active[row] && inc > 1.0 + 1e-9) {
        fail(errc::internal, "active-row load increment exceeded 1");
      }
      state.row_loads[row] += inc;
    }

    ++state.iteration;
    if (state.iteration > cap) {
      fail(errc::tripwire,
           strf("covering iteration tripwire (%lld) exceeded; oracle contract suspect",
                (long long)cap));
    }
    if (log_level() >= LogLevel::trace) {
      log_trace(strf("cover iter=%lld col=%lld delta=%.6g", state.iteration,
                     resp.column_id, delta));
    }
  }

  CoveringSolution sol;
  sol.iterations = state.iteration;
  sol.oracle_calls = oracle_calls;
  sol.threshold = T;
  sol.final_loads = state.row_loads;
  double M = state.row_loads.empty() ? 0.0 : state.row_loads[0];
  for (double l : state.row_loads) M = std::min(M, l);
  if (!(M > 0.0)) fail(errc::internal, "covering terminated with zero minimum load");
  sol.scale = M;
  for (auto &[id, entry] : x_raw) {
    double value = entry.first / M;
    sol.x_hat.emplace_back(id, value);
    sol.objective += entry.second * value;
  }
  double min_scaled = 1.0;
  for (double l : state.row_loads) min_scaled = std::min(min_scaled, l / M);
  sol.min_load = min_scaled;
  return sol;
}

}  // namespace

Vec weight_vector(const CoveringState &state, double epsilon) {
  check_epsilon(epsilon);
  const int m = (int)state.row_loads.size();
  if ((int)state.active.size() != m) fail(errc::argument, "state active list length mismatch");
  const double log1me = std::log1p(-epsilon);
  double max_log = 0.0;
  bool any_active = false;
  for (int i = 0; i < m; ++i) {
    if (!state.active[i]) continue;
    double lp = state.row_loads[i] * log1me;
    if (!any_active || lp > max_log) max_log = lp;
    any_active = true;
  }
  if (!any_active) fail(errc::internal, "weight_vector called with an empty active list");

  Vec z(m, 0.0);
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    if (!state.active[i]) continue;
    z[i] = std::exp(state.row_loads[i] * log1me - max_log);
    sum += z[i];
  }
  for (double &v : z) v /= sum;
  return z;
}

CoveringSolution solve_covering(const CoveringProblem &problem, double epsilon, double kappa) {
  SolveOptions opts;
  opts.epsilon = epsilon;
  opts.kappa = kappa;
  return solve_impl(problem, opts);
}

CoveringSolution solve_covering_unit(int num_rows, const ColumnOracle &oracle, double epsilon,
                                     double threshold_override) {
  CoveringProblem problem;
  problem.num_rows = num_rows;
  problem.row_targets.assign(num_rows, 1.0);
  problem.oracle = oracle;
  SolveOptions opts;
  opts.epsilon = epsilon;
  opts.threshold_override = threshold_override;
  opts.unit_contract = true;
  return solve_impl(problem, opts);
}

void check_normalized_weights(const Vec &z) {
  double sum = 0.0;
  for (double v : z) {
    if (v < 0.0) fail(errc::contract, "unit-oracle weights must be non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kFeasTol) {
    fail(errc::contract, strf("unit-oracle weights must be normalized; 1'z = %.17g", sum));
  }
}

ColumnOracle make_matrix_covering_oracle(const std::vector<Vec> &A, const Vec &b, const Vec &c,
                                         double kappa) {
  const int m = (int)A.size();
  const int n = m > 0 ? (int)A[0].size() : (int)c.size();
  if ((int)b.size() != m || (int)c.size() != n) {
    fail(errc::argument, "matrix oracle shape mismatch");
  }
  for (const Vec &row : A) {
    if ((int)row.size() != n) fail(errc::argument, "matrix oracle ragged rows");
  }
  for (double cost : c) {
    if (!(cost > 0.0)) fail(errc::argument, "matrix oracle needs positive costs");
  }
  if (!(kappa > 0.0) || kappa > 1.0) fail(errc::argument, "kappa must lie in (0, 1]");

  return [A, b, c, kappa, m, n](const Vec &z) -> ColumnOracleResponse {
    if ((int)z.size() != m) fail(errc::argument, "oracle weight length mismatch");
    Vec ratio(n, 0.0);
    double best = -1.0;
    for (int j = 0; j < n; ++j) {
      double value = 0.0;
      for (int i = 0; i < m; ++i) value += z[i] * A[i][j] / b[i];
      ratio[j] = value / c[j];
      best = std::max(best, ratio[j]);
    }
    int chosen = -1;
    for (int j = 0; j < n; ++j) {
      // κ = 1 keeps the true argmax (lowest index on ties); κ < 1 returns the
      // first column within the κ factor, the worst the contract allows.
      if (ratio[j] >= kappa * best - kZeroTol) {
        chosen = j;
        break;
      }
    }
    if (chosen < 0) fail(errc::internal, "matrix oracle found no column");
    ColumnOracleResponse resp;
    resp.column_id = chosen;
    resp.cost = c[chosen];
    for (int i = 0; i < m; ++i) {
      if (A[i][chosen] != 0.0) resp.entries.emplace_back(i, A[i][chosen]);
    }
    return resp;
  };
}

}  // namespace mwumech
