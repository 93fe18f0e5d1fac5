#include "mwumech/packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mwumech/log.hpp"

namespace mwumech {
namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 0.5) {
    fail(errc::argument, "epsilon must lie in (0, 1/2]");
  }
}

}  // namespace

PackingSolution solve_packing(const PackingProblem &problem, double epsilon) {
  check_epsilon(epsilon);
  if (!(problem.oracle_kappa > 0.0) || problem.oracle_kappa > 1.0) {
    fail(errc::argument, "kappa must lie in (0, 1]");
  }
  const int m = problem.num_rows;
  if (m < 1) fail(errc::argument, "packing problem needs at least one row");
  if ((int)problem.row_capacities.size() != m) fail(errc::argument, "row_capacities length mismatch");
  for (double b : problem.row_capacities) {
    if (!(b > 0.0)) fail(errc::argument, "row capacities must be positive");
  }
  if (!problem.oracle) fail(errc::argument, "packing problem has no oracle");

  // Internal step parameter ε' = ε/2 buys the (1−ε) certificate: the potential
  // argument gives objective ≥ (1−2ε')·κ·min_t dual-bound_t.
  const double eps = epsilon / 2.0;
  const double T = std::max(std::log((double)m) / (eps * eps), 1.0);
  const double T_eff = T - 1e-9;

  Vec loads(m, 0.0);
  Vec log_weights(m, 0.0);  // ln w_i = Σ ln(1 + ε'·increment)
  // column id -> (accumulated raw value, cost)
  std::map<long long, std::pair<double, double>> x_raw;
  const long long cap = 2LL * m * (long long)std::ceil(T) + 2;
  long long iterations = 0;
  long long oracle_calls = 0;
  double upper_bound = std::numeric_limits<double>::infinity();

  while (true) {
    double max_load = loads[0];
    for (double l : loads) max_load = std::max(max_load, l);
    if (max_load >= T_eff) break;

    // Normalized weights, shifted by the largest exponent before exp().
    Vec z(m, 0.0);
    double max_log = log_weights[0];
    for (double lw : log_weights) max_log = std::max(max_log, lw);
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      z[i] = std::exp(log_weights[i] - max_log);
      sum += z[i];
    }
    for (double &v : z) v /= sum;

    ColumnOracleResponse resp = problem.oracle(z);
    ++oracle_calls;

    if (!(resp.cost > 0.0)) fail(errc::oracle, "oracle returned a non-positive column cost");
    double weighted = 0.0;
    double delta = 0.0;
    bool has_entry = false;
    for (auto &[row, a] : resp.entries) {
      if (row < 0 || row >= m) fail(errc::oracle, "oracle entry row out of range");
      if (a < 0.0) fail(errc::oracle, "oracle entry must be non-negative");
      if (a == 0.0) continue;
      weighted += z[row] * a / problem.row_capacities[row];
      double step = problem.row_capacities[row] / a;
      if (!has_entry || step < delta) delta = step;
      has_entry = true;
    }
    if (!has_entry) {
      fail(errc::oracle, "oracle returned an all-zero column (LP would be unbounded)");
    }
    double ratio = weighted / resp.cost;
    if (ratio > 0.0) {
      upper_bound = std::min(upper_bound, 1.0 / (problem.oracle_kappa * ratio));
    }

    auto [it, inserted] = x_raw.try_emplace(resp.column_id, 0.0, resp.cost);
    if (!inserted && std::abs(it->second.second - resp.cost) > kZeroTol * (1.0 + resp.cost)) {
      fail(errc::oracle, "oracle returned inconsistent costs for one column id");
    }
    it->second.first += delta;

    for (auto &[row, a] : resp.entries) {
      if (a == 0.0) continue;
      double inc = delta * a / problem.row_capacities[row];
      // The step size is the bottleneck over the column's rows, so no row
      // moves by more than one unit per iteration.
      if (inc > 1.0 + 1e-9) fail(errc::internal, "row load increment exceeded 1");
      loads[row] += inc;
      log_weights[row] += std::log1p(eps * inc);
    }

    ++iterations;
    if (iterations > cap) {
      fail(errc::tripwire,
           strf("packing iteration tripwire (%lld) exceeded; oracle contract suspect",
                (long long)cap));
    }
    if (log_level() >= LogLevel::trace) {
      log_trace(strf("pack iter=%lld col=%lld delta=%.6g ratio=%.6g", iterations,
                     resp.column_id, delta, ratio));
    }
  }

  PackingSolution sol;
  sol.iterations = iterations;
  sol.oracle_calls = oracle_calls;
  sol.threshold = T;
  sol.final_loads = loads;
  sol.upper_bound = upper_bound;
  double M = loads[0];
  for (double l : loads) M = std::max(M, l);
  if (!(M > 0.0)) fail(errc::internal, "packing terminated with zero maximum load");
  sol.scale = M;
  for (auto &[id, entry] : x_raw) {
    double value = entry.first / M;
    sol.x_hat.emplace_back(id, value);
    sol.objective += entry.second * value;
  }
  double max_scaled = 0.0;
  for (double l : loads) max_scaled = std::max(max_scaled, l / M);
  sol.max_load = max_scaled;
  return sol;
}

ColumnOracle make_matrix_packing_oracle(const std::vector<Vec> &A, const Vec &b, const Vec &c,
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
  for (int j = 0; j < n; ++j) {
    bool nonzero = false;
    for (int i = 0; i < m; ++i) nonzero = nonzero || A[i][j] > 0.0;
    if (!nonzero) fail(errc::argument, "matrix column with no nonzero entry (unbounded LP)");
  }
  if (!(kappa > 0.0) || kappa > 1.0) fail(errc::argument, "kappa must lie in (0, 1]");

  return [A, b, c, kappa, m, n](const Vec &z) -> ColumnOracleResponse {
    if ((int)z.size() != m) fail(errc::argument, "oracle weight length mismatch");
    Vec ratio(n, 0.0);
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      double value = 0.0;
      for (int i = 0; i < m; ++i) value += z[i] * A[i][j] / b[i];
      ratio[j] = value / c[j];
      best = std::min(best, ratio[j]);
    }
    int chosen = -1;
    for (int j = 0; j < n; ++j) {
      // κ = 1 keeps the true argmin (lowest index on ties); κ < 1 returns the
      // first column within the 1/κ factor, the worst the contract allows.
      if (ratio[j] * kappa <= best + kZeroTol) {
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

DemandResult auction_demand_oracle(const Vec &y, const Vec &z, const ValuationProfile &profile) {
  const int n = profile.player_count();
  const int m = profile.items;
  if ((int)y.size() != n) fail(errc::argument, "player weight length mismatch");
  if ((int)z.size() != m) fail(errc::argument, "item weight length mismatch");
  for (double w : y) {
    if (!(w >= 0.0) || !std::isfinite(w)) fail(errc::argument, "player weights must be non-negative");
  }
  for (double w : z) {
    if (!(w >= 0.0) || !std::isfinite(w)) fail(errc::argument, "item weights must be non-negative");
  }

  DemandResult best;
  bool found = false;
  for (int k = 0; k < n; ++k) {
    const Valuation &val = profile.players[k];
    std::vector<int> bundle;
    double ratio = 0.0;
    if (val.kind == ValuationKind::single_minded) {
      if (!(val.value > 0.0)) continue;
      // Supersets of the interest bundle only add cost, so T₀ is optimal.
      double cost = y[k];
      for (int j : val.bundle) cost += z[j];
      bundle = val.bundle;
      ratio = cost / val.value;
    } else {
      double total_value = 0.0;
      double total_cost = y[k];
      for (int j = 0; j < m; ++j) {
        if (val.item_values[j] > 0.0) {
          total_value += val.item_values[j];
          total_cost += z[j];
        }
      }
      if (!(total_value > 0.0)) continue;
      // The best bundle at threshold β keeps items with z_j ≤ β·a_j, and a
      // bundle of ratio ≤ β exists iff y ≤ Σ_j (β·a_j − z_j)⁺ (nonempty max is
      // a single item when every term is negative).  Binary search for the
      // smallest such β; the all-positive-items bundle shows the upper end.
      auto margin = [&](double beta) {
        double positive_sum = 0.0;
        double best_single = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < m; ++j) {
          if (!(val.item_values[j] > 0.0)) continue;
          double t = beta * val.item_values[j] - z[j];
          if (t > 0.0) positive_sum += t;
          best_single = std::max(best_single, t);
        }
        return std::max(positive_sum, best_single) - y[k];
      };
      double hi = total_cost / total_value;
      double lo = 0.0;
      if (margin(lo) < 0.0) {
        for (int iter = 0; iter < 200 && hi - lo > 1e-12 * hi; ++iter) {
          double mid = 0.5 * (lo + hi);
          (margin(mid) >= 0.0 ? hi : lo) = mid;
        }
      } else {
        hi = lo;
      }
      for (int j = 0; j < m; ++j) {
        if (val.item_values[j] > 0.0 && z[j] <= hi * val.item_values[j]) bundle.push_back(j);
      }
      if (bundle.empty()) {
        // margin(hi) ≥ 0 forces at least the boundary item into the bundle.
        fail(errc::internal, "demand binary search produced an empty bundle");
      }
      double cost = y[k];
      double value = 0.0;
      for (int j : bundle) {
        cost += z[j];
        value += val.item_values[j];
      }
      ratio = cost / value;
    }
    if (!found || ratio < best.ratio) {
      best.player = k;
      best.bundle = std::move(bundle);
      best.ratio = ratio;
      found = true;
    }
  }
  if (!found) fail(errc::argument, "demand oracle: every player values every bundle at zero");
  return best;
}

AuctionPackingResult solve_auction_packing(const AuctionInstance &instance, double epsilon) {
  const int n = instance.players();
  const int m = instance.items();
  if (m > 40) fail(errc::capacity, "bundle-column ids support up to 40 items");
  const ValuationProfile &profile = instance.profile();

  PackingProblem problem;
  problem.num_rows = n + m;
  problem.row_capacities.assign(n + m, 1.0);
  problem.oracle_kappa = 1.0;
  // Column ids encode (player, item mask); rows 0..n−1 are per-player, rows
  // n..n+m−1 per-item.  The weighted column ratio is exactly the demand
  // oracle's (y_k + Σ_{j∈S} z_j)/v_k(S).
  problem.oracle = [&](const Vec &w) -> ColumnOracleResponse {
    Vec y(w.begin(), w.begin() + n);
    Vec z(w.begin() + n, w.end());
    DemandResult d = auction_demand_oracle(y, z, profile);
    ColumnOracleResponse resp;
    long long mask = 0;
    for (int j : d.bundle) mask |= 1LL << j;
    resp.column_id = ((long long)d.player << m) | mask;
    std::vector<char> item_mask(m, 0);
    for (int j : d.bundle) item_mask[j] = 1;
    resp.cost = profile.bundle_value(d.player, item_mask);
    resp.entries.emplace_back(d.player, 1.0);
    for (int j : d.bundle) resp.entries.emplace_back(n + j, 1.0);
    return resp;
  };

  AuctionPackingResult out;
  out.solution = solve_packing(problem, epsilon);
  out.allocation.assign(instance.dimension(), 0.0);
  for (auto &[id, value] : out.solution.x_hat) {
    int player = (int)(id >> m);
    long long mask = id & ((1LL << m) - 1);
    const Valuation &val = profile.players[player];
    if (val.kind == ValuationKind::single_minded) {
      out.allocation[instance.block_offset(player)] += value;
    } else {
      for (int j = 0; j < m; ++j) {
        if (mask & (1LL << j)) out.allocation[instance.block_offset(player) + j] += value;
      }
    }
  }
  out.welfare = out.solution.objective;
  return out;
}

}  // namespace mwumech
