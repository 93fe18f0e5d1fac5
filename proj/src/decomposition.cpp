#include "mwumech/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mwumech/log.hpp"

namespace mwumech {
namespace {

// Indices outside the support of x*, for zeroing returned points.
std::vector<int> off_support(const FractionalPoint &x_star) {
  std::vector<int> out;
  std::size_t next = 0;
  for (int j = 0; j < x_star.dimension(); ++j) {
    if (next < x_star.support.size() && x_star.support[next] == j) {
      ++next;
    } else {
      out.push_back(j);
    }
  }
  return out;
}

IntegralPoint axis_point(int dimension, int j, long long value) {
  IntegralPoint p;
  p.coords.assign(dimension, 0);
  p.coords[j] = value;
  return p;
}

// s ≤ 1: the target is θ·e_j (or zero), decomposed directly as a two-point
// mixture of ⌊θ⌋·e_j and ⌈θ⌉·e_j.  The ceiling point is feasible by downward
// closure when ⌈θ⌉ ≤ x*_j; otherwise one verifier call on v = e_j returns an
// integral point whose j-th coordinate is ≥ α·x*_j ≥ θ, so ≥ ⌈θ⌉.
DominatingCombination decompose_axis(const FractionalPoint &x_star, CheckedVerifier &verifier,
                                     const Vec &target, const PackingDomain &domain) {
  DominatingCombination out;
  out.target = target;
  out.support_size = (int)x_star.support.size();
  const int d = x_star.dimension();
  if (x_star.support.empty()) {
    out.terms.push_back({1.0, axis_point(d, 0, 0)});
    return out;
  }
  const int j = x_star.support[0];
  const double theta = target[j];
  double lo = std::floor(theta);
  double f = theta - lo;
  if (f <= kZeroTol * (1.0 + theta)) f = 0.0;

  long long low_val = (long long)lo;
  std::vector<ConvexDecomposition::Term> terms;
  if (f == 0.0) {
    terms.push_back({1.0, axis_point(d, j, low_val)});
  } else {
    terms.push_back({1.0 - f, axis_point(d, j, low_val)});
    terms.push_back({f, axis_point(d, j, low_val + 1)});
  }
  long long top = terms.back().point.coords[j];
  if ((double)top > x_star.coords[j] + kFeasTol) {
    // Downward closure does not cover the ceiling point; ask the verifier.
    Vec v(d, 0.0);
    v[j] = 1.0;
    IntegralPoint witness = verifier.run(v, x_star);
    if (witness.coords[j] < top) {
      fail(errc::contract,
           strf("verifier witness has coordinate %lld < required %lld", witness.coords[j], top));
    }
  }
  for (ConvexDecomposition::Term &t : terms) {
    if (!verify_membership(domain, t.point)) {
      fail(errc::contract, "axis decomposition produced an infeasible point");
    }
  }
  out.terms = std::move(terms);
  return out;
}

}  // namespace

DominatingCombination find_dominating_combination(const FractionalPoint &x_star,
                                                  IntegralityGapVerifier &verifier, double epsilon,
                                                  const PackingDomain &domain) {
  x_star.validate();
  if (x_star.dimension() != domain.dimension()) {
    fail(errc::argument, "point dimension does not match domain dimension");
  }
  if (!(epsilon > 0.0) || epsilon > 0.5) fail(errc::argument, "epsilon must lie in (0, 1/2]");
  const double alpha = verifier.alpha();
  if (!(alpha > 0.0) || alpha > 1.0) fail(errc::argument, "verifier alpha must lie in (0, 1]");

  const int d = x_star.dimension();
  const int s = (int)x_star.support.size();
  const double gamma = alpha / (1.0 + 4.0 * epsilon);
  Vec target(d, 0.0);
  for (int j : x_star.support) target[j] = gamma * x_star.coords[j];

  CheckedVerifier checked(verifier);
  if (s <= 1) {
    DominatingCombination out = decompose_axis(x_star, checked, target, domain);
    out.verifier_calls = checked.calls();
    return out;
  }

  // Unit covering over s+1 rows: row p < s demands Σ_i λ_i x^i_{j_p} ≥ α·x*_{j_p}
  // (coefficients x_{j_p}/(α·x*_{j_p})), row s demands Σλ ≥ 1.  Each oracle
  // call turns the active coordinate weights into a valuation for the
  // verifier; the verifier contract makes the returned column's weighted
  // value ≥ 1.  Once only the Σλ row is active, the zero point covers it for
  // free — no verifier call.
  const std::vector<int> &support = x_star.support;
  const std::vector<int> complement = off_support(x_star);
  std::vector<IntegralPoint> points;
  std::map<std::vector<long long>, long long> point_ids;
  auto intern = [&](IntegralPoint p) -> long long {
    auto [it, inserted] = point_ids.try_emplace(p.coords, (long long)points.size());
    if (inserted) points.push_back(std::move(p));
    return it->second;
  };

  ColumnOracle oracle = [&](const Vec &weights) -> ColumnOracleResponse {
    ColumnOracleResponse resp;
    resp.cost = 1.0;
    bool coordinate_active = false;
    for (int p = 0; p < s; ++p) coordinate_active = coordinate_active || weights[p] > 0.0;
    if (!coordinate_active) {
      resp.column_id = intern(axis_point(d, 0, 0));
      resp.entries.emplace_back(s, 1.0);
      return resp;
    }
    Vec v(d, 0.0);
    for (int p = 0; p < s; ++p) {
      v[support[p]] = weights[p] / (alpha * x_star.coords[support[p]]);
    }
    IntegralPoint x = zero_out(domain, checked.run(v, x_star), complement);
    if (!verify_membership(domain, x)) {
      fail(errc::contract, "verifier point infeasible after support restriction");
    }
    resp.column_id = intern(x);
    for (int p = 0; p < s; ++p) {
      long long c = x.coords[support[p]];
      if (c > 0) resp.entries.emplace_back(p, (double)c / (alpha * x_star.coords[support[p]]));
    }
    resp.entries.emplace_back(s, 1.0);
    return resp;
  };

  const double threshold = std::log((double)s) / (epsilon * epsilon);
  CoveringSolution covering = solve_covering_unit(s + 1, oracle, epsilon, threshold);

  // The solver's x̂ has every row load ≥ 1, so the raw weights dominate α·x*
  // and sum to Λ ≤ 1+4ε; normalizing by Λ yields a convex combination
  // dominating (α/(1+4ε))·x*.  The zero point only padded the Σλ row.
  DominatingCombination out;
  out.target = target;
  out.support_size = s;
  out.used_covering = true;
  out.covering = covering;
  out.verifier_calls = checked.calls();
  double sum = 0.0;
  for (auto &[id, value] : covering.x_hat) {
    if (points[id].is_zero()) continue;
    sum += value;
  }
  if (!(sum > 0.0)) fail(errc::internal, "dominating combination collapsed to the zero point");
  for (auto &[id, value] : covering.x_hat) {
    if (points[id].is_zero() || value <= 0.0) continue;
    out.terms.push_back({value / sum, points[id]});
  }
  for (int p = 0; p < s; ++p) {
    double got = 0.0;
    for (const ConvexDecomposition::Term &t : out.terms) {
      got += t.lambda * (double)t.point.coords[support[p]];
    }
    if (got < target[support[p]] - kFeasTol * (1.0 + target[support[p]])) {
      fail(errc::internal, strf("dominating combination misses target at coordinate %d", support[p]));
    }
  }
  return out;
}

ConvexDecomposition exact_decompose(const FractionalPoint &x_star_scaled,
                                    const DominatingCombination &dominating,
                                    const PackingDomain &domain) {
  const int d = x_star_scaled.dimension();
  const Vec &t = x_star_scaled.coords;
  std::vector<ConvexDecomposition::Term> terms = dominating.terms;
  if (terms.empty()) fail(errc::argument, "dominating combination has no terms");
  for (const ConvexDecomposition::Term &term : terms) {
    if (!(term.lambda > 0.0)) fail(errc::argument, "dominating combination has a non-positive weight");
    if (!verify_membership(domain, term.point)) {
      fail(errc::argument, "dominating combination contains an infeasible point");
    }
  }

  const int s = (int)x_star_scaled.support.size();
  const long long cap = (long long)terms.size() * (d + 1) + (long long)s * d;
  long long iterations = 0;

  auto tolerance = [&](int j) { return 1e-9 * (1.0 + t[j]); };

  while (true) {
    // Recompute the gap from scratch each pass; incremental updates would
    // accumulate float drift across many subtractions.
    Vec gap(d, 0.0);
    for (const ConvexDecomposition::Term &term : terms) {
      for (int j = 0; j < d; ++j) gap[j] += term.lambda * (double)term.point.coords[j];
    }
    double total_gap = 0.0;
    int positive = 0;
    bool any_above = false;
    for (int j = 0; j < d; ++j) {
      gap[j] -= t[j];
      if (gap[j] < -tolerance(j)) {
        fail(iterations == 0 ? errc::argument : errc::internal,
             strf("combination undershoots coordinate %d by %.3g", j, -gap[j]));
      }
      total_gap += gap[j];
      if (gap[j] > tolerance(j)) {
        ++positive;
        any_above = true;
      }
    }
    if (!any_above) break;

    ++iterations;
    if (iterations > cap) {
      fail(errc::internal, "exact decomposition exceeded its iteration bound");
    }

    // Unit-subtraction branch: the first (term, coordinate) whose whole
    // weight fits inside the gap; decreases ΣΔ by that term's λ.
    double subtracted_weight = -1.0;
    for (std::size_t i = 0; i < terms.size() && subtracted_weight < 0.0; ++i) {
      if (!(terms[i].lambda > 0.0)) continue;
      for (int j = 0; j < d; ++j) {
        if (terms[i].point.coords[j] >= 1 && gap[j] >= terms[i].lambda) {
          IntegralPoint reduced = terms[i].point;
          reduced.coords[j] -= 1;
          if (!verify_membership(domain, reduced)) {
            fail(errc::internal, "unit subtraction left the packing domain");
          }
          terms[i].point = std::move(reduced);
          subtracted_weight = terms[i].lambda;
          break;
        }
      }
    }
    if (subtracted_weight >= 0.0) {
      // Progress check: ΣΔ dropped by exactly the touched term's λ.
      Vec check(d, 0.0);
      for (const ConvexDecomposition::Term &term : terms) {
        for (int j = 0; j < d; ++j) check[j] += term.lambda * (double)term.point.coords[j];
      }
      double new_total = 0.0;
      for (int j = 0; j < d; ++j) new_total += check[j] - t[j];
      if (new_total > total_gap - subtracted_weight + 1e-9 * (1.0 + total_gap)) {
        fail(errc::internal, "unit subtraction did not reduce the total gap by its weight");
      }
      continue;
    }

    // Split branch: shrink the first positive term to its tight scale θ and
    // bank the remainder on a copy zeroed wherever the gap is still open;
    // coordinate k with minimal Δ_k/x_k closes exactly.
    std::size_t chosen = terms.size();
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (!(terms[i].lambda > 0.0)) continue;
      bool eligible = false;
      for (int j = 0; j < d && !eligible; ++j) {
        eligible = terms[i].point.coords[j] >= 1 && gap[j] > tolerance(j);
      }
      if (eligible) {
        chosen = i;
        break;
      }
    }
    if (chosen == terms.size()) {
      fail(errc::internal, "gap is open but no term can close it");
    }
    const IntegralPoint &point = terms[chosen].point;
    double theta = 0.0;
    bool have_theta = false;
    for (int j = 0; j < d; ++j) {
      if (point.coords[j] >= 1 && gap[j] > tolerance(j)) {
        double ratio = gap[j] / (double)point.coords[j];
        if (!have_theta || ratio < theta) {
          theta = ratio;
          have_theta = true;
        }
      }
    }
    if (!have_theta) fail(errc::internal, "split branch found no open coordinate");
    if (theta >= terms[chosen].lambda) {
      // Would have been a unit subtraction: Δ_j ≥ θ·x_j ≥ λ at that j.
      fail(errc::internal, "split scale reached the term weight");
    }
    std::vector<int> open;
    for (int j = 0; j < d; ++j) {
      if (gap[j] > tolerance(j)) open.push_back(j);
    }
    IntegralPoint rest = zero_out(domain, point, open);
    if (!verify_membership(domain, rest)) {
      fail(errc::internal, "zeroed split point left the packing domain");
    }
    terms[chosen].lambda -= theta;
    terms.push_back({theta, std::move(rest)});

    // Progress check: the count of over-covered coordinates strictly drops.
    {
      Vec check(d, 0.0);
      for (const ConvexDecomposition::Term &term : terms) {
        for (int j = 0; j < d; ++j) check[j] += term.lambda * (double)term.point.coords[j];
      }
      int now_positive = 0;
      for (int j = 0; j < d; ++j) {
        if (check[j] - t[j] > tolerance(j)) ++now_positive;
      }
      if (now_positive >= positive) {
        fail(errc::internal, "split branch did not reduce the open-coordinate count");
      }
    }
  }

  ConvexDecomposition out;
  out.terms = std::move(terms);
  return out;
}

DecompositionResult convex_decompose(const FractionalPoint &x_star,
                                     IntegralityGapVerifier &verifier, double epsilon,
                                     const PackingDomain &domain) {
  DecompositionResult result;
  result.dominating = find_dominating_combination(x_star, verifier, epsilon, domain);
  result.target = result.dominating.target;
  result.alpha = verifier.alpha();
  result.support_size = result.dominating.support_size;
  result.verifier_calls = result.dominating.verifier_calls;

  FractionalPoint scaled = FractionalPoint::from_coords(result.target);
  result.decomposition = exact_decompose(scaled, result.dominating, domain);
  result.terms_added =
      (long long)result.decomposition.terms.size() - (long long)result.dominating.terms.size();

  Vec achieved = result.decomposition.combination(x_star.dimension());
  double norm = 0.0;
  double xnorm = 0.0;
  for (int j = 0; j < x_star.dimension(); ++j) {
    norm = std::max(norm, std::abs(achieved[j] - result.target[j]));
    xnorm = std::max(xnorm, x_star.coords[j]);
  }
  result.residual_norm = norm;
  if (norm > 1e-9 * (1.0 + xnorm)) {
    fail(errc::internal, strf("decomposition residual %.3g exceeds tolerance", norm));
  }
  double weight = result.decomposition.weight_sum();
  if (std::abs(weight - 1.0) > 1e-12) {
    fail(errc::internal, strf("decomposition weights sum to %.17g", weight));
  }
  return result;
}

}  // namespace mwumech
