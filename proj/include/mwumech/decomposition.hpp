#pragma once
// Exact convex decomposition of (α/(1+4ε))·x* into integral points of a
// packing domain, using only an integrality-gap verifier.
//
// Two stages: find_dominating_combination reduces domination to a unit
// covering LP over s+1 rows (one per support coordinate of x*, plus a Σλ ≥ 1
// row) whose column oracle wraps the verifier; exact_decompose then converts
// domination into equality by repeatedly either subtracting a unit from an
// over-covered coordinate of one point or splitting a term into (shrunken
// original, zeroed copy), never leaving the domain thanks to downward closure.

#include <vector>

#include "mwumech/core.hpp"
#include "mwumech/covering.hpp"

namespace mwumech {

struct DominatingCombination {
  std::vector<ConvexDecomposition::Term> terms;  // λ normalized: Σλ = 1
  Vec target;                                    // (α/(1+4ε))·x*
  long long verifier_calls = 0;
  int support_size = 0;  // s = |support(x*)|
  // Record of the unit-covering run behind the combination (s ≥ 2 only; the
  // s ≤ 1 cases use a direct two-term construction).
  bool used_covering = false;
  CoveringSolution covering;
};

// Finds {(λ_i, x^i)} with Σλ = 1, x^i ∈ Q_I zeroed outside support(x*), and
// Σ λ_i x^i ≥ (α/(1+4ε))·x* componentwise (α = verifier.alpha()).  For s ≥ 2
// this costs at most s⌈ε⁻² ln s⌉ verifier calls and as many terms; s ≤ 1 needs
// at most one call and two terms.
DominatingCombination find_dominating_combination(const FractionalPoint &x_star,
                                                  IntegralityGapVerifier &verifier, double epsilon,
                                                  const PackingDomain &domain);

// Algorithm: maintain the gap Δ_j = Σλx_j − target_j ≥ 0; while some Δ_j is
// above tolerance, either subtract a unit coordinate from a point (when some
// Δ_j ≥ λ_i allows it) or split the first usable term at θ = min_k Δ_k/x^i_k.
// Adds at most |support(target)| terms.  Input must dominate the target.
ConvexDecomposition exact_decompose(const FractionalPoint &x_star_scaled,
                                    const DominatingCombination &dominating,
                                    const PackingDomain &domain);

struct DecompositionResult {
  ConvexDecomposition decomposition;
  Vec target;                  // (α/(1+4ε))·x*
  double alpha = 0.0;          // verifier factor used for the scaling
  int support_size = 0;        // s
  long long verifier_calls = 0;
  long long terms_added = 0;   // terms appended by the exactness conversion
  double residual_norm = 0.0;  // ‖Σλx − target‖∞
  DominatingCombination dominating;
};

// End-to-end: dominating combination, then exact conversion; checks the
// residual against 1e-9·(1+‖x*‖∞) before returning.
DecompositionResult convex_decompose(const FractionalPoint &x_star,
                                     IntegralityGapVerifier &verifier, double epsilon,
                                     const PackingDomain &domain);

}  // namespace mwumech
