#pragma once
// Combinatorial-auction packing domain.
//
// Coordinate layout: a single-minded player owns one variable (the fractional
// level at which their interest bundle is served); an additive player owns one
// variable per item.  Q is cut out by the per-item rows Σ x ≤ 1 plus the
// per-player cap x_k ≤ 1 for single-minded players (additive players may take
// several items, so they get no player row in this formulation).  Both
// valuation classes are linear over their own block, v_i(x) = w_iᵀx_i.

#include <cstdint>
#include <vector>

#include "mwumech/core.hpp"
#include "mwumech/rng.hpp"

namespace mwumech {

enum class ValuationKind { single_minded, additive };

struct Valuation {
  ValuationKind kind = ValuationKind::single_minded;
  std::vector<int> bundle;  // single-minded: sorted item indices, nonempty
  double value = 0.0;       // single-minded: value of the bundle
  Vec item_values;          // additive: one value per item

  static Valuation single_minded(std::vector<int> bundle, double value);
  static Valuation additive(Vec item_values);
};

struct ValuationProfile {
  int items = 0;
  std::vector<Valuation> players;

  int player_count() const { return (int)players.size(); }
  // v_k(T) for an item subset given as a mask of length `items`.
  double bundle_value(int player, const std::vector<char> &item_mask) const;
  // v_k over all items — the largest bundle value of either class.
  double grand_bundle_value(int player) const;
};

class AuctionInstance {
 public:
  explicit AuctionInstance(ValuationProfile profile);

  const ValuationProfile &profile() const { return profile_; }
  int players() const { return profile_.player_count(); }
  int items() const { return profile_.items; }
  int dimension() const { return dimension_; }
  int block_offset(int player) const { return offsets_[player]; }
  int block_size(int player) const;

  double player_value(int player, const Vec &x) const;
  double player_value(int player, const IntegralPoint &x) const;
  // Coefficient vector w with welfare(x) = wᵀx; player_weights zeroes all
  // blocks except the given player's.
  Vec valuation_weights() const;
  Vec player_weights(int player) const;

  // Row system of Q: per-item rows, then per-single-minded-player caps.
  const std::vector<Vec> &lp_rows() const { return rows_; }
  const Vec &lp_rhs() const { return rhs_; }

  bool feasible_integral(const IntegralPoint &x) const;
  bool feasible_fractional(const Vec &x) const;

  // The allocation uⁱ handing every item to the one player.
  IntegralPoint dominating_allocation(int player) const;

  // Q_I in lexicographic coordinate order (cached; capacity-guarded).
  const std::vector<IntegralPoint> &integral_points() const;

  // Same structure with one player's reported values scaled by `factor` ≥ 0.
  AuctionInstance with_player_value_scaled(int player, double factor) const;

 private:
  ValuationProfile profile_;
  std::vector<int> offsets_;
  int dimension_ = 0;
  std::vector<Vec> rows_;
  Vec rhs_;
  mutable std::vector<IntegralPoint> points_;
  mutable bool points_ready_ = false;
};

class AuctionDomain : public PackingDomain {
 public:
  explicit AuctionDomain(const AuctionInstance &instance) : instance_(&instance) {}
  int dimension() const override { return instance_->dimension(); }
  bool feasible(const IntegralPoint &point) const override {
    return instance_->feasible_integral(point);
  }

 private:
  const AuctionInstance *instance_;
};

// Greedy √m verifier for single-minded instances: bids sorted by v_k/√|bundle|,
// accepted when conflict-free.  Guarantees vᵀx ≥ vᵀx*/√m against any
// LP-feasible x*, asserted on every call.
class GreedyVerifier : public IntegralityGapVerifier {
 public:
  explicit GreedyVerifier(const AuctionInstance &instance);
  double alpha() const override { return alpha_; }
  IntegralPoint run(const Vec &v, const FractionalPoint &x_star) override;

 private:
  const AuctionInstance *instance_;
  double alpha_;
};

// Exhaustive verifier: argmax of vᵀ(·) over Q_I (lexicographically smallest on
// ties).  Its domain-wide factor is the measured 1/(integrality gap); on
// instances with an integral LP relaxation that is exactly 1.
class ExactVerifier : public IntegralityGapVerifier {
 public:
  explicit ExactVerifier(const AuctionInstance &instance);
  double alpha() const override { return alpha_; }
  IntegralPoint run(const Vec &v, const FractionalPoint &x_star) override;

 private:
  const AuctionInstance *instance_;
  double alpha_;
};

// 1 / max over vertices x̂ of Q of z*(x̂), where z*(x̂) = min{1ᵀλ : Σ λ_p p ≥ x̂}
// over Q_I.  z* is convex, so the vertex maximum is the domain-wide gap.
double measured_alpha(const AuctionInstance &instance);

enum class InstanceKind { single_minded_uniform, additive_uniform, adversarial_overlap };

// Deterministic per seed; values are uniform integers in [1, 100].
AuctionInstance generate_instance(InstanceKind kind, int n, int m, std::uint64_t seed);

}  // namespace mwumech
