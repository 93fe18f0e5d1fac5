#include "mwumech/auction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mwumech/log.hpp"
#include "mwumech/smalllp.hpp"

namespace mwumech {

namespace {

constexpr int kMaxEnumDimension = 20;
constexpr std::size_t kMaxIntegralPoints = 200000;
constexpr int kMaxExactDimension = 12;
constexpr std::size_t kMaxGapPoints = 5000;

void check_value(double v, const char *what) {
  if (!(std::isfinite(v) && v >= 0.0)) {
    fail(errc::argument, strf("%s must be finite and non-negative, got %g", what, v));
  }
}

}  // namespace

Valuation Valuation::single_minded(std::vector<int> bundle, double value) {
  Valuation v;
  v.kind = ValuationKind::single_minded;
  std::sort(bundle.begin(), bundle.end());
  v.bundle = std::move(bundle);
  v.value = value;
  check_value(value, "single-minded value");
  if (v.bundle.empty()) fail(errc::argument, "single-minded bundle must be nonempty");
  return v;
}

Valuation Valuation::additive(Vec item_values) {
  Valuation v;
  v.kind = ValuationKind::additive;
  v.item_values = std::move(item_values);
  for (double a : v.item_values) check_value(a, "additive item value");
  return v;
}

double ValuationProfile::bundle_value(int player, const std::vector<char> &item_mask) const {
  if (player < 0 || player >= player_count()) fail(errc::argument, "player index out of range");
  if ((int)item_mask.size() != items) fail(errc::argument, "item mask has wrong length");
  const Valuation &v = players[player];
  if (v.kind == ValuationKind::single_minded) {
    for (int j : v.bundle) {
      if (!item_mask[j]) return 0.0;
    }
    return v.value;
  }
  double total = 0.0;
  for (int j = 0; j < items; ++j) {
    if (item_mask[j]) total += v.item_values[j];
  }
  return total;
}

double ValuationProfile::grand_bundle_value(int player) const {
  return bundle_value(player, std::vector<char>(items, 1));
}

AuctionInstance::AuctionInstance(ValuationProfile profile) : profile_(std::move(profile)) {
  const int n = profile_.player_count();
  const int m = profile_.items;
  if (n < 1) fail(errc::argument, "auction needs at least one player");
  if (m < 1) fail(errc::argument, "auction needs at least one item");
  offsets_.reserve(n + 1);
  int off = 0;
  for (const Valuation &v : profile_.players) {
    offsets_.push_back(off);
    if (v.kind == ValuationKind::single_minded) {
      if (v.bundle.empty()) fail(errc::argument, "single-minded bundle must be nonempty");
      for (std::size_t t = 0; t < v.bundle.size(); ++t) {
        int j = v.bundle[t];
        if (j < 0 || j >= m) fail(errc::argument, "bundle item index out of range");
        if (t > 0 && v.bundle[t - 1] >= j) fail(errc::argument, "bundle must be sorted and duplicate-free");
      }
      check_value(v.value, "single-minded value");
      off += 1;
    } else {
      if ((int)v.item_values.size() != m) fail(errc::argument, "additive valuation has wrong length");
      for (double a : v.item_values) check_value(a, "additive item value");
      off += m;
    }
  }
  offsets_.push_back(off);
  dimension_ = off;

  // Per-item rows: total fractional assignment of each item is at most 1.
  for (int j = 0; j < m; ++j) {
    Vec row(dimension_, 0.0);
    for (int i = 0; i < n; ++i) {
      const Valuation &v = profile_.players[i];
      if (v.kind == ValuationKind::single_minded) {
        if (std::binary_search(v.bundle.begin(), v.bundle.end(), j)) row[offsets_[i]] = 1.0;
      } else {
        row[offsets_[i] + j] = 1.0;
      }
    }
    rows_.push_back(std::move(row));
    rhs_.push_back(1.0);
  }
  // Cap rows: a single-minded player is served at most once.
  for (int i = 0; i < n; ++i) {
    if (profile_.players[i].kind != ValuationKind::single_minded) continue;
    Vec row(dimension_, 0.0);
    row[offsets_[i]] = 1.0;
    rows_.push_back(std::move(row));
    rhs_.push_back(1.0);
  }
}

int AuctionInstance::block_size(int player) const {
  if (player < 0 || player >= players()) fail(errc::argument, "player index out of range");
  return offsets_[player + 1] - offsets_[player];
}

double AuctionInstance::player_value(int player, const Vec &x) const {
  if ((int)x.size() != dimension_) fail(errc::argument, "allocation has wrong dimension");
  const Valuation &v = profile_.players[player];
  if (v.kind == ValuationKind::single_minded) return v.value * x[offsets_[player]];
  double total = 0.0;
  for (int j = 0; j < items(); ++j) total += v.item_values[j] * x[offsets_[player] + j];
  return total;
}

double AuctionInstance::player_value(int player, const IntegralPoint &x) const {
  if (x.dimension() != dimension_) fail(errc::argument, "allocation has wrong dimension");
  const Valuation &v = profile_.players[player];
  if (v.kind == ValuationKind::single_minded) return v.value * (double)x.coords[offsets_[player]];
  double total = 0.0;
  for (int j = 0; j < items(); ++j) total += v.item_values[j] * (double)x.coords[offsets_[player] + j];
  return total;
}

Vec AuctionInstance::valuation_weights() const {
  Vec w(dimension_, 0.0);
  for (int i = 0; i < players(); ++i) {
    const Valuation &v = profile_.players[i];
    if (v.kind == ValuationKind::single_minded) {
      w[offsets_[i]] = v.value;
    } else {
      for (int j = 0; j < items(); ++j) w[offsets_[i] + j] = v.item_values[j];
    }
  }
  return w;
}

Vec AuctionInstance::player_weights(int player) const {
  if (player < 0 || player >= players()) fail(errc::argument, "player index out of range");
  Vec w(dimension_, 0.0);
  const Valuation &v = profile_.players[player];
  if (v.kind == ValuationKind::single_minded) {
    w[offsets_[player]] = v.value;
  } else {
    for (int j = 0; j < items(); ++j) w[offsets_[player] + j] = v.item_values[j];
  }
  return w;
}

bool AuctionInstance::feasible_integral(const IntegralPoint &x) const {
  if (x.dimension() != dimension_) return false;
  for (long long c : x.coords) {
    if (c < 0) return false;
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    double load = dot(rows_[r], x);
    if (load > rhs_[r] + kZeroTol) return false;
  }
  return true;
}

bool AuctionInstance::feasible_fractional(const Vec &x) const {
  if ((int)x.size() != dimension_) return false;
  for (double c : x) {
    if (!(c >= -kFeasTol) || !std::isfinite(c)) return false;
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (dot(rows_[r], x) > rhs_[r] + kFeasTol) return false;
  }
  return true;
}

IntegralPoint AuctionInstance::dominating_allocation(int player) const {
  if (player < 0 || player >= players()) fail(errc::argument, "player index out of range");
  IntegralPoint p;
  p.coords.assign(dimension_, 0);
  const Valuation &v = profile_.players[player];
  if (v.kind == ValuationKind::single_minded) {
    p.coords[offsets_[player]] = 1;
  } else {
    for (int j = 0; j < items(); ++j) p.coords[offsets_[player] + j] = 1;
  }
  return p;
}

const std::vector<IntegralPoint> &AuctionInstance::integral_points() const {
  if (points_ready_) return points_;
  if (dimension_ > kMaxEnumDimension) {
    fail(errc::capacity, strf("integral enumeration supports up to %d variables, instance has %d",
                              kMaxEnumDimension, dimension_));
  }
  // All variables are 0/1 inside Q (item rows and cap rows both bound them by
  // 1), so a depth-first scan trying 0 before 1 emits Q_I in lexicographic
  // coordinate order.
  IntegralPoint current;
  current.coords.assign(dimension_, 0);
  Vec loads(rows_.size(), 0.0);
  std::vector<std::vector<int>> var_rows(dimension_);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (int j = 0; j < dimension_; ++j) {
      if (rows_[r][j] > 0.0) var_rows[j].push_back((int)r);
    }
  }
  auto dfs = [&](auto &&self, int var) -> void {
    if (var == dimension_) {
      if (points_.size() >= kMaxIntegralPoints) {
        fail(errc::capacity, "integral point enumeration exceeded its cap");
      }
      points_.push_back(current);
      return;
    }
    self(self, var + 1);
    bool ok = true;
    for (int r : var_rows[var]) {
      if (loads[r] + 1.0 > rhs_[r] + kZeroTol) {
        ok = false;
        break;
      }
    }
    if (!ok) return;
    current.coords[var] = 1;
    for (int r : var_rows[var]) loads[r] += 1.0;
    self(self, var + 1);
    current.coords[var] = 0;
    for (int r : var_rows[var]) loads[r] -= 1.0;
  };
  dfs(dfs, 0);
  points_ready_ = true;
  return points_;
}

AuctionInstance AuctionInstance::with_player_value_scaled(int player, double factor) const {
  if (player < 0 || player >= players()) fail(errc::argument, "player index out of range");
  check_value(factor, "valuation scale factor");
  ValuationProfile scaled = profile_;
  Valuation &v = scaled.players[player];
  if (v.kind == ValuationKind::single_minded) {
    v.value *= factor;
  } else {
    for (double &a : v.item_values) a *= factor;
  }
  return AuctionInstance(std::move(scaled));
}

GreedyVerifier::GreedyVerifier(const AuctionInstance &instance) : instance_(&instance) {
  for (const Valuation &v : instance.profile().players) {
    if (v.kind != ValuationKind::single_minded) {
      fail(errc::argument, "greedy verifier requires a single-minded instance");
    }
  }
  alpha_ = 1.0 / std::sqrt((double)instance.items());
}

IntegralPoint GreedyVerifier::run(const Vec &v, const FractionalPoint &x_star) {
  const int n = instance_->players();
  if ((int)v.size() != instance_->dimension() || x_star.dimension() != instance_->dimension()) {
    fail(errc::argument, "verifier input has wrong dimension");
  }
  // Rank bids by value over the square root of the bundle size, then accept
  // greedily whenever the bundle is still untouched.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  Vec score(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const Valuation &val = instance_->profile().players[i];
    score[i] = v[instance_->block_offset(i)] / std::sqrt((double)val.bundle.size());
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return score[a] > score[b]; });
  std::vector<char> taken(instance_->items(), 0);
  IntegralPoint out;
  out.coords.assign(instance_->dimension(), 0);
  for (int i : order) {
    const Valuation &val = instance_->profile().players[i];
    bool free = true;
    for (int j : val.bundle) {
      if (taken[j]) {
        free = false;
        break;
      }
    }
    if (!free) continue;
    for (int j : val.bundle) taken[j] = 1;
    out.coords[instance_->block_offset(i)] = 1;
  }
  double got = dot(v, out);
  double want = alpha_ * dot(v, x_star.coords);
  if (got < want - kFeasTol * (1.0 + std::fabs(want))) {
    fail(errc::contract, strf("greedy packing value %.17g fell below the guaranteed %.17g", got, want));
  }
  return out;
}

ExactVerifier::ExactVerifier(const AuctionInstance &instance)
    : instance_(&instance), alpha_(measured_alpha(instance)) {}

IntegralPoint ExactVerifier::run(const Vec &v, const FractionalPoint &x_star) {
  if ((int)v.size() != instance_->dimension() || x_star.dimension() != instance_->dimension()) {
    fail(errc::argument, "verifier input has wrong dimension");
  }
  const std::vector<IntegralPoint> &points = instance_->integral_points();
  // Strict improvement keeps the lexicographically smallest maximizer.
  const IntegralPoint *best = &points.front();
  double best_val = -std::numeric_limits<double>::infinity();
  for (const IntegralPoint &p : points) {
    double val = dot(v, p);
    if (val > best_val) {
      best_val = val;
      best = &p;
    }
  }
  double want = alpha_ * dot(v, x_star.coords);
  if (best_val < want - kFeasTol * (1.0 + std::fabs(want))) {
    fail(errc::contract,
         strf("exhaustive packing value %.17g fell below the guaranteed %.17g", best_val, want));
  }
  return *best;
}

double measured_alpha(const AuctionInstance &instance) {
  if (instance.dimension() > kMaxExactDimension) {
    fail(errc::capacity, strf("integrality-gap measurement supports up to %d variables, instance has %d",
                              kMaxExactDimension, instance.dimension()));
  }
  const std::vector<IntegralPoint> &points = instance.integral_points();
  if (points.size() > kMaxGapPoints) {
    fail(errc::capacity, "integrality-gap measurement exceeded its point cap");
  }
  std::vector<Vec> point_rows;
  for (const IntegralPoint &p : points) {
    if (p.is_zero()) continue;
    Vec row(instance.dimension(), 0.0);
    for (int j = 0; j < instance.dimension(); ++j) row[j] = (double)p.coords[j];
    point_rows.push_back(std::move(row));
  }
  Vec ones(point_rows.size(), 1.0);
  // z*(x̂) = min{1ᵀλ : Σ λ_p p ≥ x̂} equals, by LP duality, the optimum of
  // max x̂ᵀy subject to pᵀy ≤ 1 for every p ∈ Q_I and y ≥ 0.  z* is convex, so
  // scanning the vertices of Q finds its maximum over Q.
  double worst = 1.0;
  for (const Vec &vertex : enumerate_vertices(instance.lp_rows(), instance.lp_rhs())) {
    LpResult r = lp_max_simplex(point_rows, ones, vertex);
    if (!r.feasible) fail(errc::internal, "gap measurement dual LP must be feasible");
    worst = std::max(worst, r.objective);
  }
  double alpha = 1.0 / worst;
  if (alpha > 1.0) alpha = 1.0;
  log_info(strf("measured integrality gap %.12g (alpha %.12g)", worst, alpha));
  return alpha;
}

AuctionInstance generate_instance(InstanceKind kind, int n, int m, std::uint64_t seed) {
  if (n < 1 || n > 10) fail(errc::argument, "generator supports 1..10 players");
  if (m < 1 || m > 12) fail(errc::argument, "generator supports 1..12 items");
  SeededRng rng = SeededRng(seed).stream("instance-gen");
  ValuationProfile profile;
  profile.items = m;
  auto random_bundle = [&](bool force_first) {
    std::vector<int> bundle;
    while (bundle.empty()) {
      bundle.clear();
      for (int j = 0; j < m; ++j) {
        if (force_first && j == 0) {
          bundle.push_back(j);
        } else if (rng.uniform_int(0, 1) == 1) {
          bundle.push_back(j);
        }
      }
    }
    return bundle;
  };
  for (int i = 0; i < n; ++i) {
    switch (kind) {
      case InstanceKind::single_minded_uniform: {
        std::vector<int> bundle = random_bundle(false);
        double value = (double)rng.uniform_int(1, 100);
        profile.players.push_back(Valuation::single_minded(std::move(bundle), value));
        break;
      }
      case InstanceKind::additive_uniform: {
        Vec values(m);
        for (int j = 0; j < m; ++j) values[j] = (double)rng.uniform_int(1, 100);
        profile.players.push_back(Valuation::additive(std::move(values)));
        break;
      }
      case InstanceKind::adversarial_overlap: {
        // Every bundle contains item 0, so the LP can split that item while
        // any integral allocation serves at most one of these players.
        std::vector<int> bundle = random_bundle(true);
        double value = (double)rng.uniform_int(1, 100);
        profile.players.push_back(Valuation::single_minded(std::move(bundle), value));
        break;
      }
    }
  }
  return AuctionInstance(std::move(profile));
}

}  // namespace mwumech
