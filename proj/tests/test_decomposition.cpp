#include <cmath>
#include <vector>

#include "doctest.h"
#include "mwumech/auction.hpp"
#include "mwumech/decomposition.hpp"
#include "mwumech/rng.hpp"
#include "mwumech/smalllp.hpp"

using namespace mwumech;

namespace {

// Unlimited box domain over d non-negative integer coordinates with caps.
struct BoxDomain : PackingDomain {
  std::vector<long long> caps;
  int dimension() const override { return int(caps.size()); }
  bool feasible(const IntegralPoint &p) const override {
    for (size_t j = 0; j < caps.size(); ++j) {
      if (p.coords[j] < 0 || p.coords[j] > caps[j]) return false;
    }
    return true;
  }
};

void check_exact(const DecompositionResult &result, const Vec &x_star, double alpha,
                 double epsilon, const PackingDomain &domain) {
  double gamma = alpha / (1.0 + 4.0 * epsilon);
  double norm = 0.0;
  for (double v : x_star) norm = std::max(norm, v);

  // Scaled target recorded correctly.
  REQUIRE(result.target.size() == x_star.size());
  for (size_t j = 0; j < x_star.size(); ++j) {
    CHECK(result.target[j] == doctest::Approx(gamma * x_star[j]).epsilon(1e-12));
  }

  // Exact convex combination.
  const ConvexDecomposition &dec = result.decomposition;
  CHECK(std::abs(dec.weight_sum() - 1.0) <= 1e-12);
  Vec mix = dec.combination(int(x_star.size()));
  for (size_t j = 0; j < x_star.size(); ++j) {
    CHECK(std::abs(mix[j] - result.target[j]) <= 1e-9 * (1.0 + norm));
  }
  CHECK(result.residual_norm <= 1e-9 * (1.0 + norm));

  // All terms are domain points supported inside support(x*).
  for (const auto &term : dec.terms) {
    CHECK(term.lambda >= 0.0);
    CHECK(verify_membership(domain, term.point));
    for (size_t j = 0; j < x_star.size(); ++j) {
      if (x_star[j] == 0.0) CHECK(term.point.coords[j] == 0);
    }
  }
}

}  // namespace

TEST_CASE("a zero target decomposes into the zero point") {
  ValuationProfile profile;
  profile.items = 2;
  profile.players.push_back(Valuation::additive({1.0, 1.0}));
  AuctionInstance inst(profile);
  AuctionDomain domain(inst);
  ExactVerifier verifier(inst);

  FractionalPoint zero = FractionalPoint::from_coords({0.0, 0.0});
  DecompositionResult result = convex_decompose(zero, verifier, 0.25, domain);
  REQUIRE(result.decomposition.terms.size() == 1);
  CHECK(result.decomposition.terms[0].lambda == doctest::Approx(1.0));
  CHECK(result.decomposition.terms[0].point.is_zero());
  CHECK(result.verifier_calls == 0);
}

TEST_CASE("single-coordinate targets become a floor/ceiling lottery") {
  ValuationProfile profile;
  profile.items = 1;
  profile.players.push_back(Valuation::additive({1.0}));
  AuctionInstance inst(profile);
  AuctionDomain domain(inst);
  ExactVerifier verifier(inst);

  double epsilon = 0.25;
  FractionalPoint x = FractionalPoint::from_coords({0.8});
  DecompositionResult result = convex_decompose(x, verifier, epsilon, domain);
  check_exact(result, x.coords, verifier.alpha(), epsilon, domain);
  // gamma = 1/(1+4*0.25) = 0.5: target 0.4 = 0.6*[0] + 0.4*[1].
  REQUIRE(result.decomposition.terms.size() == 2);
  CHECK(result.decomposition.terms[0].lambda == doctest::Approx(0.6));
  CHECK(result.decomposition.terms[0].point.is_zero());
  CHECK(result.decomposition.terms[1].lambda == doctest::Approx(0.4));
  CHECK(result.decomposition.terms[1].point == IntegralPoint{{1}});
  CHECK(result.verifier_calls <= 1);
}

TEST_CASE("conversion trace: half-covered coordinate splits one term") {
  // Dominating {(1, (1))} over target (0.5) -> {(0.5, (1)), (0.5, (0))}.
  BoxDomain box;
  box.caps = {1};
  DominatingCombination dom;
  dom.terms.push_back({1.0, IntegralPoint{{1}}});
  dom.target = {0.5};
  dom.support_size = 1;
  FractionalPoint target = FractionalPoint::from_coords({0.5});
  ConvexDecomposition dec = exact_decompose(target, dom, box);
  REQUIRE(dec.terms.size() == 2);
  CHECK(dec.terms[0].lambda == doctest::Approx(0.5));
  CHECK(dec.terms[0].point == IntegralPoint{{1}});
  CHECK(dec.terms[1].lambda == doctest::Approx(0.5));
  CHECK(dec.terms[1].point == IntegralPoint{{0}});
}

TEST_CASE("conversion trace: the zeroed copy keeps exact coordinates") {
  // Dominating {(1, (1,1))} over target (1, 0.5) -> {(0.5,(1,1)), (0.5,(1,0))}.
  BoxDomain box;
  box.caps = {1, 1};
  DominatingCombination dom;
  dom.terms.push_back({1.0, IntegralPoint{{1, 1}}});
  dom.target = {1.0, 0.5};
  dom.support_size = 2;
  FractionalPoint target = FractionalPoint::from_coords({1.0, 0.5});
  ConvexDecomposition dec = exact_decompose(target, dom, box);
  REQUIRE(dec.terms.size() == 2);
  CHECK(dec.terms[0].lambda == doctest::Approx(0.5));
  CHECK(dec.terms[0].point == IntegralPoint{{1, 1}});
  CHECK(dec.terms[1].lambda == doctest::Approx(0.5));
  CHECK(dec.terms[1].point == IntegralPoint{{1, 0}});
}

TEST_CASE("unit over-coverage is removed by subtraction, not splitting") {
  // Both terms allocate coordinate 0; the target needs only half of it.
  BoxDomain box;
  box.caps = {2, 1};
  DominatingCombination dom;
  dom.terms.push_back({0.5, IntegralPoint{{2, 1}}});
  dom.terms.push_back({0.5, IntegralPoint{{1, 1}}});
  dom.target = {1.0, 1.0};  // combination gives (1.5, 1.0): coordinate 0 over-covered by 0.5
  dom.support_size = 2;
  FractionalPoint target = FractionalPoint::from_coords({1.0, 1.0});
  ConvexDecomposition dec = exact_decompose(target, dom, box);
  Vec mix = dec.combination(2);
  CHECK(mix[0] == doctest::Approx(1.0));
  CHECK(mix[1] == doctest::Approx(1.0));
  // The first term lost one unit of coordinate 0: no new term was needed.
  REQUIRE(dec.terms.size() == 2);
  CHECK(dec.terms[0].point == IntegralPoint{{1, 1}});
}

TEST_CASE("input that does not dominate the target is rejected") {
  BoxDomain box;
  box.caps = {1};
  DominatingCombination dom;
  dom.terms.push_back({1.0, IntegralPoint{{0}}});
  dom.target = {0.5};
  dom.support_size = 1;
  FractionalPoint target = FractionalPoint::from_coords({0.5});
  CHECK_THROWS_AS(exact_decompose(target, dom, box), error);
}

TEST_CASE("end-to-end decomposition meets every contract on generated auctions") {
  SeededRng seeds(31337);
  int done = 0;
  int attempt = 0;
  while (done < 12 && attempt < 200) {
    ++attempt;
    auto kind = attempt % 2 == 0 ? InstanceKind::single_minded_uniform
                                 : InstanceKind::additive_uniform;
    AuctionInstance inst = generate_instance(kind, int(seeds.uniform_int(2, 3)),
                                             int(seeds.uniform_int(2, 4)), seeds.next_u64());
    LpResult opt = lp_max_vertex(inst.lp_rows(), inst.lp_rhs(), inst.valuation_weights());
    REQUIRE(opt.feasible);
    FractionalPoint x_star = FractionalPoint::from_coords(opt.x);
    int s = int(x_star.support.size());
    if (s < 2) continue;  // the covering reduction path needs s >= 2
    ++done;

    double epsilon = done % 2 == 0 ? 0.5 : 0.25;
    AuctionDomain domain(inst);
    ExactVerifier verifier(inst);
    DecompositionResult result = convex_decompose(x_star, verifier, epsilon, domain);
    check_exact(result, x_star.coords, verifier.alpha(), epsilon, domain);

    long long per_row = (long long)std::ceil(std::log(double(s)) / (epsilon * epsilon));
    CHECK(result.verifier_calls <= (long long)(s)*per_row);
    CHECK((long long)result.decomposition.terms.size() <= (long long)(s) * (1 + per_row));
    CHECK(result.terms_added <= s);
  }
  CHECK(done == 12);
}

TEST_CASE("greedy verifier decompositions scale by 1/sqrt(m)") {
  SeededRng seeds(777);
  int done = 0;
  int attempt = 0;
  while (done < 6 && attempt < 200) {
    ++attempt;
    AuctionInstance inst = generate_instance(InstanceKind::single_minded_uniform, 3, 4,
                                             seeds.next_u64());
    LpResult opt = lp_max_vertex(inst.lp_rows(), inst.lp_rhs(), inst.valuation_weights());
    REQUIRE(opt.feasible);
    FractionalPoint x_star = FractionalPoint::from_coords(opt.x);
    if (int(x_star.support.size()) < 2) continue;
    ++done;

    GreedyVerifier verifier(inst);
    CHECK(verifier.alpha() == doctest::Approx(0.5));  // 1/sqrt(4)
    AuctionDomain domain(inst);
    DecompositionResult result = convex_decompose(x_star, verifier, 0.25, domain);
    check_exact(result, x_star.coords, verifier.alpha(), 0.25, domain);
  }
  CHECK(done >= 1);
}

TEST_CASE("decomposing an interior fractional point also works") {
  // Interior points (not LP vertices) exercise many-term combinations.
  ValuationProfile profile;
  profile.items = 2;
  profile.players.push_back(Valuation::additive({3.0, 1.0}));
  profile.players.push_back(Valuation::additive({1.0, 2.0}));
  AuctionInstance inst(profile);
  AuctionDomain domain(inst);
  ExactVerifier verifier(inst);

  FractionalPoint x = FractionalPoint::from_coords({0.3, 0.6, 0.45, 0.2});
  REQUIRE(inst.feasible_fractional(x.coords));
  DecompositionResult result = convex_decompose(x, verifier, 0.25, domain);
  check_exact(result, x.coords, verifier.alpha(), 0.25, domain);
}
