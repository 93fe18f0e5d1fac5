#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "mwumech/auction.hpp"
#include "mwumech/json_io.hpp"
#include "mwumech/mechanism.hpp"
#include "mwumech/rng.hpp"

using namespace mwumech;

namespace {

AuctionInstance two_player_two_item() {
  ValuationProfile profile;
  profile.items = 2;
  profile.players.push_back(Valuation::single_minded({0, 1}, 4.0));
  profile.players.push_back(Valuation::additive({3.0, 1.0}));
  return AuctionInstance(profile);
}

AuctionInstance one_item_duel(double v0, double v1) {
  ValuationProfile profile;
  profile.items = 1;
  profile.players.push_back(Valuation::single_minded({0}, v0));
  profile.players.push_back(Valuation::single_minded({0}, v1));
  return AuctionInstance(profile);
}

}  // namespace

TEST_CASE("derived stage constants match their closed forms exactly") {
  MechanismParams p = MechanismParams::derive(0.5, 2);
  p.validate();
  // Every value below is a dyadic rational, so equality is exact.
  CHECK(p.eps_bar == 0.25);
  CHECK(p.q0 == 0.5625);            // (3/4)^2
  CHECK(p.qi == 0.21875);           // (7/16)/2
  CHECK(p.eta == 49.0 / 8192.0);    // (1/4)(7/16)^2/8
  CHECK(p.eta_prime == 7.0 / 256.0);
  CHECK(p.epsilon == 343.0 / 8388608.0);
  CHECK(p.epsilon == doctest::Approx(4.0888786315917969e-05).epsilon(1e-15));
}

TEST_CASE("stage constants satisfy their brackets across a parameter grid") {
  for (double epsilon0 : {0.1, 0.25, 0.4, 0.5}) {
    for (int n = 1; n <= 5; ++n) {
      MechanismParams p = MechanismParams::derive(epsilon0, n);
      CHECK_NOTHROW(p.validate());
      double total = p.q0 + n * p.qi;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("stage constant derivation rejects out-of-range inputs") {
  CHECK_THROWS_AS(MechanismParams::derive(0.0, 2), error);
  CHECK_THROWS_AS(MechanismParams::derive(0.6, 2), error);
  CHECK_THROWS_AS(MechanismParams::derive(-0.1, 2), error);
  CHECK_THROWS_AS(MechanismParams::derive(0.5, 0), error);
}

TEST_CASE("tampered stage constants fail validation") {
  MechanismParams p = MechanismParams::derive(0.25, 3);
  p.eta *= 1.0001;
  CHECK_THROWS_AS(p.validate(), error);
}

TEST_CASE("a lone player pays nothing under fractional VCG") {
  ValuationProfile profile;
  profile.items = 2;
  profile.players.push_back(Valuation::additive({2.0, 3.0}));
  AuctionInstance inst(profile);
  FractionalOutcome out = fractional_vcg(inst, make_exact_allocator());
  CHECK(out.allocation[0] == doctest::Approx(1.0));
  CHECK(out.allocation[1] == doctest::Approx(1.0));
  CHECK(out.payments[0] == 0.0);
  CHECK(out.value[0] == doctest::Approx(5.0));
}

TEST_CASE("the winner of a one-item duel pays the loser's bid") {
  AuctionInstance inst = one_item_duel(3.0, 1.0);
  FractionalOutcome out = fractional_vcg(inst, make_exact_allocator());
  CHECK(out.allocation[0] == doctest::Approx(1.0));
  CHECK(out.allocation[1] == doctest::Approx(0.0));
  CHECK(out.payments[0] == doctest::Approx(1.0));
  CHECK(out.payments[1] == doctest::Approx(0.0));
  CHECK(out.p_vcg == out.payments);
}

TEST_CASE("VCG refuses an allocator that admits approximation slack") {
  AuctionInstance inst = one_item_duel(3.0, 1.0);
  Allocator exact = make_exact_allocator();
  Allocator sloppy = [exact](const AuctionInstance &i) {
    AllocatorResult r = exact(i);
    r.certificate = 0.1;
    return r;
  };
  CHECK_THROWS_AS(fractional_vcg(inst, sloppy), error);
}

TEST_CASE("the discounted sub-mechanism shaves beta off each VCG price") {
  AuctionInstance inst = two_player_two_item();
  double epsilon = 0.01;
  PlayerConstants constants = compute_player_constants(inst, epsilon);
  FractionalOutcome vcg = fractional_vcg(inst, make_exact_allocator());
  M0Outcome m0 = run_m0(inst, make_exact_allocator(), epsilon);
  for (int i = 0; i < inst.players(); ++i) {
    double expected = std::max(vcg.payments[i] - constants.beta[i], 0.0);
    CHECK(m0.p[i] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(m0.utility[i] == doctest::Approx(m0.value[i] - m0.p[i]).epsilon(1e-12));
  }
}

TEST_CASE("the discounted sub-mechanism rejects an allocator outside its certificate budget") {
  AuctionInstance inst = two_player_two_item();
  Allocator exact = make_exact_allocator();
  Allocator sloppy = [exact](const AuctionInstance &i) {
    AllocatorResult r = exact(i);
    r.certificate = 0.9;
    return r;
  };
  CHECK_THROWS_AS(run_m0(inst, sloppy, 0.01), error);
}

TEST_CASE("player constants hand each player every item") {
  AuctionInstance inst = two_player_two_item();
  PlayerConstants c = compute_player_constants(inst, 0.5);
  CHECK(c.value_of_u[0] == doctest::Approx(4.0));  // the full bundle
  CHECK(c.value_of_u[1] == doctest::Approx(4.0));  // 3 + 1
  CHECK(c.L[0] == doctest::Approx(4.0));
  CHECK(c.L[1] == doctest::Approx(4.0));
  CHECK(c.beta[0] == doctest::Approx(2.0));
  for (int i = 0; i < 2; ++i) {
    CHECK(inst.player_value(i, c.u[i]) == doctest::Approx(c.value_of_u[i]));
  }
}

TEST_CASE("the stage distribution has n+1 branches with probabilities summing to one") {
  AuctionInstance inst = two_player_two_item();
  MechanismParams params = MechanismParams::derive(0.5, 2);
  MechanismDistribution dist = mechanism_distribution(inst, make_exact_allocator(), params);
  REQUIRE(dist.branches.size() == 3);
  CHECK(dist.branches[0].probability == doctest::Approx(params.q0));
  CHECK(dist.branches[1].probability == doctest::Approx(params.qi));
  CHECK(dist.branches[2].probability == doctest::Approx(params.qi));
  double total = 0.0;
  for (const auto &b : dist.branches) total += b.probability;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // Both players are active here, so branch j hands everything to player j.
  CHECK(dist.active[0]);
  CHECK(dist.active[1]);
  for (int j = 1; j <= 2; ++j) {
    Vec expected(inst.dimension(), 0.0);
    IntegralPoint u = inst.dominating_allocation(j - 1);
    for (int k = 0; k < inst.dimension(); ++k) expected[k] = (double)u.coords[k];
    CHECK(dist.branches[j].x == expected);
    CHECK(dist.branches[j].p[j - 1] ==
          doctest::Approx(params.eta_prime * dist.constants.L[j - 1]));
  }
}

TEST_CASE("a zero-value player is filtered out of every branch") {
  ValuationProfile profile;
  profile.items = 2;
  profile.players.push_back(Valuation::additive({5.0, 5.0}));
  profile.players.push_back(Valuation::additive({0.0, 0.0}));
  AuctionInstance inst(profile);
  MechanismParams params = MechanismParams::derive(0.5, 2);
  MechanismDistribution dist = mechanism_distribution(inst, make_exact_allocator(), params);
  CHECK(dist.active[0]);
  CHECK_FALSE(dist.active[1]);
  // Branch 0 zeroes the inactive player's block and charges them nothing.
  for (int k = inst.block_offset(1); k < inst.dimension(); ++k) {
    CHECK(dist.branches[0].x[k] == 0.0);
  }
  CHECK(dist.branches[0].p[1] == 0.0);
  // The inactive player's own branch still hands them everything, but free of
  // charge (only the payment is gated on activity).
  IntegralPoint u = inst.dominating_allocation(1);
  for (int k = 0; k < inst.dimension(); ++k) {
    CHECK(dist.branches[2].x[k] == (double)u.coords[k]);
  }
  CHECK(dist.branches[2].p[1] == 0.0);
}

TEST_CASE("the stage distribution rejects a player-count mismatch") {
  AuctionInstance inst = two_player_two_item();
  MechanismParams params = MechanismParams::derive(0.5, 3);
  CHECK_THROWS_AS(mechanism_distribution(inst, make_exact_allocator(), params), error);
}

TEST_CASE("stage draws and term draws are reproducible from the seed") {
  AuctionInstance inst = two_player_two_item();
  MechanismParams params = MechanismParams::derive(0.5, 2);
  SeededRng a(99), b(99);
  MechanismBranch ba = approx_fractional_mechanism(inst, make_exact_allocator(), params, a);
  MechanismBranch bb = approx_fractional_mechanism(inst, make_exact_allocator(), params, b);
  CHECK(ba.branch == bb.branch);
  CHECK(ba.x == bb.x);
  CHECK(ba.p == bb.p);

  ExactVerifier verifier(inst);
  ConvertedBranch ca = integral_conversion(ba, inst, verifier, 0.25);
  SeededRng ra(7), rb(7);
  RealizedOutcome oa = realize(ca, ra);
  RealizedOutcome ob = realize(ca, rb);
  CHECK(oa.term == ob.term);
  CHECK(oa.allocation == ob.allocation);
  CHECK(oa.payments == ob.payments);
}

TEST_CASE("integral conversion preserves payments and values at scale gamma") {
  AuctionInstance inst = two_player_two_item();
  MechanismParams params = MechanismParams::derive(0.5, 2);
  MechanismDistribution dist = mechanism_distribution(inst, make_exact_allocator(), params);
  ExactVerifier verifier(inst);
  double conversion_epsilon = 0.25;
  double gamma = verifier.alpha() / (1.0 + 4.0 * conversion_epsilon);

  for (const MechanismBranch &branch : dist.branches) {
    ConvertedBranch conv = integral_conversion(branch, inst, verifier, conversion_epsilon);
    const auto &terms = conv.decomposition.decomposition.terms;
    REQUIRE(conv.term_payments.size() == terms.size());
    for (int i = 0; i < inst.players(); ++i) {
      double expected_payment = 0.0;
      double expected_value = 0.0;
      for (size_t t = 0; t < terms.size(); ++t) {
        expected_payment += terms[t].lambda * conv.term_payments[t][i];
        expected_value += terms[t].lambda * inst.player_value(i, terms[t].point);
      }
      CHECK(expected_payment ==
            doctest::Approx(gamma * branch.p[i]).epsilon(1e-9));
      CHECK(expected_value ==
            doctest::Approx(gamma * inst.player_value(i, branch.x)).epsilon(1e-9));
    }
  }
}

TEST_CASE("the one-shot randomized pipeline keeps VCG expectations at scale gamma") {
  AuctionInstance inst = two_player_two_item();
  ExactVerifier verifier(inst);
  SeededRng rng(5);
  double epsilon = 0.25;
  LsOutcome out = exact_ls_mechanism(inst, make_exact_allocator(), verifier, epsilon, rng);
  double gamma = verifier.alpha() / (1.0 + 4.0 * epsilon);
  const auto &terms = out.decomposition.decomposition.terms;
  for (int i = 0; i < inst.players(); ++i) {
    double exp_pay = 0.0;
    double exp_val = 0.0;
    for (size_t t = 0; t < terms.size(); ++t) {
      exp_pay += terms[t].lambda * out.term_payments[t][i];
      exp_val += terms[t].lambda * inst.player_value(i, terms[t].point);
    }
    CHECK(exp_pay == doctest::Approx(gamma * out.vcg.payments[i]).epsilon(1e-9));
    CHECK(exp_val == doctest::Approx(gamma * out.vcg.value[i]).epsilon(1e-9));
  }
  // The realized draw is one of the recorded terms with its recorded payments.
  REQUIRE(out.realized.term >= 0);
  REQUIRE(size_t(out.realized.term) < terms.size());
  CHECK(out.realized.allocation == terms[out.realized.term].point);
}

TEST_CASE("the truthfulness audit passes end to end on a mixed instance") {
  AuctionInstance inst = two_player_two_item();
  AuditOptions options;
  options.epsilon0 = 0.5;
  options.seed = 11;
  options.monte_carlo_check = true;
  options.monte_carlo_samples = 20000;
  AuditReport report = audit_truthfulness(inst, options);
  CHECK(report.all_ok);
  CHECK(report.payments_nonneg);
  CHECK(report.welfare_ok);
  CHECK(report.monte_carlo_ok);
  CHECK(report.opt_fractional == doctest::Approx(4.0));
  CHECK(report.opt_integral == doctest::Approx(4.0));
  CHECK(report.expected_welfare >= report.welfare_bound - 1e-9);
  for (const PlayerAudit &pa : report.players) {
    CHECK(pa.min_util_ok);
    CHECK(pa.ir_ok);
    CHECK(pa.negative_mass <= 1.0 - report.params.q0 + 1e-12);
  }
  for (const DeviationAudit &da : report.deviations) CHECK(da.truthful_ok);

  // The audit is a pure function of (instance, options): its report and the
  // emitted JSON must be byte-identical across runs.
  AuditReport again = audit_truthfulness(inst, options);
  CHECK(audit_report_json(report) == audit_report_json(again));
}

TEST_CASE("the audit also passes with the greedy square-root verifier") {
  AuctionInstance inst = one_item_duel(3.0, 1.0);
  AuditOptions options;
  options.alpha_mode = AlphaMode::greedy;
  options.seed = 3;
  AuditReport report = audit_truthfulness(inst, options);
  CHECK(report.alpha == doctest::Approx(1.0));  // 1/sqrt(1 item)
  CHECK(report.all_ok);
}

TEST_CASE("the audit flags are honest about scaled-report gains") {
  // Deviation utilities may exceed the truthful one, but never by more than
  // the 1/(1-epsilon0) factor the guarantee allows.
  AuctionInstance inst = two_player_two_item();
  AuditOptions options;
  options.seed = 17;
  AuditReport report = audit_truthfulness(inst, options);
  REQUIRE(!report.deviations.empty());
  for (const DeviationAudit &da : report.deviations) {
    CHECK(da.truthful_utility >= (1.0 - options.epsilon0) * da.deviation_utility - 1e-9);
  }
}

TEST_CASE("lemma-level inequalities hold with the multiplicative-weights allocator") {
  AuctionInstance inst = two_player_two_item();
  std::vector<std::pair<int, double>> deviations = {
      {0, 0.0}, {0, 0.5}, {0, 2.0}, {1, 0.0}, {1, 0.5}, {1, 2.0}};
  LemmaReport report = check_lemmas(inst, deviations, 0.1);
  CHECK(report.lemma1_ok);
  CHECK(report.lemma2_ok);
  CHECK(report.lemma1_worst_margin >= -1e-9);
  CHECK(report.lemma2_worst_margin >= -1e-9);
}

TEST_CASE("lemma checks on a generated single-minded instance") {
  AuctionInstance inst =
      generate_instance(InstanceKind::single_minded_uniform, 2, 3, 424242);
  std::vector<std::pair<int, double>> deviations = {{0, 0.5}, {1, 2.0}};
  LemmaReport report = check_lemmas(inst, deviations, 0.1);
  CHECK(report.lemma1_ok);
  CHECK(report.lemma2_ok);
}
