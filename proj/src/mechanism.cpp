// Randomized approximately-truthful auction mechanism and its exact audit.

#include "mwumech/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <utility>

#include "mwumech/log.hpp"
#include "mwumech/packing.hpp"
#include "mwumech/smalllp.hpp"

namespace mwumech {

namespace {

constexpr double kRelTol = 1e-12;

bool close_rel(double a, double b) { return std::abs(a - b) <= kRelTol * (1.0 + std::abs(b)); }

// Σ_{j≠skip} v_j(x) with the given instance's (reported) valuations.
double welfare_excluding(const AuctionInstance &instance, int skip, const Vec &x) {
  double total = 0.0;
  for (int j = 0; j < instance.players(); ++j) {
    if (j == skip) continue;
    total += instance.player_value(j, x);
  }
  return total;
}

double total_welfare(const AuctionInstance &instance, const Vec &x) {
  return welfare_excluding(instance, -1, x);
}

void check_certificate(const AllocatorResult &result, double epsilon) {
  if (result.certificate > epsilon + kRelTol * (1.0 + epsilon)) {
    fail(errc::contract, strf("allocator certificate %.6g exceeds the required accuracy %.6g",
                              result.certificate, epsilon));
  }
}

}  // namespace

MechanismParams MechanismParams::derive(double epsilon0, int n) {
  if (n < 1) fail(errc::argument, strf("player count must be positive, got %d", n));
  if (!(epsilon0 > 0.0) || epsilon0 > 0.5) {
    fail(errc::argument, strf("epsilon0 must lie in (0, 1/2], got %.6g", epsilon0));
  }
  MechanismParams p;
  p.epsilon0 = epsilon0;
  p.n = n;
  p.eps_bar = epsilon0 / 2.0;
  p.q0 = std::pow(1.0 - epsilon0 / n, n);
  p.qi = (1.0 - p.q0) / n;
  double one_minus_q0 = 1.0 - p.q0;
  double n3 = double(n) * n * n;
  p.eta = p.eps_bar * one_minus_q0 * one_minus_q0 / n3;
  p.eta_prime = p.eta / p.qi;
  p.epsilon = p.eta * p.eps_bar * one_minus_q0 / (8.0 * n);
  p.validate();
  return p;
}

void MechanismParams::validate() const {
  if (n < 1 || !(epsilon0 > 0.0) || epsilon0 > 0.5) {
    fail(errc::argument, "mechanism parameters need n >= 1 and epsilon0 in (0, 1/2]");
  }
  double n4 = double(n) * n * n * n;
  double e5 = std::pow(epsilon0, 5);
  if (!close_rel(eps_bar, epsilon0 / 2.0)) fail(errc::internal, "eps_bar identity violated");
  if (!close_rel(q0 + n * qi, 1.0)) fail(errc::internal, "branch probabilities do not sum to 1");
  if (!close_rel(qi * eta_prime, eta)) fail(errc::internal, "eta_prime identity violated");
  if (q0 < (1.0 - epsilon0) * (1.0 - kRelTol) || q0 > (1.0 - epsilon0 / 2.0) * (1.0 + kRelTol)) {
    fail(errc::internal, strf("q0 = %.17g outside [1-eps0, 1-eps0/2]", q0));
  }
  double lo = e5 / (128.0 * n4);
  double hi = e5 / (16.0 * n4);
  if (epsilon < lo * (1.0 - kRelTol) || epsilon > hi * (1.0 + kRelTol)) {
    fail(errc::internal, strf("epsilon = %.17g outside [%.17g, %.17g]", epsilon, lo, hi));
  }
  if (!(epsilon > 0.0) || !(eta > 0.0) || !(eta_prime > 0.0) || !(qi > 0.0) || !(q0 > 0.0)) {
    fail(errc::internal, "derived mechanism parameters must be positive");
  }
}

PlayerConstants compute_player_constants(const AuctionInstance &instance, double epsilon) {
  int n = instance.players();
  PlayerConstants c;
  c.u.reserve(size_t(n));
  c.value_of_u.assign(size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    c.u.push_back(instance.dominating_allocation(i));
    c.value_of_u[size_t(i)] = instance.player_value(i, c.u.back());
  }
  c.L.assign(size_t(n), 0.0);
  c.beta.assign(size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) sum += c.value_of_u[size_t(j)];
    }
    c.L[size_t(i)] = sum;
    c.beta[size_t(i)] = epsilon * sum;
  }
  return c;
}

Allocator make_exact_allocator() {
  return [](const AuctionInstance &instance) -> AllocatorResult {
    LpResult lp = lp_max_vertex(instance.lp_rows(), instance.lp_rhs(), instance.valuation_weights());
    if (!lp.feasible) fail(errc::internal, "the auction polytope lost its origin");
    return AllocatorResult{lp.x, 0.0};
  };
}

Allocator make_mwu_allocator(double epsilon) {
  return [epsilon](const AuctionInstance &instance) -> AllocatorResult {
    Vec weights = instance.valuation_weights();
    bool all_zero = true;
    for (double w : weights) {
      if (w > kZeroTol) {
        all_zero = false;
        break;
      }
    }
    // A zero objective is maximized exactly by the empty allocation; the
    // demand oracle has no finite ratios to offer there.
    if (all_zero) return AllocatorResult{Vec(size_t(instance.dimension()), 0.0), 0.0};
    AuctionPackingResult res = solve_auction_packing(instance, epsilon);
    double cert = 0.0;
    if (res.solution.upper_bound > 0.0) {
      cert = std::max(0.0, 1.0 - res.solution.objective / res.solution.upper_bound);
    }
    return AllocatorResult{res.allocation, cert};
  };
}

FractionalOutcome fractional_vcg(const AuctionInstance &instance, const Allocator &solve) {
  int n = instance.players();
  AllocatorResult main = solve(instance);
  if (main.certificate > kRelTol) {
    fail(errc::argument, "VCG payments need an exact welfare maximizer");
  }
  FractionalOutcome out;
  out.allocation = main.allocation;
  out.payments.assign(size_t(n), 0.0);
  out.p_vcg.assign(size_t(n), 0.0);
  out.value.assign(size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    out.value[size_t(i)] = instance.player_value(i, out.allocation);
    AllocatorResult rest = solve(instance.with_player_value_scaled(i, 0.0));
    if (rest.certificate > kRelTol) {
      fail(errc::argument, "VCG payments need an exact welfare maximizer");
    }
    double with_i = welfare_excluding(instance, i, out.allocation);
    double without_i = welfare_excluding(instance, i, rest.allocation);
    double p = without_i - with_i;
    if (p < -kFeasTol * (1.0 + std::abs(without_i))) {
      fail(errc::internal, strf("negative VCG payment %.6g from an exact maximizer", p));
    }
    out.p_vcg[size_t(i)] = p;
    out.payments[size_t(i)] = std::max(p, 0.0);
  }
  return out;
}

M0Outcome run_m0(const AuctionInstance &instance, const Allocator &solve, double epsilon) {
  int n = instance.players();
  PlayerConstants constants = compute_player_constants(instance, epsilon);
  AllocatorResult main = solve(instance);
  check_certificate(main, epsilon);
  M0Outcome out;
  out.x = main.allocation;
  out.p.assign(size_t(n), 0.0);
  out.p_vcg.assign(size_t(n), 0.0);
  out.value.assign(size_t(n), 0.0);
  out.utility.assign(size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    AllocatorResult rest = solve(instance.with_player_value_scaled(i, 0.0));
    check_certificate(rest, epsilon);
    double without_i = welfare_excluding(instance, i, rest.allocation);
    double with_i = welfare_excluding(instance, i, out.x);
    out.p_vcg[size_t(i)] = without_i - with_i;
    out.p[size_t(i)] = std::max(out.p_vcg[size_t(i)] - constants.beta[size_t(i)], 0.0);
    out.value[size_t(i)] = instance.player_value(i, out.x);
    out.utility[size_t(i)] = out.value[size_t(i)] - out.p[size_t(i)];
  }
  return out;
}

MechanismDistribution mechanism_distribution(const AuctionInstance &instance,
                                             const Allocator &solve,
                                             const MechanismParams &params) {
  params.validate();
  int n = instance.players();
  if (n != params.n) {
    fail(errc::argument,
         strf("parameters were derived for %d players but the instance has %d", params.n, n));
  }
  MechanismDistribution dist;
  dist.params = params;
  dist.constants = compute_player_constants(instance, params.epsilon);
  dist.m0 = run_m0(instance, solve, params.epsilon);

  dist.active.assign(size_t(n), 0);
  for (int i = 0; i < n; ++i) {
    double vu = dist.constants.value_of_u[size_t(i)];
    double li = dist.constants.L[size_t(i)];
    bool cond_utility = dist.m0.utility[size_t(i)] + (params.eps_bar * params.qi / params.q0) * vu >=
                        (params.qi / params.q0) * params.eta_prime * li;
    bool cond_value = vu >= params.eta * li;
    dist.active[size_t(i)] = (cond_utility && cond_value) ? 1 : 0;
  }

  dist.branches.assign(size_t(n) + 1, MechanismBranch{});
  MechanismBranch &base = dist.branches[0];
  base.branch = 0;
  base.probability = params.q0;
  base.x = dist.m0.x;
  base.p.assign(size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    if (dist.active[size_t(i)]) {
      base.p[size_t(i)] = dist.m0.p[size_t(i)];
    } else {
      int off = instance.block_offset(i);
      for (int c = 0; c < instance.block_size(i); ++c) base.x[size_t(off + c)] = 0.0;
    }
  }
  for (int j = 0; j < n; ++j) {
    MechanismBranch &br = dist.branches[size_t(j) + 1];
    br.branch = j + 1;
    br.probability = params.qi;
    br.x.assign(size_t(instance.dimension()), 0.0);
    const IntegralPoint &uj = dist.constants.u[size_t(j)];
    for (int c = 0; c < instance.dimension(); ++c) br.x[size_t(c)] = double(uj.coords[size_t(c)]);
    br.p.assign(size_t(n), 0.0);
    if (dist.active[size_t(j)]) {
      br.p[size_t(j)] = params.eta_prime * dist.constants.L[size_t(j)];
    }
  }
  return dist;
}

MechanismBranch approx_fractional_mechanism(const AuctionInstance &instance,
                                            const Allocator &solve, const MechanismParams &params,
                                            SeededRng &rng) {
  MechanismDistribution dist = mechanism_distribution(instance, solve, params);
  Vec probs;
  probs.reserve(dist.branches.size());
  for (const MechanismBranch &br : dist.branches) probs.push_back(br.probability);
  SeededRng stage = rng.stream("stage");
  int draw = int(stage.draw_categorical(probs));
  return dist.branches[size_t(draw)];
}

ConvertedBranch integral_conversion(const MechanismBranch &branch, const AuctionInstance &instance,
                                    IntegralityGapVerifier &verifier, double epsilon) {
  ConvertedBranch out;
  out.fractional = branch;
  AuctionDomain domain(instance);
  FractionalPoint fp = FractionalPoint::from_coords(branch.x);
  out.decomposition = convex_decompose(fp, verifier, epsilon, domain);
  const auto &terms = out.decomposition.decomposition.terms;
  int n = instance.players();
  out.term_payments.assign(terms.size(), Vec(size_t(n), 0.0));
  for (size_t t = 0; t < terms.size(); ++t) {
    for (int i = 0; i < n; ++i) {
      double p = branch.p[size_t(i)];
      if (p <= 0.0) continue;
      double denom = instance.player_value(i, branch.x);
      if (denom <= 1e-12) continue;  // charged player got (numerically) nothing
      out.term_payments[t][size_t(i)] = p * instance.player_value(i, terms[t].point) / denom;
    }
  }
  return out;
}

RealizedOutcome realize(const ConvertedBranch &converted, SeededRng &rng) {
  const auto &terms = converted.decomposition.decomposition.terms;
  Vec lambdas;
  lambdas.reserve(terms.size());
  for (const auto &term : terms) lambdas.push_back(term.lambda);
  SeededRng stream = rng.stream("decomposition");
  int idx = int(stream.draw_categorical(lambdas));
  RealizedOutcome out;
  out.branch = converted.fractional.branch;
  out.term = idx;
  out.allocation = terms[size_t(idx)].point;
  out.payments = converted.term_payments[size_t(idx)];
  return out;
}

LsOutcome exact_ls_mechanism(const AuctionInstance &instance, const Allocator &solve,
                             IntegralityGapVerifier &verifier, double epsilon, SeededRng &rng) {
  LsOutcome out;
  out.vcg = fractional_vcg(instance, solve);
  MechanismBranch branch;
  branch.branch = 0;
  branch.probability = 1.0;
  branch.x = out.vcg.allocation;
  branch.p = out.vcg.payments;
  ConvertedBranch converted = integral_conversion(branch, instance, verifier, epsilon);
  out.decomposition = converted.decomposition;
  out.term_payments = converted.term_payments;
  out.realized = realize(converted, rng);
  return out;
}

// ---- Audit ----------------------------------------------------------------

namespace {

struct ConvertedDistribution {
  MechanismDistribution dist;
  std::vector<ConvertedBranch> branches;
};

ConvertedDistribution build_converted(const AuctionInstance &reported, const Allocator &solve,
                                      const MechanismParams &params,
                                      IntegralityGapVerifier &verifier, double conversion_epsilon) {
  ConvertedDistribution out;
  out.dist = mechanism_distribution(reported, solve, params);
  out.branches.reserve(out.dist.branches.size());
  for (const MechanismBranch &br : out.dist.branches) {
    out.branches.push_back(integral_conversion(br, reported, verifier, conversion_epsilon));
  }
  return out;
}

// E[v̄_i(x″) − p″_i] per player, expectation over stage draw × lottery term,
// valuations v̄ from `truth`, payments as recorded (reported scaling).
Vec expected_true_utilities(const ConvertedDistribution &cd, const AuctionInstance &truth) {
  Vec u(size_t(truth.players()), 0.0);
  for (const ConvertedBranch &cb : cd.branches) {
    const auto &terms = cb.decomposition.decomposition.terms;
    for (size_t t = 0; t < terms.size(); ++t) {
      double w = cb.fractional.probability * terms[t].lambda;
      if (w <= 0.0) continue;
      for (int i = 0; i < truth.players(); ++i) {
        u[size_t(i)] +=
            w * (truth.player_value(i, terms[t].point) - cb.term_payments[t][size_t(i)]);
      }
    }
  }
  return u;
}

double expected_true_welfare(const ConvertedDistribution &cd, const AuctionInstance &truth) {
  double w = 0.0;
  for (const ConvertedBranch &cb : cd.branches) {
    const auto &terms = cb.decomposition.decomposition.terms;
    for (size_t t = 0; t < terms.size(); ++t) {
      double mass = cb.fractional.probability * terms[t].lambda;
      if (mass <= 0.0) continue;
      double v = 0.0;
      for (int i = 0; i < truth.players(); ++i) v += truth.player_value(i, terms[t].point);
      w += mass * v;
    }
  }
  return w;
}

bool monte_carlo_agrees(const ConvertedDistribution &cd, const AuctionInstance &truth,
                        const Vec &exact_utilities, double exact_welfare, long long samples,
                        std::uint64_t seed) {
  int n = truth.players();
  SeededRng rng = SeededRng(seed).stream("audit-monte-carlo");
  Vec stage_probs;
  for (const ConvertedBranch &cb : cd.branches) stage_probs.push_back(cb.fractional.probability);
  Vec sum(size_t(n), 0.0), sumsq(size_t(n), 0.0);
  double wsum = 0.0, wsumsq = 0.0;
  for (long long s = 0; s < samples; ++s) {
    int j = int(rng.draw_categorical(stage_probs));
    const ConvertedBranch &cb = cd.branches[size_t(j)];
    const auto &terms = cb.decomposition.decomposition.terms;
    Vec lambdas;
    lambdas.reserve(terms.size());
    for (const auto &term : terms) lambdas.push_back(term.lambda);
    int t = int(rng.draw_categorical(lambdas));
    double welfare = 0.0;
    for (int i = 0; i < n; ++i) {
      double v = truth.player_value(i, terms[size_t(t)].point);
      double util = v - cb.term_payments[size_t(t)][size_t(i)];
      sum[size_t(i)] += util;
      sumsq[size_t(i)] += util * util;
      welfare += v;
    }
    wsum += welfare;
    wsumsq += welfare * welfare;
  }
  auto within = [samples](double total, double totalsq, double exact) {
    double mean = total / double(samples);
    double var = std::max(0.0, totalsq / double(samples) - mean * mean);
    double se = std::sqrt(var / double(samples));
    return std::abs(mean - exact) <= 3.0 * se + 1e-9;
  };
  for (int i = 0; i < n; ++i) {
    if (!within(sum[size_t(i)], sumsq[size_t(i)], exact_utilities[size_t(i)])) return false;
  }
  return within(wsum, wsumsq, exact_welfare);
}

}  // namespace

AuditReport audit_truthfulness(const AuctionInstance &instance, const AuditOptions &options) {
  int n = instance.players();
  if (instance.dimension() > kLpMaxVars) {
    fail(errc::capacity, strf("exact audits are limited to %d coordinates, got %d", kLpMaxVars,
                              instance.dimension()));
  }
  AuditReport report;
  report.params = MechanismParams::derive(options.epsilon0, n);

  Allocator solve = make_exact_allocator();
  {  // Exact expectations rely on the allocator being a pure function.
    AllocatorResult a = solve(instance);
    AllocatorResult b = solve(instance);
    if (a.allocation != b.allocation) {
      fail(errc::audit, "allocator returned two different optima for one input");
    }
  }

  std::unique_ptr<IntegralityGapVerifier> verifier_ptr;
  if (options.alpha_mode == AlphaMode::greedy) {
    verifier_ptr = std::make_unique<GreedyVerifier>(instance);
  } else {
    verifier_ptr = std::make_unique<ExactVerifier>(instance);
  }
  IntegralityGapVerifier &verifier = *verifier_ptr;
  report.alpha = verifier.alpha();

  LpResult lp_opt = lp_max_vertex(instance.lp_rows(), instance.lp_rhs(), instance.valuation_weights());
  report.opt_fractional = lp_opt.objective;
  report.opt_integral = 0.0;
  for (const IntegralPoint &p : instance.integral_points()) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += instance.player_value(i, p);
    report.opt_integral = std::max(report.opt_integral, v);
  }

  ConvertedDistribution truthful =
      build_converted(instance, solve, report.params, verifier, options.conversion_epsilon);

  report.payments_nonneg = true;
  for (const ConvertedBranch &cb : truthful.branches) {
    for (double p : cb.fractional.p) {
      if (p < -kZeroTol) report.payments_nonneg = false;
    }
    for (const Vec &pv : cb.term_payments) {
      for (double p : pv) {
        if (p < -kZeroTol) report.payments_nonneg = false;
      }
    }
  }

  Vec truthful_utilities = expected_true_utilities(truthful, instance);
  report.expected_welfare = expected_true_welfare(truthful, instance);
  report.welfare_bound = report.alpha * (1.0 - report.params.epsilon) * (1.0 - options.epsilon0) /
                         (1.0 + 4.0 * options.conversion_epsilon) * report.opt_fractional;
  report.welfare_ok = report.expected_welfare >= report.welfare_bound - 1e-9;

  report.players.assign(size_t(n), PlayerAudit{});
  for (int i = 0; i < n; ++i) {
    PlayerAudit &pa = report.players[size_t(i)];
    pa.player = i;
    double eu = 0.0;
    for (const ConvertedBranch &cb : truthful.branches) {
      const MechanismBranch &br = cb.fractional;
      eu += br.probability * (instance.player_value(i, br.x) - br.p[size_t(i)]);
    }
    pa.expected_fractional_utility = eu;
    pa.min_util_bound = (1.0 - report.params.eps_bar) * report.params.qi *
                        truthful.dist.constants.value_of_u[size_t(i)];
    pa.min_util_ok = eu >= pa.min_util_bound - 1e-9;
    double mass = 0.0;
    for (const ConvertedBranch &cb : truthful.branches) {
      const auto &terms = cb.decomposition.decomposition.terms;
      for (size_t t = 0; t < terms.size(); ++t) {
        double util =
            instance.player_value(i, terms[t].point) - cb.term_payments[t][size_t(i)];
        if (util < -1e-12) mass += cb.fractional.probability * terms[t].lambda;
      }
    }
    pa.negative_mass = mass;
    pa.ir_ok = mass <= (1.0 - report.params.q0) + kRelTol;
  }

  for (int i = 0; i < n; ++i) {
    for (double scale : options.deviation_scales) {
      DeviationAudit da;
      da.player = i;
      da.scale = scale;
      da.truthful_utility = truthful_utilities[size_t(i)];
      AuctionInstance reported = instance.with_player_value_scaled(i, scale);
      ConvertedDistribution dev =
          build_converted(reported, solve, report.params, verifier, options.conversion_epsilon);
      da.deviation_utility = expected_true_utilities(dev, instance)[size_t(i)];
      da.truthful_ok =
          da.truthful_utility >= (1.0 - options.epsilon0) * da.deviation_utility - 1e-9;
      report.deviations.push_back(da);
    }
  }

  report.monte_carlo_ok = true;
  if (options.monte_carlo_check) {
    report.monte_carlo_ok =
        monte_carlo_agrees(truthful, instance, truthful_utilities, report.expected_welfare,
                           options.monte_carlo_samples, options.seed);
  }

  report.all_ok = report.payments_nonneg && report.welfare_ok && report.monte_carlo_ok;
  for (const PlayerAudit &pa : report.players) {
    report.all_ok = report.all_ok && pa.min_util_ok && pa.ir_ok;
  }
  for (const DeviationAudit &da : report.deviations) {
    report.all_ok = report.all_ok && da.truthful_ok;
  }
  return report;
}

LemmaReport check_lemmas(const AuctionInstance &instance,
                         const std::vector<std::pair<int, double>> &deviations, double epsilon) {
  LemmaReport report;
  Allocator solve = make_mwu_allocator(epsilon);

  // Candidate comparison points: every vertex of Q plus every integral point.
  std::vector<Vec> candidates = enumerate_vertices(instance.lp_rows(), instance.lp_rhs());
  for (const IntegralPoint &p : instance.integral_points()) {
    Vec x(p.coords.size());
    for (size_t c = 0; c < p.coords.size(); ++c) x[c] = double(p.coords[c]);
    candidates.push_back(std::move(x));
  }

  std::vector<AuctionInstance> reports;
  reports.push_back(instance);
  for (const auto &[player, scale] : deviations) {
    reports.push_back(instance.with_player_value_scaled(player, scale));
  }

  // Allocation quality: for every report R, the solver's x must satisfy
  // v_R(x) ≥ v_R(x̂) − β_i − ε·v_{R,i}(x̂) against every feasible x̂.
  report.lemma1_worst_margin = std::numeric_limits<double>::infinity();
  for (const AuctionInstance &rep : reports) {
    PlayerConstants consts = compute_player_constants(rep, epsilon);
    AllocatorResult res = solve(rep);
    check_certificate(res, epsilon);
    double vx = total_welfare(rep, res.allocation);
    for (const Vec &cand : candidates) {
      double vc = total_welfare(rep, cand);
      for (int i = 0; i < rep.players(); ++i) {
        double rhs = vc - consts.beta[size_t(i)] - epsilon * rep.player_value(i, cand);
        report.lemma1_worst_margin = std::min(report.lemma1_worst_margin, vx - rhs);
      }
    }
  }
  report.lemma1_ok = report.lemma1_worst_margin >= -1e-9;

  // Truthfulness of the discounted VCG core, run in isolation: deviating to a
  // scaled report gains at most ε·v̄_i(x_dev) + 3β_i, where x_dev is the
  // allocation the deviation produces.
  report.lemma2_worst_margin = std::numeric_limits<double>::infinity();
  M0Outcome truth_run = run_m0(instance, solve, epsilon);
  PlayerConstants consts = compute_player_constants(instance, epsilon);
  for (const auto &[player, scale] : deviations) {
    AuctionInstance reported = instance.with_player_value_scaled(player, scale);
    M0Outcome dev_run = run_m0(reported, solve, epsilon);
    double u_truth =
        instance.player_value(player, truth_run.x) - truth_run.p[size_t(player)];
    double u_dev = instance.player_value(player, dev_run.x) - dev_run.p[size_t(player)];
    double slack = epsilon * instance.player_value(player, dev_run.x) +
                   3.0 * consts.beta[size_t(player)];
    report.lemma2_worst_margin = std::min(report.lemma2_worst_margin, u_truth - (u_dev - slack));
  }
  if (deviations.empty()) report.lemma2_worst_margin = 0.0;
  report.lemma2_ok = report.lemma2_worst_margin >= -1e-9;
  return report;
}

}  // namespace mwumech
