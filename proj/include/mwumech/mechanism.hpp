#pragma once
// Truthful-in-expectation auction pipeline: exact fractional VCG, the
// discounted VCG sub-mechanism M₀, the randomized dominant-allocation wrapper,
// the fractional→integral conversion through convex decomposition, and an
// exact-expectation truthfulness audit.
//
// Stage structure: with probability q₀ run M₀ (an approximate-welfare VCG with
// per-player discounts β_i and an active-player filter); with probability
// q_i hand everything to player i at price η′L_i when active.  Converting a
// fractional outcome to lottery over integral allocations scales payments by
// v_i(realized)/v_i(fractional), preserving truthfulness exactly in
// expectation.  The audit enumerates the full outcome tree — stage draw times
// decomposition terms — so expected utilities are computed in closed form.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mwumech/auction.hpp"
#include "mwumech/core.hpp"
#include "mwumech/decomposition.hpp"
#include "mwumech/rng.hpp"

namespace mwumech {

struct MechanismParams {
  double epsilon0 = 0.0;  // target truthfulness loss, in (0, 1/2]
  int n = 0;              // player count
  double eps_bar = 0.0;   // ε̄ = ε₀/2
  double q0 = 0.0;        // (1 − ε₀/n)ⁿ, the M₀ branch probability
  double qi = 0.0;        // (1 − q₀)/n per dominant-allocation branch
  double eta = 0.0;       // η = ε̄(1−q₀)²/n³
  double eta_prime = 0.0; // η′ = η/qᵢ
  double epsilon = 0.0;   // ε = η·ε̄·(1−q₀)/(8n), the 𝒜 approximation target

  static MechanismParams derive(double epsilon0, int n);
  // Asserts the closed-form identities and the ε and q₀ brackets
  // (ε₀⁵/(128n⁴) ≤ ε ≤ ε₀⁵/(16n⁴), 1−ε₀ ≤ q₀ ≤ 1−ε₀/2) to 1e-12 relative.
  void validate() const;
};

struct PlayerConstants {
  std::vector<IntegralPoint> u;  // uⁱ: all items to player i
  Vec value_of_u;                // v_i(uⁱ)
  Vec L;                         // L_i = Σ_{j≠i} v_j(uʲ)
  Vec beta;                      // β_i = ε·L_i
};

PlayerConstants compute_player_constants(const AuctionInstance &instance, double epsilon);

// Fractional allocator 𝒜: returns x ∈ Q approximately maximizing Σ v_i, with
// a certificate: welfare(x) ≥ (1−certificate)·fractional-OPT.
struct AllocatorResult {
  Vec allocation;
  double certificate = 0.0;  // 0 for exact solvers
};
using Allocator = std::function<AllocatorResult(const AuctionInstance &)>;

// Exact maximizer via vertex enumeration (d ≤ 12), deterministic lexicographic
// tie-break — a requirement for exact-expectation audits.
Allocator make_exact_allocator();
// MWU packing solver as 𝒜; certificate = 1 − objective/upper_bound ≤ epsilon.
Allocator make_mwu_allocator(double epsilon);

struct FractionalOutcome {
  Vec allocation;  // x* maximizing Σ v_i over Q
  Vec payments;    // VCG: p_i = v_{−i}(x̂⁽ⁱ⁾) − v_{−i}(x*) ≥ 0
  Vec p_vcg;       // same as payments (kept for record symmetry)
  Vec value;       // v_i(x*) per player
};

FractionalOutcome fractional_vcg(const AuctionInstance &instance, const Allocator &solve);

// M₀ (the mechanism's j=0 branch before the active-player filter):
// x = 𝒜(v), p_i = max(v_{−i}(𝒜(0, v_{−i})) − v_{−i}(x) − β_i, 0).
struct M0Outcome {
  Vec x;
  Vec p;
  Vec p_vcg;    // before the β_i discount and the floor at 0
  Vec value;    // v_i(x), reported valuations
  Vec utility;  // Û_i = value_i − p_i
};

M0Outcome run_m0(const AuctionInstance &instance, const Allocator &solve, double epsilon);

// One branch of the randomized mechanism: j = 0 is M₀ with inactive players
// zeroed; j ≥ 1 allocates uʲ and charges η′L_j when j is active.
struct MechanismBranch {
  int branch = 0;
  double probability = 0.0;
  Vec x;
  Vec p;
};

struct MechanismDistribution {
  MechanismParams params;
  PlayerConstants constants;
  M0Outcome m0;
  std::vector<char> active;  // T(v), from reported valuations only
  std::vector<MechanismBranch> branches;  // n+1 entries, index = branch j
};

MechanismDistribution mechanism_distribution(const AuctionInstance &instance,
                                             const Allocator &solve,
                                             const MechanismParams &params);

// Samples the stage draw from the distribution (stream "stage").
MechanismBranch approx_fractional_mechanism(const AuctionInstance &instance,
                                            const Allocator &solve, const MechanismParams &params,
                                            SeededRng &rng);

// Fractional → integral: decompose (α/(1+4ε))·x, realize a term, scale each
// payment by v_i(realized)/v_i(x) with a zero guard at v_i(x) ≤ 1e-12.
struct ConvertedBranch {
  MechanismBranch fractional;
  DecompositionResult decomposition;
  // payments_for(term, player) = p_i·v_i(x^term)/v_i(x)
  std::vector<Vec> term_payments;  // [term][player]
};

ConvertedBranch integral_conversion(const MechanismBranch &branch, const AuctionInstance &instance,
                                    IntegralityGapVerifier &verifier, double epsilon);

struct RealizedOutcome {
  int branch = 0;
  int term = 0;
  IntegralPoint allocation;
  Vec payments;
};

RealizedOutcome realize(const ConvertedBranch &converted, SeededRng &rng);

// The original randomized pipeline: exact VCG, decomposition of x*, lottery
// with payment scaling.  E[p_i] = (α/(1+4ε))·p_i^{VCG} and
// E[welfare] = (α/(1+4ε))·v(x*), both exactly over the recorded weights.
struct LsOutcome {
  FractionalOutcome vcg;
  DecompositionResult decomposition;
  std::vector<Vec> term_payments;
  RealizedOutcome realized;
};

LsOutcome exact_ls_mechanism(const AuctionInstance &instance, const Allocator &solve,
                             IntegralityGapVerifier &verifier, double epsilon, SeededRng &rng);

// ---- Audit ----------------------------------------------------------------

enum class AlphaMode { exact, greedy };

struct AuditOptions {
  double epsilon0 = 0.5;
  AlphaMode alpha_mode = AlphaMode::exact;
  double conversion_epsilon = 0.25;  // decomposition ε for the integral stage
  std::vector<double> deviation_scales = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
  std::uint64_t seed = 0;
  bool monte_carlo_check = false;  // seeded sampling cross-check (3σ agreement)
  long long monte_carlo_samples = 20000;
};

struct DeviationAudit {
  int player = 0;
  double scale = 1.0;
  double truthful_utility = 0.0;   // E[U″ | truthful report], exact
  double deviation_utility = 0.0;  // E[U″ | scaled report], exact
  bool truthful_ok = false;        // truthful ≥ (1−ε₀)·deviation − 1e-9
};

struct PlayerAudit {
  int player = 0;
  double expected_fractional_utility = 0.0;  // E[U′], truthful
  double min_util_bound = 0.0;               // (1−ε̄)·qᵢ·v_i(uⁱ)
  bool min_util_ok = false;
  double negative_mass = 0.0;  // exact Pr[realized U″ < 0], truthful
  bool ir_ok = false;          // negative_mass ≤ 1 − q₀
};

struct AuditReport {
  MechanismParams params;
  double alpha = 0.0;
  bool payments_nonneg = false;
  double expected_welfare = 0.0;  // E[Σ v̄_i(x″)], truthful, exact
  double opt_fractional = 0.0;    // LP optimum (vertex enumeration)
  double opt_integral = 0.0;      // brute force over Q_I
  double welfare_bound = 0.0;     // α(1−ε)(1−ε₀)/(1+4ε_conv) · opt_fractional
  bool welfare_ok = false;
  std::vector<PlayerAudit> players;
  std::vector<DeviationAudit> deviations;
  bool monte_carlo_ok = true;
  bool all_ok = false;
};

// Exact audit: expectations enumerated over stage draws × decomposition terms.
// Requires a deterministic allocator (checked by replaying one call).
AuditReport audit_truthfulness(const AuctionInstance &instance, const AuditOptions &options);

// Lemma-level inequality checks with the MWU packing solver as 𝒜.
// For each report R in {truth} ∪ deviations and each candidate x̂ (all
// integral points and all LP vertices):   v_R(x_R) ≥ v_R(x̂) − β_i − ε·v_{R,i}(x̂) − 1e-9
// and per deviation, with M₀ in isolation: U_i(truth) ≥ U_i(R) − ε·v̄_i(x_R) − 3β_i − 1e-9.
struct LemmaReport {
  double lemma1_worst_margin = 0.0;  // min over triples of LHS − RHS
  bool lemma1_ok = false;
  double lemma2_worst_margin = 0.0;
  bool lemma2_ok = false;
};

LemmaReport check_lemmas(const AuctionInstance &instance,
                         const std::vector<std::pair<int, double>> &deviations, double epsilon);

}  // namespace mwumech
