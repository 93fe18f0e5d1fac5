// Command-line front end: MWU covering/packing solves, convex decomposition,
// the randomized truthful mechanism, its audit, and instance generation.
//
// Exit codes: 0 success, 1 a solver/mechanism invariant failed at runtime
// (oracle contract, iteration tripwire, audit), 2 unusable input (bad file,
// malformed JSON, out-of-range arguments, capacity limits).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mwumech/auction.hpp"
#include "mwumech/covering.hpp"
#include "mwumech/decomposition.hpp"
#include "mwumech/json_io.hpp"
#include "mwumech/log.hpp"
#include "mwumech/mechanism.hpp"
#include "mwumech/packing.hpp"
#include "mwumech/rng.hpp"

namespace {

using namespace mwumech;

std::string read_input(const std::string &path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io, "cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string &report, const std::string &format, const std::string &output) {
  std::string text = format == "csv" ? json_to_csv(report) : report;
  if (!text.empty() && text.back() != '\n') text += '\n';
  if (output.empty() || output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) fail(errc::io, "cannot open output file: " + output);
  out << text;
}

std::unique_ptr<IntegralityGapVerifier> make_verifier(const AuctionInstance &instance,
                                                      const std::string &mode) {
  if (mode == "greedy") return std::make_unique<GreedyVerifier>(instance);
  if (mode == "exact") return std::make_unique<ExactVerifier>(instance);
  fail(errc::argument, "alpha-mode must be \"exact\" or \"greedy\", got \"" + mode + "\"");
}

int exit_code_for(errc code) {
  switch (code) {
    case errc::argument:
    case errc::io:
    case errc::capacity:
      return 2;
    default:
      return 1;
  }
}

struct CommonOptions {
  std::string input = "-";
  std::string output;
  std::string format = "json";
  double epsilon = 0.25;
  double epsilon0 = 0.5;
  std::string alpha_mode = "exact";
  std::uint64_t seed = 1;
};

bool document_is_auction(const std::string &text) {
  // Cheap dispatch: an auction document carries "players", a matrix LP
  // carries "matrix".  Full validation happens in the real parser.
  return text.find("\"players\"") != std::string::npos &&
         text.find("\"matrix\"") == std::string::npos;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"multiplicative-weights LP solving, exact convex decomposition, "
               "and a randomized approximately-truthful auction"};
  app.require_subcommand(1);
  CommonOptions opt;

  auto add_io = [&opt](CLI::App *cmd) {
    cmd->add_option("--input,-i", opt.input, "input JSON file, or - for stdin");
    cmd->add_option("--output,-o", opt.output, "output file (default stdout)");
    cmd->add_option("--format", opt.format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App *cover = app.add_subcommand("solve-cover", "solve min cx s.t. Ax >= b, x >= 0");
  add_io(cover);
  cover->add_option("--epsilon", opt.epsilon, "accuracy parameter in (0, 1/2]");

  CLI::App *pack = app.add_subcommand(
      "solve-pack", "solve max cx s.t. Ax <= b, x >= 0 (matrix LP or auction instance)");
  add_io(pack);
  pack->add_option("--epsilon", opt.epsilon, "accuracy parameter in (0, 1/2]");

  CLI::App *decompose = app.add_subcommand(
      "decompose", "express a scaled fractional point as a lottery over integral points");
  add_io(decompose);
  decompose->add_option("--epsilon", opt.epsilon, "accuracy parameter in (0, 1/2]");
  decompose->add_option("--alpha-mode", opt.alpha_mode, "verifier: exact or greedy")
      ->check(CLI::IsMember({"exact", "greedy"}));

  CLI::App *mechanism = app.add_subcommand("mechanism", "randomized truthful auction");
  mechanism->require_subcommand(1);
  CLI::App *run = mechanism->add_subcommand("run", "sample one outcome of the mechanism");
  add_io(run);
  run->add_option("--epsilon0", opt.epsilon0, "truthfulness loss target in (0, 1/2]");
  run->add_option("--epsilon", opt.epsilon, "decomposition accuracy for the integral stage");
  run->add_option("--seed", opt.seed, "random seed");
  run->add_option("--alpha-mode", opt.alpha_mode, "verifier: exact or greedy")
      ->check(CLI::IsMember({"exact", "greedy"}));
  CLI::App *audit = mechanism->add_subcommand("audit", "exact-expectation truthfulness audit");
  add_io(audit);
  audit->add_option("--epsilon0", opt.epsilon0, "truthfulness loss target in (0, 1/2]");
  audit->add_option("--epsilon", opt.epsilon, "decomposition accuracy for the integral stage");
  audit->add_option("--seed", opt.seed, "random seed (Monte Carlo cross-check)");
  audit->add_option("--alpha-mode", opt.alpha_mode, "verifier: exact or greedy")
      ->check(CLI::IsMember({"exact", "greedy"}));
  bool monte_carlo = false;
  long long samples = 20000;
  audit->add_flag("--monte-carlo", monte_carlo, "cross-check expectations by seeded sampling");
  audit->add_option("--samples", samples, "Monte Carlo sample count");

  CLI::App *gen = app.add_subcommand("gen", "generate a pseudo-random auction instance");
  std::string kind = "single-minded";
  int players = 3;
  int items = 4;
  gen->add_option("--kind", kind, "single-minded, additive, or adversarial")
      ->check(CLI::IsMember({"single-minded", "additive", "adversarial"}));
  gen->add_option("--players,-n", players, "player count");
  gen->add_option("--items,-m", items, "item count");
  gen->add_option("--seed", opt.seed, "random seed");
  gen->add_option("--output,-o", opt.output, "output file (default stdout)");
  gen->add_option("--format", opt.format, "report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (cover->parsed()) {
      MatrixLp lp = parse_matrix_lp(read_input(opt.input));
      CoveringProblem problem;
      problem.num_rows = static_cast<int>(lp.matrix.size());
      problem.row_targets = lp.bounds;
      problem.oracle = make_matrix_covering_oracle(lp.matrix, lp.bounds, lp.costs, lp.kappa);
      CoveringSolution solution = solve_covering(problem, opt.epsilon, lp.kappa);
      emit(covering_report_json(solution), opt.format, opt.output);
    } else if (pack->parsed()) {
      std::string text = read_input(opt.input);
      if (document_is_auction(text)) {
        AuctionInstance instance = parse_auction_instance(text);
        AuctionPackingResult result = solve_auction_packing(instance, opt.epsilon);
        emit(auction_packing_report_json(result), opt.format, opt.output);
      } else {
        MatrixLp lp = parse_matrix_lp(text);
        PackingProblem problem;
        problem.num_rows = static_cast<int>(lp.matrix.size());
        problem.row_capacities = lp.bounds;
        problem.oracle_kappa = lp.kappa;
        problem.oracle = make_matrix_packing_oracle(lp.matrix, lp.bounds, lp.costs, lp.kappa);
        PackingSolution solution = solve_packing(problem, opt.epsilon);
        emit(packing_report_json(solution), opt.format, opt.output);
      }
    } else if (decompose->parsed()) {
      DecomposeInput input = parse_decompose_input(read_input(opt.input));
      auto verifier = make_verifier(input.instance, opt.alpha_mode);
      AuctionDomain domain(input.instance);
      FractionalPoint x_star = FractionalPoint::from_coords(input.x_star);
      if (!input.instance.feasible_fractional(input.x_star)) {
        fail(errc::argument, "x_star is not a feasible fractional allocation");
      }
      DecompositionResult result = convex_decompose(x_star, *verifier, opt.epsilon, domain);
      emit(decomposition_report_json(result), opt.format, opt.output);
    } else if (run->parsed()) {
      AuctionInstance instance = parse_auction_instance(read_input(opt.input));
      MechanismParams params = MechanismParams::derive(opt.epsilon0, instance.players());
      Allocator solve = make_exact_allocator();
      auto verifier = make_verifier(instance, opt.alpha_mode);
      SeededRng rng(opt.seed);
      MechanismDistribution dist = mechanism_distribution(instance, solve, params);
      Vec probs;
      for (const MechanismBranch &br : dist.branches) probs.push_back(br.probability);
      SeededRng stage = rng.stream("stage");
      int branch = stage.draw_categorical(probs);
      ConvertedBranch converted =
          integral_conversion(dist.branches[static_cast<size_t>(branch)], instance, *verifier,
                              opt.epsilon);
      RealizedOutcome realized = realize(converted, rng);
      emit(mechanism_run_report_json(params, dist.active, converted, realized), opt.format,
           opt.output);
    } else if (audit->parsed()) {
      AuctionInstance instance = parse_auction_instance(read_input(opt.input));
      AuditOptions options;
      options.epsilon0 = opt.epsilon0;
      options.conversion_epsilon = opt.epsilon;
      options.alpha_mode = opt.alpha_mode == "greedy" ? AlphaMode::greedy : AlphaMode::exact;
      options.seed = opt.seed;
      options.monte_carlo_check = monte_carlo;
      options.monte_carlo_samples = samples;
      AuditReport report = audit_truthfulness(instance, options);
      emit(audit_report_json(report), opt.format, opt.output);
      if (!report.all_ok) return 1;
    } else if (gen->parsed()) {
      InstanceKind k = InstanceKind::single_minded_uniform;
      if (kind == "additive") k = InstanceKind::additive_uniform;
      if (kind == "adversarial") k = InstanceKind::adversarial_overlap;
      AuctionInstance instance = generate_instance(k, players, items, opt.seed);
      emit(auction_instance_json(instance), opt.format, opt.output);
    }
  } catch (const error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
