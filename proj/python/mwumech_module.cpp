// Python bindings.  The API mirrors the CLI: operations take and return JSON
// strings, so the Python side stays schema-stable and dependency-free.

#include <pybind11/pybind11.h>

#include <cstdint>
#include <memory>
#include <string>

#include "mwumech/auction.hpp"
#include "mwumech/covering.hpp"
#include "mwumech/decomposition.hpp"
#include "mwumech/json_io.hpp"
#include "mwumech/mechanism.hpp"
#include "mwumech/packing.hpp"
#include "mwumech/rng.hpp"

namespace py = pybind11;
using namespace mwumech;

namespace {

std::unique_ptr<IntegralityGapVerifier> verifier_for(const AuctionInstance &instance,
                                                     const std::string &alpha_mode) {
  if (alpha_mode == "greedy") return std::make_unique<GreedyVerifier>(instance);
  if (alpha_mode == "exact") return std::make_unique<ExactVerifier>(instance);
  fail(errc::argument, "alpha_mode must be \"exact\" or \"greedy\"");
}

std::string py_solve_cover(const std::string &text, double epsilon) {
  MatrixLp lp = parse_matrix_lp(text);
  CoveringProblem problem;
  problem.num_rows = static_cast<int>(lp.matrix.size());
  problem.row_targets = lp.bounds;
  problem.oracle = make_matrix_covering_oracle(lp.matrix, lp.bounds, lp.costs, lp.kappa);
  return covering_report_json(solve_covering(problem, epsilon, lp.kappa));
}

std::string py_solve_pack(const std::string &text, double epsilon) {
  if (text.find("\"players\"") != std::string::npos &&
      text.find("\"matrix\"") == std::string::npos) {
    AuctionInstance instance = parse_auction_instance(text);
    return auction_packing_report_json(solve_auction_packing(instance, epsilon));
  }
  MatrixLp lp = parse_matrix_lp(text);
  PackingProblem problem;
  problem.num_rows = static_cast<int>(lp.matrix.size());
  problem.row_capacities = lp.bounds;
  problem.oracle_kappa = lp.kappa;
  problem.oracle = make_matrix_packing_oracle(lp.matrix, lp.bounds, lp.costs, lp.kappa);
  return packing_report_json(solve_packing(problem, epsilon));
}

std::string py_decompose(const std::string &text, double epsilon, const std::string &alpha_mode) {
  DecomposeInput input = parse_decompose_input(text);
  if (!input.instance.feasible_fractional(input.x_star)) {
    fail(errc::argument, "x_star is not a feasible fractional allocation");
  }
  auto verifier = verifier_for(input.instance, alpha_mode);
  AuctionDomain domain(input.instance);
  FractionalPoint x_star = FractionalPoint::from_coords(input.x_star);
  return decomposition_report_json(convex_decompose(x_star, *verifier, epsilon, domain));
}

std::string py_mechanism_run(const std::string &text, double epsilon0, double epsilon,
                             const std::string &alpha_mode, std::uint64_t seed) {
  AuctionInstance instance = parse_auction_instance(text);
  MechanismParams params = MechanismParams::derive(epsilon0, instance.players());
  Allocator solve = make_exact_allocator();
  auto verifier = verifier_for(instance, alpha_mode);
  SeededRng rng(seed);
  MechanismDistribution dist = mechanism_distribution(instance, solve, params);
  Vec probs;
  for (const MechanismBranch &br : dist.branches) probs.push_back(br.probability);
  SeededRng stage = rng.stream("stage");
  int branch = stage.draw_categorical(probs);
  ConvertedBranch converted =
      integral_conversion(dist.branches[static_cast<size_t>(branch)], instance, *verifier, epsilon);
  RealizedOutcome realized = realize(converted, rng);
  return mechanism_run_report_json(params, dist.active, converted, realized);
}

std::string py_mechanism_audit(const std::string &text, double epsilon0, double epsilon,
                               const std::string &alpha_mode, std::uint64_t seed,
                               bool monte_carlo, long long samples) {
  AuctionInstance instance = parse_auction_instance(text);
  AuditOptions options;
  options.epsilon0 = epsilon0;
  options.conversion_epsilon = epsilon;
  options.alpha_mode = alpha_mode == "greedy" ? AlphaMode::greedy : AlphaMode::exact;
  options.seed = seed;
  options.monte_carlo_check = monte_carlo;
  options.monte_carlo_samples = samples;
  return audit_report_json(audit_truthfulness(instance, options));
}

std::string py_generate(const std::string &kind, int players, int items, std::uint64_t seed) {
  InstanceKind k;
  if (kind == "single-minded") {
    k = InstanceKind::single_minded_uniform;
  } else if (kind == "additive") {
    k = InstanceKind::additive_uniform;
  } else if (kind == "adversarial") {
    k = InstanceKind::adversarial_overlap;
  } else {
    fail(errc::argument, "kind must be single-minded, additive, or adversarial");
  }
  return auction_instance_json(generate_instance(k, players, items, seed));
}

double py_measured_alpha(const std::string &text) {
  return measured_alpha(parse_auction_instance(text));
}

}  // namespace

PYBIND11_MODULE(_mwumech, m) {
  m.doc() = "MWU LP solvers, exact convex decomposition, and a randomized truthful auction";
  py::register_exception<error>(m, "MwumechError");
  m.def("solve_cover", &py_solve_cover, py::arg("problem_json"), py::arg("epsilon") = 0.25);
  m.def("solve_pack", &py_solve_pack, py::arg("problem_json"), py::arg("epsilon") = 0.25);
  m.def("decompose", &py_decompose, py::arg("input_json"), py::arg("epsilon") = 0.25,
        py::arg("alpha_mode") = "exact");
  m.def("mechanism_run", &py_mechanism_run, py::arg("instance_json"), py::arg("epsilon0") = 0.5,
        py::arg("epsilon") = 0.25, py::arg("alpha_mode") = "exact", py::arg("seed") = 1);
  m.def("mechanism_audit", &py_mechanism_audit, py::arg("instance_json"),
        py::arg("epsilon0") = 0.5, py::arg("epsilon") = 0.25, py::arg("alpha_mode") = "exact",
        py::arg("seed") = 1, py::arg("monte_carlo") = false, py::arg("samples") = 20000);
  m.def("generate_instance", &py_generate, py::arg("kind") = "single-minded",
        py::arg("players") = 3, py::arg("items") = 4, py::arg("seed") = 1);
  m.def("measured_alpha", &py_measured_alpha, py::arg("instance_json"));
  m.def("json_to_csv", &json_to_csv, py::arg("json_text"));
}
