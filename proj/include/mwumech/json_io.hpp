#pragma once
// JSON input parsing and byte-stable report serialization.
//
// Inputs are parsed with a lenient reader that converts syntax errors into
// io-class failures carrying line/column positions.  Reports are written by a
// small ordered writer: keys appear in a fixed order and doubles are printed
// with %.17g (round-trip exact), so rerunning a seeded command reproduces its
// report byte for byte.

#include <string>
#include <string_view>
#include <vector>

#include "mwumech/auction.hpp"
#include "mwumech/core.hpp"
#include "mwumech/covering.hpp"
#include "mwumech/decomposition.hpp"
#include "mwumech/mechanism.hpp"
#include "mwumech/packing.hpp"

namespace mwumech {

// %.17g with negative zero collapsed; fails on non-finite values, which must
// never reach a report.
std::string format_double(double value);

// Ordered, escape-correct JSON emitter.  Keys are written in call order.
class JsonWriter {
 public:
  JsonWriter &begin_object();
  JsonWriter &end_object();
  JsonWriter &begin_array();
  JsonWriter &end_array();
  JsonWriter &key(std::string_view name);
  JsonWriter &value(double v);
  JsonWriter &value(long long v);
  JsonWriter &value(int v) { return value(static_cast<long long>(v)); }
  JsonWriter &value(bool v);
  JsonWriter &value(std::string_view s);
  JsonWriter &number_array(const Vec &values);
  const std::string &str() const { return out_; }

 private:
  void element_prefix();
  std::string out_;
  std::vector<char> needs_comma_;
  bool after_key_ = false;
};

// ---- Input documents -------------------------------------------------------

// Explicit-matrix LP: {"matrix": [[...]], "bounds": [...], "costs": [...],
// "kappa": 1.0}.  Covering reads rows as Ax ≥ bounds, packing as Ax ≤ bounds.
struct MatrixLp {
  std::vector<Vec> matrix;
  Vec bounds;
  Vec costs;
  double kappa = 1.0;
};

MatrixLp parse_matrix_lp(const std::string &text);

// {"items": m, "players": [{"type": "single_minded", "bundle": [...],
// "value": v} | {"type": "additive", "item_values": [...]}]}
AuctionInstance parse_auction_instance(const std::string &text);

// {"instance": {...auction instance...}, "x_star": [...]}
struct DecomposeInput {
  AuctionInstance instance;
  Vec x_star;
};

DecomposeInput parse_decompose_input(const std::string &text);

// ---- Reports ---------------------------------------------------------------

std::string auction_instance_json(const AuctionInstance &instance);
std::string covering_report_json(const CoveringSolution &solution);
std::string packing_report_json(const PackingSolution &solution);
std::string auction_packing_report_json(const AuctionPackingResult &result);
std::string decomposition_report_json(const DecompositionResult &result);
std::string mechanism_run_report_json(const MechanismParams &params,
                                      const std::vector<char> &active,
                                      const ConvertedBranch &converted,
                                      const RealizedOutcome &realized);
std::string audit_report_json(const AuditReport &report);

// Flattens a JSON report into two-column CSV ("path,value" per scalar leaf,
// paths in JSON-pointer form, lexicographic order).
std::string json_to_csv(const std::string &json_text);

}  // namespace mwumech
