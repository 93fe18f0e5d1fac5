// JSON parsing and byte-stable serialization for CLI reports.

#include "mwumech/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "json.hpp"
#include "mwumech/log.hpp"

namespace mwumech {

namespace {

using nlohmann::json;

// nlohmann reports a 1-based byte offset; turn it into line/column so a user
// can find the problem in a hand-written input file.
[[noreturn]] void fail_at_byte(const std::string &text, std::size_t byte, const char *what) {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t limit = byte > 0 ? byte - 1 : 0;
  if (limit > text.size()) limit = text.size();
  for (std::size_t k = 0; k < limit; ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  fail(errc::io, strf("invalid JSON at line %zu column %zu: %s", line, column, what));
}

json parse_document(const std::string &text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    fail_at_byte(text, e.byte, e.what());
  }
}

const json &need(const json &doc, const char *field) {
  auto it = doc.find(field);
  if (it == doc.end()) fail(errc::io, strf("missing field \"%s\"", field));
  return *it;
}

double need_number(const json &doc, const char *field) {
  const json &v = need(doc, field);
  if (!v.is_number()) fail(errc::io, strf("field \"%s\" must be a number", field));
  return v.get<double>();
}

long long need_integer(const json &doc, const char *field) {
  const json &v = need(doc, field);
  if (!v.is_number_integer()) fail(errc::io, strf("field \"%s\" must be an integer", field));
  return v.get<long long>();
}

Vec need_number_array(const json &doc, const char *field) {
  const json &v = need(doc, field);
  if (!v.is_array()) fail(errc::io, strf("field \"%s\" must be an array", field));
  Vec out;
  out.reserve(v.size());
  for (const json &item : v) {
    if (!item.is_number()) fail(errc::io, strf("field \"%s\" must contain only numbers", field));
    out.push_back(item.get<double>());
  }
  return out;
}

ValuationProfile profile_from_json(const json &doc) {
  ValuationProfile profile;
  profile.items = static_cast<int>(need_integer(doc, "items"));
  const json &players = need(doc, "players");
  if (!players.is_array()) fail(errc::io, "field \"players\" must be an array");
  for (const json &p : players) {
    if (!p.is_object()) fail(errc::io, "each player must be an object");
    const json &type = need(p, "type");
    if (!type.is_string()) fail(errc::io, "player field \"type\" must be a string");
    std::string kind = type.get<std::string>();
    if (kind == "single_minded") {
      const json &bundle_json = need(p, "bundle");
      if (!bundle_json.is_array()) fail(errc::io, "player field \"bundle\" must be an array");
      std::vector<int> bundle;
      bundle.reserve(bundle_json.size());
      for (const json &item : bundle_json) {
        if (!item.is_number_integer()) fail(errc::io, "bundle entries must be integers");
        bundle.push_back(item.get<int>());
      }
      profile.players.push_back(Valuation::single_minded(std::move(bundle), need_number(p, "value")));
    } else if (kind == "additive") {
      profile.players.push_back(Valuation::additive(need_number_array(p, "item_values")));
    } else {
      fail(errc::io, strf("unknown player type \"%s\"", kind.c_str()));
    }
  }
  return profile;
}

void write_params(JsonWriter &w, const MechanismParams &p) {
  w.begin_object();
  w.key("epsilon0").value(p.epsilon0);
  w.key("n").value(p.n);
  w.key("eps_bar").value(p.eps_bar);
  w.key("q0").value(p.q0);
  w.key("qi").value(p.qi);
  w.key("eta").value(p.eta);
  w.key("eta_prime").value(p.eta_prime);
  w.key("epsilon").value(p.epsilon);
  w.end_object();
}

void write_sparse_columns(JsonWriter &w, const std::vector<std::pair<long long, double>> &x_hat) {
  w.begin_array();
  for (const auto &[column, value] : x_hat) {
    w.begin_object();
    w.key("column").value(column);
    w.key("value").value(value);
    w.end_object();
  }
  w.end_array();
}

void write_integral_point(JsonWriter &w, const IntegralPoint &point) {
  w.begin_array();
  for (long long c : point.coords) w.value(c);
  w.end_array();
}

void write_decomposition_body(JsonWriter &w, const DecompositionResult &result) {
  w.key("alpha").value(result.alpha);
  w.key("support_size").value(result.support_size);
  w.key("verifier_calls").value(result.verifier_calls);
  w.key("terms_added").value(result.terms_added);
  w.key("residual_norm").value(result.residual_norm);
  w.key("weight_sum").value(result.decomposition.weight_sum());
  w.key("target").number_array(result.target);
  w.key("terms").begin_array();
  for (const auto &term : result.decomposition.terms) {
    w.begin_object();
    w.key("lambda").value(term.lambda);
    w.key("point");
    write_integral_point(w, term.point);
    w.end_object();
  }
  w.end_array();
}

void csv_cell(std::string &out, const std::string &cell) {
  bool quote = cell.find_first_of(",\"\n") != std::string::npos;
  if (!quote) {
    out += cell;
    return;
  }
  out += '"';
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) fail(errc::internal, "non-finite value reached a report");
  if (value == 0.0) value = 0.0;  // collapse negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void JsonWriter::element_prefix() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!needs_comma_.empty()) {
    if (needs_comma_.back()) out_ += ',';
    needs_comma_.back() = 1;
  }
}

JsonWriter &JsonWriter::begin_object() {
  element_prefix();
  out_ += '{';
  needs_comma_.push_back(0);
  return *this;
}

JsonWriter &JsonWriter::end_object() {
  needs_comma_.pop_back();
  out_ += '}';
  return *this;
}

JsonWriter &JsonWriter::begin_array() {
  element_prefix();
  out_ += '[';
  needs_comma_.push_back(0);
  return *this;
}

JsonWriter &JsonWriter::end_array() {
  needs_comma_.pop_back();
  out_ += ']';
  return *this;
}

JsonWriter &JsonWriter::key(std::string_view name) {
  element_prefix();
  after_key_ = true;  // the name itself must not trigger a second prefix
  value(name);
  out_ += ':';
  after_key_ = true;  // nor must the member's value
  return *this;
}

JsonWriter &JsonWriter::value(double v) {
  element_prefix();
  out_ += format_double(v);
  return *this;
}

JsonWriter &JsonWriter::value(long long v) {
  element_prefix();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter &JsonWriter::value(bool v) {
  element_prefix();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter &JsonWriter::value(std::string_view s) {
  element_prefix();
  out_ += '"';
  for (char c : s) {
    switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\t': out_ += "\\t"; break;
      case '\r': out_ += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out_ += buf;
        } else {
          out_ += c;
        }
    }
  }
  out_ += '"';
  return *this;
}

JsonWriter &JsonWriter::number_array(const Vec &values) {
  begin_array();
  for (double v : values) value(v);
  return end_array();
}

MatrixLp parse_matrix_lp(const std::string &text) {
  json doc = parse_document(text);
  if (!doc.is_object()) fail(errc::io, "the input document must be an object");
  MatrixLp lp;
  const json &matrix = need(doc, "matrix");
  if (!matrix.is_array() || matrix.empty()) fail(errc::io, "\"matrix\" must be a nonempty array");
  for (const json &row : matrix) {
    if (!row.is_array()) fail(errc::io, "\"matrix\" rows must be arrays");
    Vec r;
    r.reserve(row.size());
    for (const json &v : row) {
      if (!v.is_number()) fail(errc::io, "\"matrix\" entries must be numbers");
      r.push_back(v.get<double>());
    }
    lp.matrix.push_back(std::move(r));
  }
  for (const Vec &row : lp.matrix) {
    if (row.size() != lp.matrix.front().size()) fail(errc::io, "\"matrix\" rows must have equal length");
  }
  lp.bounds = need_number_array(doc, "bounds");
  lp.costs = need_number_array(doc, "costs");
  if (lp.bounds.size() != lp.matrix.size()) {
    fail(errc::io, "\"bounds\" length must match the row count");
  }
  if (lp.costs.size() != lp.matrix.front().size()) {
    fail(errc::io, "\"costs\" length must match the column count");
  }
  if (doc.contains("kappa")) lp.kappa = need_number(doc, "kappa");
  return lp;
}

AuctionInstance parse_auction_instance(const std::string &text) {
  json doc = parse_document(text);
  if (!doc.is_object()) fail(errc::io, "the input document must be an object");
  return AuctionInstance(profile_from_json(doc));
}

DecomposeInput parse_decompose_input(const std::string &text) {
  json doc = parse_document(text);
  if (!doc.is_object()) fail(errc::io, "the input document must be an object");
  const json &inst = need(doc, "instance");
  if (!inst.is_object()) fail(errc::io, "field \"instance\" must be an object");
  DecomposeInput out{AuctionInstance(profile_from_json(inst)), need_number_array(doc, "x_star")};
  if (static_cast<int>(out.x_star.size()) != out.instance.dimension()) {
    fail(errc::io, strf("\"x_star\" has %zu coordinates but the instance has %d", out.x_star.size(),
                        out.instance.dimension()));
  }
  return out;
}

std::string auction_instance_json(const AuctionInstance &instance) {
  JsonWriter w;
  w.begin_object();
  w.key("items").value(instance.items());
  w.key("players").begin_array();
  for (const Valuation &val : instance.profile().players) {
    w.begin_object();
    if (val.kind == ValuationKind::single_minded) {
      w.key("type").value(std::string_view("single_minded"));
      w.key("bundle").begin_array();
      for (int item : val.bundle) w.value(item);
      w.end_array();
      w.key("value").value(val.value);
    } else {
      w.key("type").value(std::string_view("additive"));
      w.key("item_values").number_array(val.item_values);
    }
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

std::string covering_report_json(const CoveringSolution &solution) {
  JsonWriter w;
  w.begin_object();
  w.key("objective").value(solution.objective);
  w.key("min_load").value(solution.min_load);
  w.key("threshold").value(solution.threshold);
  w.key("scale").value(solution.scale);
  w.key("iterations").value(solution.iterations);
  w.key("oracle_calls").value(solution.oracle_calls);
  w.key("x_hat");
  write_sparse_columns(w, solution.x_hat);
  w.key("final_loads").number_array(solution.final_loads);
  w.end_object();
  return w.str();
}

std::string packing_report_json(const PackingSolution &solution) {
  JsonWriter w;
  w.begin_object();
  w.key("objective").value(solution.objective);
  w.key("upper_bound").value(solution.upper_bound);
  w.key("max_load").value(solution.max_load);
  w.key("threshold").value(solution.threshold);
  w.key("scale").value(solution.scale);
  w.key("iterations").value(solution.iterations);
  w.key("oracle_calls").value(solution.oracle_calls);
  w.key("x_hat");
  write_sparse_columns(w, solution.x_hat);
  w.key("final_loads").number_array(solution.final_loads);
  w.end_object();
  return w.str();
}

std::string auction_packing_report_json(const AuctionPackingResult &result) {
  JsonWriter w;
  w.begin_object();
  w.key("welfare").value(result.welfare);
  w.key("allocation").number_array(result.allocation);
  // Inline the solver record under its own key, preserving field order.
  w.key("solution");
  w.begin_object();
  w.key("objective").value(result.solution.objective);
  w.key("upper_bound").value(result.solution.upper_bound);
  w.key("max_load").value(result.solution.max_load);
  w.key("threshold").value(result.solution.threshold);
  w.key("scale").value(result.solution.scale);
  w.key("iterations").value(result.solution.iterations);
  w.key("oracle_calls").value(result.solution.oracle_calls);
  w.key("x_hat");
  write_sparse_columns(w, result.solution.x_hat);
  w.key("final_loads").number_array(result.solution.final_loads);
  w.end_object();
  w.end_object();
  return w.str();
}

std::string decomposition_report_json(const DecompositionResult &result) {
  JsonWriter w;
  w.begin_object();
  write_decomposition_body(w, result);
  w.end_object();
  return w.str();
}

std::string mechanism_run_report_json(const MechanismParams &params,
                                      const std::vector<char> &active,
                                      const ConvertedBranch &converted,
                                      const RealizedOutcome &realized) {
  JsonWriter w;
  w.begin_object();
  w.key("params");
  write_params(w, params);
  w.key("active").begin_array();
  for (char a : active) w.value(a != 0);
  w.end_array();
  w.key("branch").value(converted.fractional.branch);
  w.key("fractional").begin_object();
  w.key("x").number_array(converted.fractional.x);
  w.key("payments").number_array(converted.fractional.p);
  w.end_object();
  w.key("decomposition").begin_object();
  write_decomposition_body(w, converted.decomposition);
  w.end_object();
  w.key("realized").begin_object();
  w.key("term").value(realized.term);
  w.key("allocation");
  write_integral_point(w, realized.allocation);
  w.key("payments").number_array(realized.payments);
  w.end_object();
  w.end_object();
  return w.str();
}

std::string audit_report_json(const AuditReport &report) {
  JsonWriter w;
  w.begin_object();
  w.key("params");
  write_params(w, report.params);
  w.key("alpha").value(report.alpha);
  w.key("payments_nonneg").value(report.payments_nonneg);
  w.key("expected_welfare").value(report.expected_welfare);
  w.key("welfare_bound").value(report.welfare_bound);
  w.key("opt_fractional").value(report.opt_fractional);
  w.key("opt_integral").value(report.opt_integral);
  w.key("welfare_ok").value(report.welfare_ok);
  w.key("players").begin_array();
  for (const PlayerAudit &pa : report.players) {
    w.begin_object();
    w.key("player").value(pa.player);
    w.key("expected_fractional_utility").value(pa.expected_fractional_utility);
    w.key("min_util_bound").value(pa.min_util_bound);
    w.key("min_util_ok").value(pa.min_util_ok);
    w.key("negative_mass").value(pa.negative_mass);
    w.key("ir_ok").value(pa.ir_ok);
    w.end_object();
  }
  w.end_array();
  w.key("deviations").begin_array();
  for (const DeviationAudit &da : report.deviations) {
    w.begin_object();
    w.key("player").value(da.player);
    w.key("scale").value(da.scale);
    w.key("truthful_utility").value(da.truthful_utility);
    w.key("deviation_utility").value(da.deviation_utility);
    w.key("truthful_ok").value(da.truthful_ok);
    w.end_object();
  }
  w.end_array();
  w.key("monte_carlo_ok").value(report.monte_carlo_ok);
  w.key("all_ok").value(report.all_ok);
  w.end_object();
  return w.str();
}

std::string json_to_csv(const std::string &json_text) {
  json doc = parse_document(json_text);
  json flat = doc.flatten();
  std::string out = "path,value\n";
  for (auto it = flat.begin(); it != flat.end(); ++it) {
    csv_cell(out, it.key());
    out += ',';
    const json &v = it.value();
    if (v.is_number_float()) {
      csv_cell(out, format_double(v.get<double>()));
    } else if (v.is_number_integer()) {
      csv_cell(out, std::to_string(v.get<long long>()));
    } else if (v.is_boolean()) {
      out += v.get<bool>() ? "true" : "false";
    } else if (v.is_string()) {
      csv_cell(out, v.get<std::string>());
    } else {
      csv_cell(out, v.dump());
    }
    out += '\n';
  }
  return out;
}

}  // namespace mwumech
