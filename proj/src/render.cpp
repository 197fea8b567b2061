#include "stieltjes/experiment.hpp"
#include "stieltjes/report.hpp"

namespace stieltjes::experiment {
namespace {

using report::CsvTable;
using report::JsonWriter;

void write_rule(JsonWriter& w, const QuadratureResult& q) {
  w.key("rule").begin_object();
  w.field("kind", to_string(q.rule.kind));
  w.field("alpha", q.rule.alpha);
  w.field("x", q.rule.x);
  w.field("value", q.value);
  w.field("oracle", q.oracle_value);
  w.field("actual_error", q.actual_error);
  w.field("oracle_converged", q.oracle_converged);
  w.field("oracle_tolerance", q.oracle_tolerance);
  w.end_object();
}

void write_bound(JsonWriter& w, const BoundEntry& e) {
  w.begin_object();
  w.field("label", e.request.label());
  w.field("theorem", to_string(e.request.theorem));
  if (e.report) {
    const BoundReport& r = *e.report;
    w.key("parameters").begin_object();
    for (const auto& [k, v] : r.inputs.parameters) w.field(k, v);
    w.end_object();
    w.key("certificates").begin_array();
    for (const CertUse& c : r.inputs.certificates) {
      w.begin_object();
      w.field("name", c.name);
      w.field("supplied", c.supplied);
      w.field("used", c.used);
      w.field("provenance", to_string(c.provenance));
      w.end_object();
    }
    w.end_array();
    w.field("safety_factor", r.inputs.safety_factor);
    w.field("safety_applied", r.inputs.safety_applied);
    w.field("bound", r.bound_value);
    w.field("actual_error", r.actual_error);
    w.field("valid", r.valid_vs_oracle);
    w.field("oracle_converged", r.oracle_converged);
    w.key("warnings").begin_array();
    for (const std::string& s : r.warnings) w.value(s);
    w.end_array();
  }
  w.key("error");
  if (e.error) {
    w.value(*e.error);
  } else {
    w.null();
  }
  w.end_object();
}

}  // namespace

std::string to_json(const ExperimentReport& r) {
  JsonWriter w;
  w.begin_object();
  w.field("command", r.command);
  w.key("problem").begin_object();
  w.field("f", r.f);
  w.field("u", r.u);
  w.key("interval").begin_array().value(r.a).value(r.b).end_array();
  w.field("tol", r.tol);
  w.field("safety", r.safety);
  w.end_object();
  if (r.rule) write_rule(w, *r.rule);
  if (r.composite) {
    w.key("composite").begin_object();
    w.field("panels", r.composite->panels);
    w.field("theta", r.composite->theta);
    w.field("value", r.composite->value);
    w.field("actual_error", r.composite->actual_error);
    w.end_object();
  }
  w.field("oracle", r.oracle_value);

  w.key("certificates").begin_array();
  for (const CertificateEntry& c : r.certificates) {
    w.begin_object();
    w.field("name", c.name);
    w.field("value", c.value.value);
    w.field("provenance", to_string(c.value.provenance));
    w.field("detail", c.value.detail);
    w.end_object();
  }
  w.end_array();

  w.key("bounds").begin_array();
  for (const BoundEntry& e : r.bounds) write_bound(w, e);
  w.end_array();

  if (r.command == "compare") {
    w.key("table").begin_object();
    w.key("columns").begin_array();
    for (const char* c : {"alpha", "x", "panels", "value", "abs_error"}) w.value(c);
    for (const std::string& c : r.columns) w.value(c);
    w.end_array();
    w.key("rows").begin_array();
    for (const CompareRow& row : r.rows) {
      w.begin_array();
      w.value(row.alpha).value(row.x).value(row.panels).value(row.value).value(row.abs_error);
      for (const auto& b : row.bounds) w.value(b);
      w.end_array();
    }
    w.end_array();
    w.end_object();
  }

  if (!r.expectations.empty()) {
    w.key("expectations").begin_array();
    for (const Expectation& e : r.expectations) {
      w.begin_object();
      w.field("name", e.name);
      w.field("value", e.value);
      w.field("expected", e.expected);
      w.field("tolerance", e.tolerance);
      w.field("comparison", to_string(e.comparison));
      w.field("status", to_string(e.status));
      w.field("note", e.note);
      w.end_object();
    }
    w.end_array();
  }

  w.key("warnings").begin_array();
  for (const Warning& x : r.warnings) {
    w.begin_object();
    w.field("code", x.code);
    w.field("subject", x.subject);
    w.end_object();
  }
  w.end_array();
  w.field("exit_code", r.exit_code);
  w.end_object();
  return w.str();
}

// One table per command. Values are %.11e; absent numbers are empty cells.
std::string to_csv(const ExperimentReport& r) {
  if (r.command == "compare") {
    std::vector<std::string> header{"alpha", "x", "panels", "value", "oracle", "abs_error"};
    header.insert(header.end(), r.columns.begin(), r.columns.end());
    CsvTable t(header);
    for (const CompareRow& row : r.rows) {
      std::vector<std::string> cells{CsvTable::cell(row.alpha), CsvTable::cell(row.x),
                                     CsvTable::cell(row.panels), CsvTable::cell(row.value),
                                     CsvTable::cell(r.oracle_value), CsvTable::cell(row.abs_error)};
      for (const auto& b : row.bounds) cells.push_back(CsvTable::cell(b));
      t.add_row(std::move(cells));
    }
    return t.str();
  }
  if (r.command == "bound") {
    CsvTable t({"label", "theorem", "alpha", "x", "bound", "actual_error", "valid", "failed"});
    for (const BoundEntry& e : r.bounds) {
      std::optional<double> alpha, x, bound, err;
      std::string valid;
      if (e.report) {
        if (auto rp = rule_parameters(*e.report)) {
          alpha = rp->alpha;
          x = rp->x;
        }
        bound = e.report->bound_value;
        err = e.report->actual_error;
        if (e.report->valid_vs_oracle) valid = CsvTable::cell(*e.report->valid_vs_oracle);
      }
      t.add_row({e.request.label(), std::string(to_string(e.request.theorem)), CsvTable::cell(alpha),
                 CsvTable::cell(x), CsvTable::cell(bound), CsvTable::cell(err), valid,
                 CsvTable::cell(e.error.has_value())});
    }
    return t.str();
  }
  if (r.command == "paper-example") {
    CsvTable t({"name", "value", "expected", "tolerance", "comparison", "status"});
    for (const Expectation& e : r.expectations) {
      t.add_row({e.name, CsvTable::cell(e.value), CsvTable::cell(e.expected),
                 CsvTable::cell(e.tolerance), std::string(to_string(e.comparison)),
                 std::string(to_string(e.status))});
    }
    return t.str();
  }
  CsvTable t({"quantity", "value"});
  if (r.rule) {
    t.add_row({"rule_value", CsvTable::cell(r.rule->value)});
    t.add_row({"oracle", CsvTable::cell(r.rule->oracle_value)});
    t.add_row({"actual_error", CsvTable::cell(r.rule->actual_error)});
  }
  if (r.composite) {
    t.add_row({"composite_panels", CsvTable::cell(r.composite->panels)});
    t.add_row({"composite_value", CsvTable::cell(r.composite->value)});
    t.add_row({"composite_error", CsvTable::cell(r.composite->actual_error)});
  }
  return t.str();
}

}  // namespace stieltjes::experiment
