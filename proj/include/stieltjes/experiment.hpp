#pragma once

// Experiment configuration and the four commands behind the command-line
// tool. Commands never print; they return a report that to_json / to_csv
// render deterministically.
//
// Config document (JSON, unknown keys rejected at every level):
//
//   {
//     "f": "exp(-t^2)", "u": "t", "interval": [0, 0.125],
//     "rule": {"kind": "phi-family", "alpha": 0, "x": "1/32"},
//     "panels": 4, "theta": 0.25,
//     "bounds": [{"theorem": "thm3", "p": 2, "n": 2}],
//     "certificates": {"f": {"lipschitz": 0.25, "total_variation": 0.0155,
//                            "deriv_norms": [{"n": 2, "p": 2, "value": 0.696}]},
//                      "u": {"lipschitz": 1, "holder": {"constant": 1, "exponent": 1}}},
//     "tol": 1e-10, "breakpoints": [], "output": "json", "safety": 1.05,
//     "sweep": {"alpha": [0, "1/3", 0.5, 1], "x": ["1/16"], "panels": [1, 2, 4]}
//   }
//
// Numeric fields also accept strings holding a constant expression ("1/32").

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stieltjes/bounds.hpp"
#include "stieltjes/funcspace.hpp"
#include "stieltjes/quadrature.hpp"

namespace stieltjes::experiment {

enum class OutputFormat { Json, Csv };

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitOracle = 2, kExitPaper = 3 };

struct BoundRequest {
  TheoremId theorem = TheoremId::Thm1;
  double p = 2.0;
  int n = 1;
  std::optional<double> r;       // thm1 Holder exponent of u
  std::optional<double> w_norm;  // lemmas: ||w||_p, defaults to the kernel norm

  // "thm3:p=2:n=2"; used as the table column id.
  std::string label() const;
};

struct Sweep {
  std::vector<double> alpha;
  std::vector<double> x;
  std::vector<int> panels;
};

struct ExperimentConfig {
  std::string f;
  std::string u;
  double a = 0.0;
  double b = 1.0;
  RuleSpec rule;
  std::optional<int> panels;
  std::optional<double> theta;
  std::vector<BoundRequest> bounds;
  RegularityCertificate cert_f;
  RegularityCertificate cert_u;
  double tol = kDefaultOracleTol;
  std::vector<double> breakpoints;
  OutputFormat output = OutputFormat::Json;
  double safety = kDefaultSafetyFactor;
  std::optional<Sweep> sweep;

  Interval interval() const { return Interval(a, b); }
};

// Throws ConfigError (with the offending line where known).
ExperimentConfig parse_config(std::string_view json_text);

// Every warning names a condition; subject says what it applies to.
struct Warning {
  std::string code;
  std::string subject;
};

struct CertificateEntry {
  std::string name;  // "f.lipschitz", "u.deriv_norm[n=2,p=2]", ...
  CertValue value;
};

struct BoundEntry {
  BoundRequest request;
  std::optional<BoundReport> report;
  std::optional<std::string> error;
};

struct CompareRow {
  double alpha = 0.0;
  double x = 0.0;
  int panels = 1;
  std::optional<double> value;
  std::optional<double> abs_error;
  std::vector<std::optional<double>> bounds;  // one per request, empty when not applicable
  std::optional<std::string> error;
};

struct CompositeResult {
  int panels = 1;
  double theta = 0.0;
  double value = 0.0;
  double actual_error = 0.0;
};

enum class ExpectationStatus { Pass, Fail, NotReproducible };
std::string_view to_string(ExpectationStatus s);

// abs: |value - expected| <= tolerance; rel: relative to |expected|;
// ge: value >= expected - tolerance.
enum class Comparison { Abs, Rel, Ge };
std::string_view to_string(Comparison c);

struct Expectation {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::Abs;
  ExpectationStatus status = ExpectationStatus::Pass;
  std::string note;
};

struct ExperimentReport {
  std::string command;
  std::string f, u;
  double a = 0.0, b = 0.0;
  double tol = kDefaultOracleTol;
  double safety = kDefaultSafetyFactor;
  std::optional<QuadratureResult> rule;
  std::optional<CompositeResult> composite;
  std::vector<CertificateEntry> certificates;
  std::vector<BoundEntry> bounds;
  std::vector<std::string> columns;  // compare table bound columns
  std::vector<CompareRow> rows;
  std::optional<double> oracle_value;
  std::vector<Expectation> expectations;
  std::vector<Warning> warnings;
  int exit_code = kExitOk;

  void raise_exit(int code);  // keeps the most severe code
};

ExperimentReport cmd_integrate(const ExperimentConfig& config);
ExperimentReport cmd_bound(const ExperimentConfig& config);
ExperimentReport cmd_compare(const ExperimentConfig& config);
ExperimentReport cmd_paper_example();

std::string to_json(const ExperimentReport& report);
std::string to_csv(const ExperimentReport& report);

}  // namespace stieltjes::experiment
