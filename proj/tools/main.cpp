// Command-line front end: parses flags, loads the config, runs one command
// and writes the rendered report.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "stieltjes/errors.hpp"
#include "stieltjes/experiment.hpp"

namespace ex = stieltjes::experiment;

namespace {

struct Options {
  std::string config;
  bool json = false;
  bool csv = false;
  std::optional<double> tol;
  std::optional<double> safety;
  std::string out;
};

// A value starting with '{' is the JSON document itself; anything else is a
// path.
std::string read_config(const std::string& source) {
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && source[first] == '{') return source;
  std::ifstream in(source, std::ios::binary);
  if (!in) throw stieltjes::ConfigError("cannot open config file '" + source + "'", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ex::ExperimentConfig load_config(const Options& o) {
  if (o.config.empty()) throw stieltjes::ConfigError("--config is required for this command", 0);
  ex::ExperimentConfig c = ex::parse_config(read_config(o.config));
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw stieltjes::ConfigError("--tol must be positive", 0);
    c.tol = *o.tol;
  }
  if (o.safety) {
    if (!(*o.safety >= 1.0)) throw stieltjes::ConfigError("--safety must be >= 1", 0);
    c.safety = *o.safety;
  }
  return c;
}

void add_common(CLI::App* cmd, Options& o, bool needs_config) {
  auto* cfg = cmd->add_option("--config", o.config, "config file path or inline JSON document");
  if (needs_config) cfg->required();
  auto* j = cmd->add_flag("--json", o.json, "JSON output (default unless the config says csv)");
  auto* c = cmd->add_flag("--csv", o.csv, "CSV output");
  j->excludes(c);
  cmd->add_option("--tol", o.tol, "oracle tolerance, overrides the config");
  cmd->add_option("--safety", o.safety, "safety factor for estimated certificates");
  cmd->add_option("--out", o.out, "write the report here instead of stdout");
}

int emit(const ex::ExperimentReport& report, ex::OutputFormat format, const std::string& out) {
  const std::string text =
      format == ex::OutputFormat::Csv ? ex::to_csv(report) : ex::to_json(report);
  if (out.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write '" << out << "'\n";
      return ex::kExitConfig;
    }
    f << text;
  }
  for (const ex::Warning& w : report.warnings) {
    std::cerr << "warning: " << w.code << " (" << w.subject << ")\n";
  }
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemann-Stieltjes quadrature rules and a-priori error bounds"};
  app.require_subcommand(1);
  Options o;
  CLI::App* integrate = app.add_subcommand("integrate", "apply a rule and compare with the oracle");
  CLI::App* bound = app.add_subcommand("bound", "evaluate error bounds and check them");
  CLI::App* compare = app.add_subcommand("compare", "sweep alpha, x and panels");
  CLI::App* paper = app.add_subcommand("paper-example", "reproduce the worked Gaussian example");
  add_common(integrate, o, true);
  add_common(bound, o, true);
  add_common(compare, o, true);
  add_common(paper, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ex::kExitConfig;
  }

  try {
    ex::ExperimentReport report;
    ex::OutputFormat format = ex::OutputFormat::Json;
    if (paper->parsed()) {
      report = ex::cmd_paper_example();
    } else {
      const ex::ExperimentConfig c = load_config(o);
      format = c.output;
      if (integrate->parsed()) {
        report = ex::cmd_integrate(c);
      } else if (bound->parsed()) {
        report = ex::cmd_bound(c);
      } else {
        report = ex::cmd_compare(c);
      }
    }
    if (o.csv) format = ex::OutputFormat::Csv;
    if (o.json) format = ex::OutputFormat::Json;
    return emit(report, format, o.out);
  } catch (const stieltjes::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ex::kExitConfig;
  } catch (const stieltjes::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ex::kExitConfig;
  } catch (const stieltjes::PreconditionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ex::kExitConfig;
  } catch (const stieltjes::NotDifferentiableError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ex::kExitConfig;
  } catch (const stieltjes::ConvergenceError& e) {
    std::cerr << "oracle error: " << e.what() << "\n";
    return ex::kExitOracle;
  } catch (const stieltjes::DomainError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return ex::kExitConfig;
  }
}
