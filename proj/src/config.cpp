#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "json.hpp"
#include "stieltjes/errors.hpp"
#include "stieltjes/experiment.hpp"

namespace stieltjes::experiment {
namespace {

using nlohmann::json;

std::size_t line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// nlohmann keeps no source positions, so keys are located by searching the
// text for "key" followed by a colon. Good enough for error messages.
std::size_t line_of_key(std::string_view text, std::string_view key) {
  const std::string needle = "\"" + std::string(key) + "\"";
  for (std::size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + 1)) {
    std::size_t k = pos + needle.size();
    while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
    if (k < text.size() && text[k] == ':') return line_at(text, pos);
  }
  return 0;
}

class Reader {
 public:
  Reader(const json& node, std::string path, std::string_view text)
      : node_(node), path_(std::move(path)), text_(text) {
    if (!node_.is_object()) fail(path_.empty() ? "config must be a JSON object" : path_ + " must be an object");
  }

  [[noreturn]] void fail(const std::string& message, std::string_view key = {}) const {
    throw ConfigError(message, key.empty() ? 0 : line_of_key(text_, key));
  }

  std::string name(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    const std::set<std::string_view> allowed(keys);
    for (const auto& [k, v] : node_.items()) {
      if (!allowed.count(k)) fail("unknown key '" + name(k) + "'", k);
    }
  }

  bool has(std::string_view key) const { return node_.contains(std::string(key)); }
  const json& at(std::string_view key) const { return node_.at(std::string(key)); }

  double number_value(const json& v, std::string_view key) const {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      try {
        const Expr e = parse_expression(v.get<std::string>());
        if (!e.is_closed()) fail(name(key) + ": expression must not depend on t", key);
        return e.eval(0.0);
      } catch (const ParseError& err) {
        fail(name(key) + ": " + err.what(), key);
      } catch (const DomainError& err) {
        fail(name(key) + ": " + err.what(), key);
      }
    }
    fail(name(key) + " must be a number or a constant expression string", key);
  }

  double number(std::string_view key) const {
    if (!has(key)) fail("missing required key '" + name(key) + "'");
    return number_value(at(key), key);
  }

  std::optional<double> opt_number(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return number_value(at(key), key);
  }

  int integer(std::string_view key) const {
    const double v = number(key);
    if (v != std::floor(v) || std::fabs(v) > 1e9) fail(name(key) + " must be an integer", key);
    return static_cast<int>(v);
  }

  std::optional<int> opt_integer(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return integer(key);
  }

  std::string string(std::string_view key) const {
    if (!has(key)) fail("missing required key '" + name(key) + "'");
    if (!at(key).is_string()) fail(name(key) + " must be a string", key);
    return at(key).get<std::string>();
  }

  std::vector<double> number_list(std::string_view key, bool allow_empty) const {
    const json& v = at(key);
    if (!v.is_array()) fail(name(key) + " must be an array", key);
    if (!allow_empty && v.empty()) fail(name(key) + " must not be empty", key);
    std::vector<double> out;
    for (const json& item : v) out.push_back(number_value(item, key));
    return out;
  }

  Reader child(std::string_view key) const {
    if (!at(key).is_object()) fail(name(key) + " must be an object", key);
    return Reader(at(key), name(key), text_);
  }

  const json& node() const { return node_; }
  std::string_view text() const { return text_; }

 private:
  const json& node_;
  std::string path_;
  std::string_view text_;
};

void check_positive(const Reader& r, std::string_view key, double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) r.fail(r.name(key) + " must be finite and >= 0", key);
}

RegularityCertificate read_certificate(const Reader& r) {
  r.allow_only({"lipschitz", "total_variation", "holder", "deriv_norms"});
  RegularityCertificate cert;
  if (auto v = r.opt_number("lipschitz")) {
    check_positive(r, "lipschitz", *v);
    cert.lipschitz = CertValue::exact(*v);
  }
  if (auto v = r.opt_number("total_variation")) {
    check_positive(r, "total_variation", *v);
    cert.total_variation = CertValue::exact(*v);
  }
  if (r.has("holder")) {
    const Reader h = r.child("holder");
    h.allow_only({"constant", "exponent"});
    const double c = h.number("constant"), e = h.number("exponent");
    check_positive(h, "constant", c);
    if (!(e > 0.0 && e <= 1.0)) h.fail(h.name("exponent") + " must lie in (0, 1]", "exponent");
    cert.holder = HolderCert{CertValue::exact(c), e};
  }
  if (r.has("deriv_norms")) {
    const json& list = r.at("deriv_norms");
    if (!list.is_array()) r.fail(r.name("deriv_norms") + " must be an array", "deriv_norms");
    for (const json& item : list) {
      const Reader d(item, r.name("deriv_norms[]"), r.text());
      d.allow_only({"n", "p", "value"});
      const int n = d.integer("n");
      const double p = d.number("p"), v = d.number("value");
      if (n < 1) d.fail(d.name("n") + " must be >= 1", "n");
      if (!(p >= 1.0)) d.fail(d.name("p") + " must be >= 1", "p");
      check_positive(d, "value", v);
      cert.deriv_norms[{n, p}] = CertValue::exact(v);
    }
  }
  return cert;
}

BoundRequest read_bound(const Reader& r) {
  r.allow_only({"theorem", "p", "n", "r", "w_norm"});
  BoundRequest req;
  try {
    req.theorem = parse_theorem_id(r.string("theorem"));
  } catch (const PreconditionError& e) {
    r.fail(e.what(), "theorem");
  }
  if (auto p = r.opt_number("p")) req.p = *p;
  if (!std::isfinite(req.p)) r.fail(r.name("p") + " must be finite", "p");
  if (auto n = r.opt_integer("n")) req.n = *n;
  if (req.n < 1) r.fail(r.name("n") + " must be >= 1", "n");
  req.r = r.opt_number("r");
  if (req.r && !(*req.r > 0.0 && *req.r <= 1.0)) r.fail(r.name("r") + " must lie in (0, 1]", "r");
  req.w_norm = r.opt_number("w_norm");
  if (req.w_norm) check_positive(r, "w_norm", *req.w_norm);
  return req;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what(), line_at(text, e.byte ? e.byte - 1 : 0));
  }
  const Reader r(doc, "", text);
  r.allow_only({"f", "u", "interval", "rule", "panels", "theta", "bounds", "certificates", "tol",
                "breakpoints", "output", "safety", "sweep"});

  ExperimentConfig c;
  c.f = r.string("f");
  c.u = r.string("u");
  for (const auto& [key, src] : {std::pair<const char*, const std::string*>{"f", &c.f}, {"u", &c.u}}) {
    try {
      (void)parse_expression(*src);
    } catch (const ParseError& e) {
      r.fail(std::string(key) + ": " + e.what() + " at position " + std::to_string(e.position()), key);
    }
  }

  if (!r.has("interval")) r.fail("missing required key 'interval'");
  const std::vector<double> iv = r.number_list("interval", false);
  if (iv.size() != 2) r.fail("interval must be [a, b]", "interval");
  if (!(std::isfinite(iv[0]) && std::isfinite(iv[1]) && iv[0] < iv[1])) {
    r.fail("interval must satisfy a < b with finite ends", "interval");
  }
  c.a = iv[0];
  c.b = iv[1];

  if (!r.has("rule")) r.fail("missing required key 'rule'");
  const Reader rule = r.child("rule");
  rule.allow_only({"kind", "alpha", "x"});
  try {
    c.rule.kind = parse_rule_kind(rule.string("kind"));
  } catch (const PreconditionError& e) {
    rule.fail(e.what(), "kind");
  }
  c.rule.alpha = rule.opt_number("alpha").value_or(0.0);
  c.rule.x = rule.opt_number("x").value_or(c.interval().midpoint());
  try {
    c.rule.validate(c.interval());
  } catch (const PreconditionError& e) {
    rule.fail(std::string("rule: ") + e.what(), "rule");
  }

  c.panels = r.opt_integer("panels");
  if (c.panels && *c.panels < 1) r.fail("panels must be >= 1", "panels");
  c.theta = r.opt_number("theta");

  if (r.has("bounds")) {
    const json& list = r.at("bounds");
    if (!list.is_array()) r.fail("bounds must be an array", "bounds");
    for (const json& item : list) c.bounds.push_back(read_bound(Reader(item, "bounds[]", text)));
  }

  if (r.has("certificates")) {
    const Reader certs = r.child("certificates");
    certs.allow_only({"f", "u"});
    if (certs.has("f")) c.cert_f = read_certificate(certs.child("f"));
    if (certs.has("u")) c.cert_u = read_certificate(certs.child("u"));
  }

  if (auto tol = r.opt_number("tol")) {
    if (!(*tol > 0.0) || !std::isfinite(*tol)) r.fail("tol must be positive", "tol");
    c.tol = *tol;
  }
  if (r.has("breakpoints")) {
    c.breakpoints = r.number_list("breakpoints", true);
    for (double bp : c.breakpoints) {
      if (!(bp >= c.a && bp <= c.b)) r.fail("breakpoint outside the interval", "breakpoints");
    }
  }
  if (r.has("output")) {
    const std::string out = r.string("output");
    if (out == "json") {
      c.output = OutputFormat::Json;
    } else if (out == "csv") {
      c.output = OutputFormat::Csv;
    } else {
      r.fail("output must be \"json\" or \"csv\"", "output");
    }
  }
  if (auto s = r.opt_number("safety")) {
    if (!(*s >= 1.0) || !std::isfinite(*s)) r.fail("safety must be finite and >= 1", "safety");
    c.safety = *s;
  }

  if (r.has("sweep")) {
    const Reader sw = r.child("sweep");
    sw.allow_only({"alpha", "x", "panels"});
    Sweep s;
    if (sw.has("alpha")) s.alpha = sw.number_list("alpha", false);
    if (sw.has("x")) s.x = sw.number_list("x", false);
    if (sw.has("panels")) {
      for (double v : sw.number_list("panels", false)) {
        if (v != std::floor(v) || v < 1 || v > 1e6) sw.fail("sweep.panels entries must be integers >= 1", "panels");
        s.panels.push_back(static_cast<int>(v));
      }
    }
    for (double alpha : s.alpha) {
      if (!(alpha >= 0.0 && alpha <= 1.0)) sw.fail("sweep.alpha entries must lie in [0, 1]", "alpha");
    }
    for (double x : s.x) {
      if (!(x >= c.a && x <= c.b)) sw.fail("sweep.x entries must lie in [a, b]", "x");
    }
    c.sweep = std::move(s);
  }
  return c;
}

}  // namespace stieltjes::experiment
