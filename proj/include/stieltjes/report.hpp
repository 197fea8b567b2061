#pragma once

// Deterministic text emitters. Numbers are always printed as %.11e (twelve
// significant digits, lowercase exponent); keys keep insertion order.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stieltjes::report {

// "%.11e", or "null" for non-finite values.
std::string format_number(double v);

// Streaming JSON writer with two-space indentation.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);

  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view s);
  JsonWriter& value(const char* s) { return value(std::string_view(s)); }
  JsonWriter& null();
  template <class T>
  JsonWriter& value(const std::optional<T>& v) {
    return v ? value(*v) : null();
  }

  template <class T>
  JsonWriter& field(std::string_view k, const T& v) {
    key(k);
    return value(v);
  }

  // The finished document, newline terminated. Throws std::logic_error when
  // containers are still open.
  std::string str() const;

 private:
  void before_value();
  void newline();

  std::string out_;
  struct Level {
    bool is_object;
    bool empty = true;
  };
  std::vector<Level> stack_;
  bool after_key_ = false;
};

std::string json_escape(std::string_view s);

// CSV table with a fixed header; cells are preformatted strings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);  // throws on width mismatch
  std::string str() const;

  static std::string cell(double v) { return format_number(v); }
  static std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : ""; }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "true" : "false"; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace stieltjes::report
