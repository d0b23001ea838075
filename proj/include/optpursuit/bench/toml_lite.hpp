#pragma once

// Reader for the TOML subset used by experiment configs: [table] headers,
// bare or dotted keys, strings, integers, floats (inf/nan), booleans, and
// arrays of those (arrays may span lines). Inline tables, dates and
// multi-line strings are rejected.

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace optpursuit::bench::toml {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct Value {
  enum class Type { Bool, Int, Float, String, Array };
  Type type = Type::Int;
  bool b = false;
  std::int64_t i = 0;
  double d = 0.0;
  std::string s;
  std::vector<Value> array;
  int line = 0;

  bool is_number() const noexcept { return type == Type::Int || type == Type::Float; }
  double as_double() const { return type == Type::Int ? static_cast<double>(i) : d; }
  std::string type_name() const;
};

// Keys are fully qualified: "grid.n", "solver.max_iter".
using Table = std::map<std::string, Value>;

Table parse(const std::string& text);
Table parse_file(const std::filesystem::path& path);

}  // namespace optpursuit::bench::toml
