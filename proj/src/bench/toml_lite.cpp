#include "optpursuit/bench/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace optpursuit::bench::toml {

std::string Value::type_name() const {
  switch (type) {
    case Type::Bool: return "boolean";
    case Type::Int: return "integer";
    case Type::Float: return "float";
    case Type::String: return "string";
    case Type::Array: return "array";
  }
  return "?";
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : t_(text) {}

  Table run() {
    Table out;
    std::string prefix;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        ++pos_;
        skip_ws();
        prefix = key();
        skip_ws();
        expect(']');
        end_of_line();
        continue;
      }
      const int at = line_;
      const std::string k = prefix.empty() ? key() : prefix + "." + key();
      skip_ws();
      expect('=');
      skip_ws();
      Value v = value();
      v.line = at;
      if (!out.emplace(k, std::move(v)).second) throw ParseError(at, "duplicate key '" + k + "'");
      end_of_line();
    }
    return out;
  }

 private:
  const std::string& t_;
  std::size_t pos_ = 0;
  int line_ = 1;

  bool eof() const { return pos_ >= t_.size(); }
  char peek() const { return eof() ? '\0' : t_[pos_]; }

  void expect(char c) {
    if (peek() != c) throw ParseError(line_, std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++pos_;
  }

  void newline() {
    if (peek() == '\r') ++pos_;
    if (peek() == '\n') {
      ++pos_;
      ++line_;
    }
  }

  void skip_blank_lines() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r')
        newline();
      else
        break;
    }
  }

  // whitespace, comments and newlines, for use inside arrays
  void skip_all() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r')
        newline();
      else
        return;
    }
  }

  void end_of_line() {
    skip_ws();
    skip_comment();
    if (eof()) return;
    if (peek() != '\n' && peek() != '\r') throw ParseError(line_, "unexpected trailing characters");
    newline();
  }

  std::string bare_key() {
    const std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) ++pos_;
    if (start == pos_) throw ParseError(line_, "expected a key");
    return t_.substr(start, pos_ - start);
  }

  std::string key() {
    std::string k = peek() == '"' ? basic_string() : bare_key();
    skip_ws();
    while (peek() == '.') {
      ++pos_;
      skip_ws();
      k += "." + (peek() == '"' ? basic_string() : bare_key());
      skip_ws();
    }
    return k;
  }

  std::string basic_string() {
    expect('"');
    std::string s;
    while (true) {
      if (eof() || peek() == '\n') throw ParseError(line_, "unterminated string");
      char c = t_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (eof()) throw ParseError(line_, "unterminated escape");
        char e = t_[pos_++];
        switch (e) {
          case 'n': s += '\n'; break;
          case 't': s += '\t'; break;
          case 'r': s += '\r'; break;
          case '"': s += '"'; break;
          case '\\': s += '\\'; break;
          default: throw ParseError(line_, std::string("unsupported escape \\") + e);
        }
      } else {
        s += c;
      }
    }
    return s;
  }

  std::string literal_string() {
    expect('\'');
    const std::size_t start = pos_;
    while (!eof() && peek() != '\'' && peek() != '\n') ++pos_;
    if (peek() != '\'') throw ParseError(line_, "unterminated literal string");
    std::string s = t_.substr(start, pos_ - start);
    ++pos_;
    return s;
  }

  Value value() {
    Value v;
    const char c = peek();
    if (c == '"') {
      v.type = Value::Type::String;
      v.s = basic_string();
    } else if (c == '\'') {
      v.type = Value::Type::String;
      v.s = literal_string();
    } else if (c == '[') {
      ++pos_;
      v.type = Value::Type::Array;
      skip_all();
      while (peek() != ']') {
        Value item = value();
        item.line = line_;
        v.array.push_back(std::move(item));
        skip_all();
        if (peek() == ',') {
          ++pos_;
          skip_all();
        } else if (peek() != ']') {
          throw ParseError(line_, "expected ',' or ']' in array");
        }
      }
      ++pos_;
    } else if (c == '{') {
      throw ParseError(line_, "inline tables are not supported");
    } else {
      scalar(v);
    }
    return v;
  }

  void scalar(Value& v) {
    const std::size_t start = pos_;
    while (!eof() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' && peek() != ']' &&
           peek() != '#')
      ++pos_;
    std::string tok = t_.substr(start, pos_ - start);
    if (tok.empty()) throw ParseError(line_, "expected a value");
    if (tok == "true" || tok == "false") {
      v.type = Value::Type::Bool;
      v.b = tok == "true";
      return;
    }
    std::string clean;
    for (std::size_t k = 0; k < tok.size(); ++k) {
      if (tok[k] == '_') {
        if (k == 0 || k + 1 == tok.size() || !std::isdigit(static_cast<unsigned char>(tok[k - 1])) ||
            !std::isdigit(static_cast<unsigned char>(tok[k + 1])))
          throw ParseError(line_, "misplaced '_' in '" + tok + "'");
        continue;
      }
      clean += tok[k];
    }
    std::string body = clean;
    double sign = 1.0;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
      sign = body[0] == '-' ? -1.0 : 1.0;
      body.erase(0, 1);
    }
    if (body == "inf" || body == "nan") {
      v.type = Value::Type::Float;
      v.d = body == "inf" ? sign * std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
      return;
    }
    const bool is_float = clean.find_first_of(".eE") != std::string::npos;
    const char* first = clean.data() + (clean[0] == '+' ? 1 : 0);
    const char* last = clean.data() + clean.size();
    if (is_float) {
      v.type = Value::Type::Float;
      auto [ptr, ec] = std::from_chars(first, last, v.d);
      if (ec != std::errc() || ptr != last) throw ParseError(line_, "invalid float '" + tok + "'");
    } else {
      v.type = Value::Type::Int;
      auto [ptr, ec] = std::from_chars(first, last, v.i);
      if (ec != std::errc() || ptr != last) throw ParseError(line_, "invalid value '" + tok + "'");
    }
  }
};

}  // namespace

Table parse(const std::string& text) { return Parser(text).run(); }

Table parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace optpursuit::bench::toml
