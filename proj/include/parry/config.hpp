// Copyright 2026 The Parry Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// A small TOML reader covering the subset this project's config files use:
// [section] and [a.b] headers, key = value pairs with string / integer /
// float / boolean / flat-array values, and # comments. Arrays may span
// lines. Inline tables, dates, and multi-line strings are not supported.

#ifndef PARRY_CONFIG_HPP_
#define PARRY_CONFIG_HPP_

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "parry/errors.hpp"
#include "parry/text.hpp"

namespace parry {

class TomlValue {
 public:
  using Array = std::vector<TomlValue>;
  using Storage = std::variant<std::string, int64_t, double, bool, Array>;

  TomlValue() : v_(std::string()) {}
  explicit TomlValue(Storage v) : v_(std::move(v)) {}

  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_int() const { return std::holds_alternative<int64_t>(v_); }
  bool is_double() const {
    return std::holds_alternative<double>(v_) || is_int();
  }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_array() const { return std::holds_alternative<Array>(v_); }

  const std::string& as_string() const {
    if (!is_string()) throw ConfigError("TOML value is not a string");
    return std::get<std::string>(v_);
  }
  int64_t as_int() const {
    if (!is_int()) throw ConfigError("TOML value is not an integer");
    return std::get<int64_t>(v_);
  }
  double as_double() const {
    if (std::holds_alternative<double>(v_)) return std::get<double>(v_);
    if (is_int()) return static_cast<double>(std::get<int64_t>(v_));
    throw ConfigError("TOML value is not a number");
  }
  bool as_bool() const {
    if (!is_bool()) throw ConfigError("TOML value is not a boolean");
    return std::get<bool>(v_);
  }
  const Array& as_array() const {
    if (!is_array()) throw ConfigError("TOML value is not an array");
    return std::get<Array>(v_);
  }

 private:
  Storage v_;
};

// Flat view of a TOML document: dotted-path key -> scalar or array.
class TomlTable {
 public:
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  const TomlValue& at(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
  }

  std::string get_string(const std::string& key,
                         const std::string& fallback) const {
    return has(key) ? at(key).as_string() : fallback;
  }
  std::string require_string(const std::string& key) const {
    return at(key).as_string();
  }
  int64_t get_int(const std::string& key, int64_t fallback) const {
    return has(key) ? at(key).as_int() : fallback;
  }
  double get_double(const std::string& key, double fallback) const {
    return has(key) ? at(key).as_double() : fallback;
  }
  bool get_bool(const std::string& key, bool fallback) const {
    return has(key) ? at(key).as_bool() : fallback;
  }
  std::vector<std::string> get_string_array(const std::string& key) const {
    std::vector<std::string> out;
    if (!has(key)) return out;
    for (const auto& v : at(key).as_array()) out.push_back(v.as_string());
    return out;
  }

  void set(const std::string& key, TomlValue value) {
    values_[key] = std::move(value);
  }

  const std::map<std::string, TomlValue>& values() const { return values_; }

 private:
  std::map<std::string, TomlValue> values_;
};

namespace toml_detail {

inline std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (c == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

inline std::string parse_quoted(std::string_view s, size_t& i) {
  // s[i] == '"'
  std::string out;
  ++i;
  while (i < s.size()) {
    char c = s[i];
    if (c == '\\' && i + 1 < s.size()) {
      char n = s[i + 1];
      switch (n) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        default: out.push_back(n); break;
      }
      i += 2;
      continue;
    }
    if (c == '"') {
      ++i;
      return out;
    }
    out.push_back(c);
    ++i;
  }
  throw ConfigError("unterminated string in TOML");
}

inline TomlValue parse_scalar(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw ConfigError("empty TOML value");
  if (s[0] == '"') {
    size_t i = 0;
    std::string out = parse_quoted(s, i);
    if (trim(s.substr(i)) != "") throw ConfigError("junk after string: " + s);
    return TomlValue(TomlValue::Storage(out));
  }
  if (s == "true") return TomlValue(TomlValue::Storage(true));
  if (s == "false") return TomlValue(TomlValue::Storage(false));
  const bool floaty = s.find('.') != std::string::npos ||
                      s.find('e') != std::string::npos ||
                      s.find('E') != std::string::npos;
  try {
    size_t used = 0;
    if (floaty) {
      double d = std::stod(s, &used);
      if (used == s.size()) return TomlValue(TomlValue::Storage(d));
    } else {
      int64_t n = std::stoll(s, &used, 10);
      if (used == s.size()) return TomlValue(TomlValue::Storage(n));
    }
  } catch (const std::exception&) {
    // fall through
  }
  throw ConfigError("cannot parse TOML value: " + s);
}

inline TomlValue parse_array(const std::string& body) {
  TomlValue::Array items;
  std::string cur;
  bool in_string = false;
  for (size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '"' && (i == 0 || body[i - 1] != '\\')) in_string = !in_string;
    if (c == ',' && !in_string) {
      if (!trim(cur).empty()) items.push_back(parse_scalar(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty()) items.push_back(parse_scalar(cur));
  return TomlValue(TomlValue::Storage(items));
}

}  // namespace toml_detail

inline TomlTable parse_toml(std::istream& in, const std::string& origin) {
  TomlTable table;
  std::string prefix;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = trim(toml_detail::strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) {
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": bad section header");
      }
      prefix = trim(s.substr(1, s.size() - 2));
      if (prefix.empty()) {
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": empty section name");
      }
      continue;
    }
    const size_t eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    }
    if (!prefix.empty()) key = prefix + "." + key;

    if (!value.empty() && value.front() == '[') {
      // Arrays may continue over following lines until the closing bracket.
      std::string body = value.substr(1);
      while (body.find(']') == std::string::npos) {
        std::string more;
        if (!std::getline(in, more)) {
          throw ConfigError(origin + ": unterminated array for key " + key);
        }
        ++line_no;
        body += trim(toml_detail::strip_comment(more));
      }
      const size_t close = body.rfind(']');
      table.set(key, toml_detail::parse_array(body.substr(0, close)));
    } else {
      table.set(key, toml_detail::parse_scalar(value));
    }
  }
  return table;
}

inline TomlTable parse_toml_string(const std::string& text) {
  std::istringstream in(text);
  return parse_toml(in, "<string>");
}

inline TomlTable load_toml(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  return parse_toml(in, path);
}

}  // namespace parry

#endif  // PARRY_CONFIG_HPP_
