/*
   Copyright 2026 gmsim authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Minimal TOML reader covering the subset used by experiment configs:
// [table] / [table.sub] headers, key = value with strings, integers,
// floats, booleans, and flat arrays, plus # comments. Keys are exposed
// dotted ("grid.betas"). Not a general TOML implementation.

#ifndef GMSIM_TOML_HPP
#define GMSIM_TOML_HPP

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace gmsim::toml {

class Value {
  public:
    using Array = std::vector<Value>;

    Value() : v_(std::int64_t{0}) {}
    explicit Value(std::string s) : v_(std::move(s)) {}
    explicit Value(std::int64_t i) : v_(i) {}
    explicit Value(double d) : v_(d) {}
    explicit Value(bool b) : v_(b) {}
    explicit Value(Array a) : v_(std::move(a)) {}

    bool is_string() const { return std::holds_alternative<std::string>(v_); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
    bool is_float() const { return std::holds_alternative<double>(v_); }
    bool is_bool() const { return std::holds_alternative<bool>(v_); }
    bool is_array() const { return std::holds_alternative<Array>(v_); }

    const std::string& as_string() const;
    std::int64_t as_int() const;
    double as_double() const;  // ints promote
    bool as_bool() const;
    const Array& as_array() const;
    std::vector<double> as_double_array() const;
    std::vector<std::string> as_string_array() const;

  private:
    std::variant<std::string, std::int64_t, double, bool, Array> v_;
};

class Document {
  public:
    static Document parse_string(const std::string& text, const std::string& origin = "<string>");
    static Document parse_file(const std::string& path);

    bool contains(const std::string& dotted_key) const;
    const Value& at(const std::string& dotted_key) const;  // throws ValidationError
    const std::map<std::string, Value>& entries() const { return entries_; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

  private:
    std::map<std::string, Value> entries_;
    std::string origin_;
};

}  // namespace gmsim::toml

#endif
