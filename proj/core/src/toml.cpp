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

#include "gmsim/toml.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gmsim/errors.hpp"

namespace gmsim::toml {

namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
    std::ostringstream os;
    os << origin << ':' << line << ": " << what;
    throw ValidationError(os.str());
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// strip a trailing comment that is not inside a string literal
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
            return false;
    return true;
}

Value parse_scalar(const std::string& raw, const std::string& origin, int line) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
        std::string out;
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            if (raw[i] == '\\' && i + 2 < raw.size()) {
                ++i;
                switch (raw[i]) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default: fail(origin, line, "unsupported escape in string");
                }
            } else {
                out += raw[i];
            }
        }
        return Value(out);
    }
    if (raw == "true") return Value(true);
    if (raw == "false") return Value(false);
    // integer first, then float
    {
        std::int64_t iv = 0;
        auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), iv);
        if (ec == std::errc() && p == raw.data() + raw.size()) return Value(iv);
    }
    try {
        std::size_t used = 0;
        const double dv = std::stod(raw, &used);
        if (used == raw.size()) return Value(dv);
    } catch (const std::exception&) {
    }
    fail(origin, line, "cannot parse value: " + raw);
}

Value parse_value(const std::string& raw, const std::string& origin, int line) {
    if (!raw.empty() && raw.front() == '[') {
        if (raw.back() != ']') fail(origin, line, "unterminated array");
        Value::Array items;
        std::string body = raw.substr(1, raw.size() - 2);
        std::string cur;
        bool in_str = false;
        for (char c : body) {
            if (c == '"') in_str = !in_str;
            if (c == ',' && !in_str) {
                if (!trim(cur).empty()) items.push_back(parse_scalar(trim(cur), origin, line));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!trim(cur).empty()) items.push_back(parse_scalar(trim(cur), origin, line));
        return Value(std::move(items));
    }
    return parse_scalar(raw, origin, line);
}

}  // namespace

const std::string& Value::as_string() const {
    if (!is_string()) throw ValidationError("toml: value is not a string");
    return std::get<std::string>(v_);
}

std::int64_t Value::as_int() const {
    if (!is_int()) throw ValidationError("toml: value is not an integer");
    return std::get<std::int64_t>(v_);
}

double Value::as_double() const {
    if (is_int()) return static_cast<double>(std::get<std::int64_t>(v_));
    if (!is_float()) throw ValidationError("toml: value is not a number");
    return std::get<double>(v_);
}

bool Value::as_bool() const {
    if (!is_bool()) throw ValidationError("toml: value is not a boolean");
    return std::get<bool>(v_);
}

const Value::Array& Value::as_array() const {
    if (!is_array()) throw ValidationError("toml: value is not an array");
    return std::get<Array>(v_);
}

std::vector<double> Value::as_double_array() const {
    std::vector<double> out;
    for (const Value& v : as_array()) out.push_back(v.as_double());
    return out;
}

std::vector<std::string> Value::as_string_array() const {
    std::vector<std::string> out;
    for (const Value& v : as_array()) out.push_back(v.as_string());
    return out;
}

Document Document::parse_string(const std::string& text, const std::string& origin) {
    Document doc;
    doc.origin_ = origin;
    std::istringstream in(text);
    std::string line, table;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, lineno, "unterminated table header");
            table = trim(line.substr(1, line.size() - 2));
            if (!valid_key(table)) fail(origin, lineno, "bad table name: " + table);
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (!valid_key(key)) fail(origin, lineno, "bad key: " + key);
        const std::string dotted = table.empty() ? key : table + "." + key;
        if (doc.entries_.count(dotted)) fail(origin, lineno, "duplicate key: " + dotted);
        doc.entries_.emplace(dotted, parse_value(trim(line.substr(eq + 1)), origin, lineno));
    }
    return doc;
}

Document Document::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("toml: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

bool Document::contains(const std::string& key) const { return entries_.count(key) > 0; }

const Value& Document::at(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ValidationError(origin_ + ": missing key: " + key);
    return it->second;
}

std::string Document::get_string(const std::string& key, const std::string& fallback) const {
    return contains(key) ? at(key).as_string() : fallback;
}

std::int64_t Document::get_int(const std::string& key, std::int64_t fallback) const {
    return contains(key) ? at(key).as_int() : fallback;
}

double Document::get_double(const std::string& key, double fallback) const {
    return contains(key) ? at(key).as_double() : fallback;
}

bool Document::get_bool(const std::string& key, bool fallback) const {
    return contains(key) ? at(key).as_bool() : fallback;
}

}  // namespace gmsim::toml
