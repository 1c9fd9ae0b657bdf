/*
 * Copyright (c) 2026 The plannego Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "plannego/templates.hpp"

#include <fstream>
#include <sstream>

namespace plannego {

namespace {

std::string_view trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string describe(const Term& t) {
    if (t.kind != Term::Kind::Set) return to_string(t);
    std::string out;
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i > 0) out += i + 1 == t.args.size() ? " and " : ", ";
        out += to_string(t.args[i]);
    }
    return out;
}

/// Resolves `1` or `1.2` against the atom; nullptr when out of range.
const Term* lookup(const Term& atom, std::string_view path) {
    const Term* current = &atom;
    while (!path.empty()) {
        auto dot = path.find('.');
        std::string_view part = path.substr(0, dot);
        std::size_t index = 0;
        for (char c : part) {
            if (c < '0' || c > '9') return nullptr;
            index = index * 10 + static_cast<std::size_t>(c - '0');
        }
        if (index == 0 || index > current->args.size()) return nullptr;
        current = &current->args[index - 1];
        path = dot == std::string_view::npos ? std::string_view{} : path.substr(dot + 1);
    }
    return current;
}

}  // namespace

Templates Templates::parse(std::string_view text) {
    Templates t;
    int number = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++number;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("template line needs 'key = text'", number, 1);
        t.entries_[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
    }
    return t;
}

Templates Templates::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open template file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::string Templates::render(const Literal& literal) const {
    std::string key = (literal.negated ? "not " : "") + literal.atom.name;
    auto it = entries_.find(key);
    if (it == entries_.end()) return to_string(literal);
    const std::string& pattern = it->second;
    std::string out;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i] == '{') {
            auto close = pattern.find('}', i);
            if (close != std::string::npos) {
                if (const Term* t = lookup(literal.atom, std::string_view(pattern).substr(i + 1, close - i - 1))) {
                    out += describe(*t);
                    i = close;
                    continue;
                }
            }
        }
        out += pattern[i];
    }
    return out;
}

}  // namespace plannego
