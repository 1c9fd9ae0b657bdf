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

#include "plannego/term.hpp"

#include <algorithm>
#include <cctype>

namespace plannego {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

Term Term::constant(std::string text) {
    return Term{Kind::Constant, std::move(text), {}};
}

Term Term::variable(std::string name) {
    return Term{Kind::Variable, std::move(name), {}};
}

Term Term::set(std::vector<Term> members) {
    std::sort(members.begin(), members.end(), term_less);
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return Term{Kind::Set, {}, std::move(members)};
}

Term Term::compound(std::string functor, std::vector<Term> args) {
    return Term{Kind::Compound, std::move(functor), std::move(args)};
}

bool Term::is_ground() const {
    if (kind == Kind::Variable) {
        return false;
    }
    return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

namespace {

void render(const Term& term, std::string& out) {
    switch (term.kind) {
    case Term::Kind::Constant:
    case Term::Kind::Variable:
        out += term.name;
        return;
    case Term::Kind::Set:
        out += '{';
        for (std::size_t i = 0; i < term.args.size(); ++i) {
            if (i) out += ',';
            render(term.args[i], out);
        }
        out += '}';
        return;
    case Term::Kind::Compound:
        out += term.name;
        out += '(';
        for (std::size_t i = 0; i < term.args.size(); ++i) {
            if (i) out += ',';
            render(term.args[i], out);
        }
        out += ')';
        return;
    }
}

}  // namespace

std::string to_string(const Term& term) {
    std::string out;
    render(term, out);
    return out;
}

bool term_less(const Term& a, const Term& b) {
    return to_string(a) < to_string(b);
}

std::string to_string(const Literal& literal) {
    return literal.negated ? "not " + to_string(literal.atom) : to_string(literal.atom);
}

Literal negate(Literal literal) {
    literal.negated = !literal.negated;
    return literal;
}

const Term& walk(const Term& term, const Substitution& subst) {
    const Term* current = &term;
    while (current->is_variable()) {
        auto it = subst.find(current->name);
        if (it == subst.end()) {
            break;
        }
        current = &it->second;
    }
    return *current;
}

Term substitute(const Term& term, const Substitution& subst) {
    const Term& resolved = walk(term, subst);
    if (resolved.args.empty()) {
        return resolved;
    }
    Term out{resolved.kind, resolved.name, {}};
    out.args.reserve(resolved.args.size());
    for (const auto& arg : resolved.args) {
        out.args.push_back(substitute(arg, subst));
    }
    if (out.kind == Term::Kind::Set) {
        return Term::set(std::move(out.args));
    }
    return out;
}

Literal substitute(const Literal& literal, const Substitution& subst) {
    return Literal{substitute(literal.atom, subst), literal.negated};
}

namespace {

bool occurs(const std::string& var, const Term& term, const Substitution& subst) {
    const Term& t = walk(term, subst);
    if (t.is_variable()) {
        return t.name == var;
    }
    return std::any_of(t.args.begin(), t.args.end(),
                       [&](const Term& a) { return occurs(var, a, subst); });
}

}  // namespace

bool unify(const Term& a, const Term& b, Substitution& subst) {
    const Term& x = walk(a, subst);
    const Term& y = walk(b, subst);
    if (x.is_variable() && y.is_variable() && x.name == y.name) {
        return true;
    }
    if (x.is_variable()) {
        if (occurs(x.name, y, subst)) return false;
        subst[x.name] = y;
        return true;
    }
    if (y.is_variable()) {
        if (occurs(y.name, x, subst)) return false;
        subst[y.name] = x;
        return true;
    }
    if (x.kind != y.kind || x.name != y.name || x.args.size() != y.args.size()) {
        return false;
    }
    for (std::size_t i = 0; i < x.args.size(); ++i) {
        if (!unify(x.args[i], y.args[i], subst)) {
            return false;
        }
    }
    return true;
}

void collect_variables(const Term& term, std::vector<std::string>& out) {
    if (term.is_variable()) {
        if (std::find(out.begin(), out.end(), term.name) == out.end()) {
            out.push_back(term.name);
        }
        return;
    }
    for (const auto& arg : term.args) {
        collect_variables(arg, out);
    }
}

std::set<std::string> variables_of(const Term& term) {
    std::vector<std::string> vars;
    collect_variables(term, vars);
    return {vars.begin(), vars.end()};
}

std::size_t replace_all(Term& term, const Term& from, const Term& to) {
    if (term == from) {
        term = to;
        return 1;
    }
    std::size_t n = 0;
    for (auto& arg : term.args) {
        n += replace_all(arg, from, to);
    }
    if (n > 0 && term.kind == Term::Kind::Set) {
        term = Term::set(std::move(term.args));
    }
    return n;
}

std::size_t count_occurrences(const Term& term, const Term& needle) {
    if (term == needle) {
        return 1;
    }
    std::size_t n = 0;
    for (const auto& arg : term.args) {
        n += count_occurrences(arg, needle);
    }
    return n;
}

Term rename_variables(const Term& term, std::string_view suffix) {
    if (term.is_variable()) {
        return Term::variable(term.name + "#" + std::string(suffix));
    }
    Term out{term.kind, term.name, {}};
    for (const auto& arg : term.args) {
        out.args.push_back(rename_variables(arg, suffix));
    }
    return out;
}

// ---------------------------------------------------------------------------
// TermReader

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' ||
           c == '.' || c == '\'' || c == '+' || c == '#' || c == '/' || c == '*';
}

}  // namespace

TermReader::TermReader(std::string_view text, int line, int column_offset)
    : text_(text), line_(line), column_offset_(column_offset) {}

void TermReader::fail(const std::string& message) const {
    throw ParseError(message, line_, column_offset_ + static_cast<int>(pos_) + 1);
}

void TermReader::skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
    }
}

bool TermReader::at_end() {
    skip_space();
    return pos_ >= text_.size();
}

bool TermReader::consume(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
        pos_ += token.size();
        return true;
    }
    return false;
}

void TermReader::expect(std::string_view token) {
    if (!consume(token)) {
        fail("expected '" + std::string(token) + "'");
    }
}

std::string TermReader::read_word() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_word_char(text_[pos_])) {
        ++pos_;
    }
    if (start == pos_) {
        fail(pos_ < text_.size() ? "unexpected character '" + std::string(1, text_[pos_]) + "'"
                                 : "unexpected end of input");
    }
    return std::string(text_.substr(start, pos_ - start));
}

Term TermReader::read_term() {
    skip_space();
    if (consume("{")) {
        std::vector<Term> members;
        if (!consume("}")) {
            do {
                members.push_back(read_term());
            } while (consume(","));
            expect("}");
        }
        return Term::set(std::move(members));
    }
    std::string word = read_word();
    if (consume("(")) {
        std::vector<Term> args;
        if (!consume(")")) {
            do {
                args.push_back(read_term());
            } while (consume(","));
            expect(")");
        }
        return Term::compound(std::move(word), std::move(args));
    }
    if (word.front() == '_') {
        return Term::variable(std::move(word));
    }
    return Term::constant(std::move(word));
}

Literal TermReader::read_literal() {
    skip_space();
    bool negated = false;
    std::size_t save = pos_;
    if (consume("not")) {
        if (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            negated = true;
        } else {
            pos_ = save;
        }
    }
    Term atom = read_term();
    if (atom.kind == Term::Kind::Set || atom.is_variable()) {
        fail("expected a proposition");
    }
    if (atom.kind == Term::Kind::Constant) {
        atom = Term::compound(atom.name, {});
    }
    return Literal{std::move(atom), negated};
}

std::vector<Literal> TermReader::read_literal_list() {
    std::vector<Literal> out;
    if (at_end()) {
        return out;
    }
    do {
        out.push_back(read_literal());
    } while (consume(","));
    if (!at_end()) {
        fail("trailing characters");
    }
    return out;
}

std::vector<Term> TermReader::read_term_list() {
    std::vector<Term> out;
    if (at_end()) {
        return out;
    }
    do {
        out.push_back(read_term());
    } while (consume(","));
    if (!at_end()) {
        fail("trailing characters");
    }
    return out;
}

Term parse_term(std::string_view text) {
    TermReader reader(text);
    Term t = reader.read_term();
    if (!reader.at_end()) {
        reader.fail("trailing characters");
    }
    return t;
}

Literal parse_literal(std::string_view text) {
    TermReader reader(text);
    Literal l = reader.read_literal();
    if (!reader.at_end()) {
        reader.fail("trailing characters");
    }
    return l;
}

std::optional<int> parse_clock(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon > 2 || text.size() - colon != 3) {
        return std::nullopt;
    }
    int hours = 0;
    int minutes = 0;
    for (std::size_t i = 0; i < colon; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
        hours = hours * 10 + (text[i] - '0');
    }
    for (std::size_t i = colon + 1; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
        minutes = minutes * 10 + (text[i] - '0');
    }
    if (hours > 23 || minutes > 59) {
        return std::nullopt;
    }
    return hours * 60 + minutes;
}

std::optional<TimeSpan> parse_time_span(std::string_view text) {
    auto dash = text.find('-');
    if (dash == std::string_view::npos) {
        auto t = parse_clock(text);
        if (!t) return std::nullopt;
        return TimeSpan{*t, *t};
    }
    auto start = parse_clock(text.substr(0, dash));
    auto end = parse_clock(text.substr(dash + 1));
    if (!start || !end || *end < *start) {
        return std::nullopt;
    }
    return TimeSpan{*start, *end};
}

}  // namespace plannego
