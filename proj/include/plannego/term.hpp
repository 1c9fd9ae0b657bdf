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

#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace plannego {

/// Raised for malformed text input. Carries 1-based line and column.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// A first-order term: constant, variable (leading underscore), set of
/// terms, or compound `functor(arg,...)`. Propositions and actions are
/// compound terms.
struct Term {
    enum class Kind { Constant, Variable, Set, Compound };

    Kind kind = Kind::Constant;
    std::string name;        // constant text, variable name, or functor
    std::vector<Term> args;  // compound arguments or set members (sorted)

    static Term constant(std::string text);
    static Term variable(std::string name);
    static Term set(std::vector<Term> members);
    static Term compound(std::string functor, std::vector<Term> args);

    bool is_variable() const noexcept { return kind == Kind::Variable; }
    bool is_compound() const noexcept { return kind == Kind::Compound; }
    bool is_ground() const;
    std::size_t arity() const noexcept { return args.size(); }

    friend bool operator==(const Term&, const Term&) = default;
};

/// Total order used wherever output must be deterministic: compares the
/// rendered text.
bool term_less(const Term& a, const Term& b);

std::string to_string(const Term& term);

/// A possibly negated atom. Negation is negation-as-failure.
struct Literal {
    Term atom;
    bool negated = false;

    friend bool operator==(const Literal&, const Literal&) = default;
};

std::string to_string(const Literal& literal);
Literal negate(Literal literal);

using Substitution = std::map<std::string, Term>;

/// Follows variable bindings until an unbound variable or non-variable.
const Term& walk(const Term& term, const Substitution& subst);

/// Fully instantiates `term` under `subst`.
Term substitute(const Term& term, const Substitution& subst);
Literal substitute(const Literal& literal, const Substitution& subst);

/// Robinson unification with occurs check. Extends `subst` on success;
/// leaves it unspecified on failure (callers pass a copy).
bool unify(const Term& a, const Term& b, Substitution& subst);

/// Variables occurring in `term`, in first-occurrence order.
void collect_variables(const Term& term, std::vector<std::string>& out);
std::set<std::string> variables_of(const Term& term);

/// Replaces every subterm equal to `from` with `to`. Returns the count.
std::size_t replace_all(Term& term, const Term& from, const Term& to);
std::size_t count_occurrences(const Term& term, const Term& needle);

/// Renames every variable `_x` to `_x#suffix` so recipe variables never
/// collide with variables already present in the dialogue model.
Term rename_variables(const Term& term, std::string_view suffix);

/// Parses one term from text such as `Teaches(_who,CS601)`,
/// `{formal-languages, grammar}` or `14:00-15:15`.
Term parse_term(std::string_view text);

/// Parses `pred(args)` or `not pred(args)`.
Literal parse_literal(std::string_view text);

/// Cursor-based reader shared by the term and library parsers.
class TermReader {
public:
    TermReader(std::string_view text, int line = 1, int column_offset = 0);

    Term read_term();
    Literal read_literal();
    /// Reads `item, item, ...` until end of input.
    std::vector<Literal> read_literal_list();
    std::vector<Term> read_term_list();

    void skip_space();
    bool at_end();
    bool consume(std::string_view token);
    void expect(std::string_view token);
    std::string read_word();

    [[noreturn]] void fail(const std::string& message) const;

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_;
    int column_offset_;
};

/// Minutes since midnight for `HH:MM`.
std::optional<int> parse_clock(std::string_view text);

/// Start and end minutes for `HH:MM` (start == end) or `HH:MM-HH:MM`.
struct TimeSpan {
    int start = 0;
    int end = 0;
};
std::optional<TimeSpan> parse_time_span(std::string_view text);

}  // namespace plannego
