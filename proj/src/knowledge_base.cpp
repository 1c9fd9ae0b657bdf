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

#include "plannego/knowledge_base.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

namespace plannego {

std::string_view to_string(RecipeType type) {
    return type == RecipeType::Decomposition ? "decomposition" : "specialization";
}

std::string_view to_string(AttributeKind kind) {
    switch (kind) {
    case AttributeKind::Ordinal: return "ordinal";
    case AttributeKind::TimeInterval: return "time-interval";
    case AttributeKind::TopicSet: return "topic-set";
    }
    return "?";
}

namespace {

constexpr std::array<std::string_view, 12> kStrengthNames = {
    "very-weak",     "weak",     "low-moderate",     "moderate",     "strong",     "very-strong",
    "neg-very-weak", "neg-weak", "neg-low-moderate", "neg-moderate", "neg-strong", "neg-very-strong",
};

}  // namespace

std::string_view to_string(PreferenceStrength strength) {
    return kStrengthNames[static_cast<std::size_t>(strength)];
}

PreferenceStrength parse_strength(std::string_view name) {
    for (std::size_t i = 0; i < kStrengthNames.size(); ++i) {
        if (kStrengthNames[i] == name) {
            return static_cast<PreferenceStrength>(i);
        }
    }
    throw std::invalid_argument("unknown preference strength '" + std::string(name) + "'");
}

std::vector<std::string> Recipe::parameters() const {
    std::vector<std::string> out;
    collect_variables(action, out);
    return out;
}

bool AttributeSpec::similar_to(std::string_view a, std::string_view b) const {
    return std::any_of(similar.begin(), similar.end(), [&](const auto& pair) {
        return (pair.first == a && pair.second == b) || (pair.first == b && pair.second == a);
    });
}

// ---------------------------------------------------------------------------
// Library

const Recipe* Library::find_recipe(std::string_view name) const {
    auto it = std::find_if(recipes_.begin(), recipes_.end(),
                           [&](const Recipe& r) { return r.name == name; });
    return it == recipes_.end() ? nullptr : &*it;
}

std::vector<const Recipe*> Library::recipes_for(std::string_view action_name) const {
    std::vector<const Recipe*> out;
    for (const auto& r : recipes_) {
        if (r.action_name() == action_name) {
            out.push_back(&r);
        }
    }
    return out;
}

const AttributeSpec* Library::attribute(std::string_view name) const {
    auto it = attributes_.find(std::string(name));
    return it == attributes_.end() ? nullptr : &it->second;
}

std::span<const Fact> Library::facts_for(std::string_view predicate) const {
    auto it = facts_by_predicate_.find(predicate);
    if (it == facts_by_predicate_.end()) {
        return {};
    }
    return it->second;
}

bool Library::knows_predicate(std::string_view predicate) const {
    if (facts_by_predicate_.find(predicate) != facts_by_predicate_.end()) return true;
    return std::any_of(recipes_.begin(), recipes_.end(), [&](const Recipe& r) {
        return std::any_of(r.effects.begin(), r.effects.end(), [&](const Term& e) { return e.name == predicate; });
    });
}

std::vector<Preference> Library::preferences_of(std::string_view user) const {
    std::vector<Preference> out;
    std::copy_if(preferences_.begin(), preferences_.end(), std::back_inserter(out),
                 [&](const Preference& p) { return p.user == user; });
    return out;
}

std::vector<Term> Library::constants() const {
    std::vector<Term> out;
    for (const auto& fact : facts_) {
        for (const auto& arg : fact.args) {
            if (arg.kind == Term::Kind::Constant) {
                out.push_back(arg);
            }
        }
    }
    std::sort(out.begin(), out.end(), term_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void Library::add_recipe(Recipe recipe) {
    if (find_recipe(recipe.name)) {
        throw ValidationError("duplicate recipe name '" + recipe.name + "'");
    }
    validate_recipe(recipe);
    recipes_.push_back(std::move(recipe));
}

void Library::add_fact(Fact fact) {
    if (!fact.is_compound() || !fact.is_ground()) {
        throw ValidationError("fact must be a ground proposition: " + to_string(fact));
    }
    facts_by_predicate_[fact.name].push_back(fact);
    facts_.push_back(std::move(fact));
}

void Library::add_preference(Preference preference) {
    preferences_.push_back(std::move(preference));
}

void Library::add_support_rule(SupportRule rule) {
    auto antecedent_vars = variables_of(rule.antecedent);
    for (const auto& v : variables_of(rule.consequent)) {
        if (!antecedent_vars.count(v)) {
            throw ValidationError("support rule consequent variable " + v +
                                  " does not appear in the antecedent");
        }
    }
    support_rules_.push_back(std::move(rule));
}

void Library::add_attribute(AttributeSpec spec) {
    if (spec.kind == AttributeKind::Ordinal && spec.ordered_values.size() < 2) {
        throw ValidationError("ordinal attribute " + spec.name + " needs at least two values");
    }
    if (spec.kind != AttributeKind::TopicSet && !spec.similar.empty()) {
        throw ValidationError("similarity pairs are only allowed on topic-set attributes");
    }
    if (attributes_.count(spec.name)) {
        throw ValidationError("duplicate attribute '" + spec.name + "'");
    }
    for (auto& pair : spec.similar) {
        if (pair.second < pair.first) std::swap(pair.first, pair.second);
    }
    std::sort(spec.similar.begin(), spec.similar.end());
    spec.similar.erase(std::unique(spec.similar.begin(), spec.similar.end()), spec.similar.end());
    attributes_.emplace(spec.name, std::move(spec));
}

void validate_recipe(const Recipe& recipe) {
    if (!recipe.action.is_compound()) {
        throw ValidationError("recipe " + recipe.name + ": header must be an action");
    }
    if (recipe.type == RecipeType::Decomposition && recipe.body.empty()) {
        throw ValidationError("recipe " + recipe.name + ": decomposition recipe has an empty body");
    }
    std::set<std::string> declared = variables_of(recipe.action);
    for (const auto& c : recipe.constraints) {
        auto vars = variables_of(c.atom);
        declared.insert(vars.begin(), vars.end());
    }
    auto check = [&](const Term& t) {
        for (const auto& v : variables_of(t)) {
            if (!declared.count(v)) {
                throw ValidationError("recipe " + recipe.name + ": undeclared variable " + v +
                                      " in " + to_string(t));
            }
        }
    };
    for (const auto& c : recipe.applicability) check(c.atom);
    for (const auto& c : recipe.preconditions) check(c.atom);
    for (const auto& t : recipe.body) check(t);
    for (const auto& t : recipe.effects) check(t);
    if (recipe.goal) check(*recipe.goal);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

struct Line {
    int number = 0;
    bool indented = false;
    int content_column = 0;  // 0-based column where the content starts
    std::string_view text;   // trimmed
};

std::vector<Line> split_lines(std::string_view source) {
    std::vector<Line> lines;
    int number = 0;
    std::size_t start = 0;
    while (start <= source.size()) {
        std::size_t end = source.find('\n', start);
        if (end == std::string_view::npos) end = source.size();
        std::string_view raw = source.substr(start, end - start);
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        ++number;
        std::string_view text = trim(raw);
        if (!text.empty() && text.front() != '#') {
            Line line;
            line.number = number;
            line.indented = std::isspace(static_cast<unsigned char>(raw.front()));
            line.content_column = static_cast<int>(raw.find_first_not_of(" \t"));
            line.text = text;
            lines.push_back(line);
        }
        if (end == source.size()) break;
        start = end + 1;
    }
    return lines;
}

/// Splits `key: rest`; returns false when no colon-terminated key is present.
bool split_key(const Line& line, std::string_view& key, std::string_view& rest, int& rest_column) {
    std::size_t colon = line.text.find(':');
    if (colon == std::string_view::npos) return false;
    key = trim(line.text.substr(0, colon));
    if (key.empty() || key.find_first_of(" \t(") != std::string_view::npos) return false;
    std::string_view after = line.text.substr(colon + 1);
    std::size_t lead = after.find_first_not_of(" \t");
    rest = lead == std::string_view::npos ? std::string_view{} : after.substr(lead);
    rest_column = line.content_column + static_cast<int>(colon + 1 + (lead == std::string_view::npos ? 0 : lead));
    return true;
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> words;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

void parse_recipe_field(Recipe& recipe, std::string_view key, TermReader& reader, const Line& line,
                        int column) {
    if (key == "name") {
        recipe.name = reader.read_word();
        if (!reader.at_end()) reader.fail("trailing characters");
    } else if (key == "type") {
        std::string t = reader.read_word();
        if (t == "decomposition") {
            recipe.type = RecipeType::Decomposition;
        } else if (t == "specialization") {
            recipe.type = RecipeType::Specialization;
        } else {
            throw ParseError("unknown recipe type '" + t + "'", line.number, column + 1);
        }
        if (!reader.at_end()) reader.fail("trailing characters");
    } else if (key == "applicability") {
        auto items = reader.read_literal_list();
        recipe.applicability.insert(recipe.applicability.end(), items.begin(), items.end());
    } else if (key == "precondition" || key == "preconditions") {
        auto items = reader.read_literal_list();
        recipe.preconditions.insert(recipe.preconditions.end(), items.begin(), items.end());
    } else if (key == "constraint" || key == "constraints") {
        auto items = reader.read_literal_list();
        recipe.constraints.insert(recipe.constraints.end(), items.begin(), items.end());
    } else if (key == "body") {
        for (auto& l : reader.read_literal_list()) {
            if (l.negated) throw ParseError("body steps cannot be negated", line.number, column + 1);
            recipe.body.push_back(std::move(l.atom));
        }
    } else if (key == "effect" || key == "effects") {
        for (auto& l : reader.read_literal_list()) {
            if (l.negated) throw ParseError("effects cannot be negated", line.number, column + 1);
            recipe.effects.push_back(std::move(l.atom));
        }
    } else if (key == "goal") {
        Literal g = reader.read_literal();
        if (g.negated || !reader.at_end()) reader.fail("goal must be a single proposition");
        recipe.goal = std::move(g.atom);
    } else {
        throw ParseError("unknown recipe field '" + std::string(key) + "'", line.number,
                         line.content_column + 1);
    }
}

AttributeSpec parse_attribute(std::string_view rest, const Line& line, int column) {
    auto words = split_words(rest);
    if (words.size() < 2) {
        throw ParseError("attribute needs a name and a kind", line.number, column + 1);
    }
    AttributeSpec spec;
    spec.name = words[0];
    const std::string& kind = words[1];
    if (kind == "ordinal") {
        spec.kind = AttributeKind::Ordinal;
        spec.ordered_values.assign(words.begin() + 2, words.end());
    } else if (kind == "time-interval") {
        spec.kind = AttributeKind::TimeInterval;
        if (words.size() > 2) throw ParseError("time-interval takes no values", line.number, column + 1);
    } else if (kind == "topic-set") {
        spec.kind = AttributeKind::TopicSet;
        for (std::size_t i = 2; i < words.size(); ++i) {
            auto tilde = words[i].find('~');
            if (tilde == std::string::npos || tilde == 0 || tilde + 1 == words[i].size()) {
                throw ParseError("similarity pair must be written a~b", line.number, column + 1);
            }
            spec.similar.emplace_back(words[i].substr(0, tilde), words[i].substr(tilde + 1));
        }
    } else {
        throw ParseError("unknown attribute kind '" + kind + "'", line.number, column + 1);
    }
    return spec;
}

Preference parse_preference(TermReader& reader) {
    Preference p;
    p.user = reader.read_word();
    Literal attr = reader.read_literal();
    if (attr.negated || attr.atom.arity() != 2) {
        reader.fail("preference must be written Attribute(object,value)");
    }
    p.attribute = attr.atom.name;
    p.object = attr.atom.args[0];
    p.value = attr.atom.args[1];
    std::string context = reader.read_word();
    p.action_context = (context == "*" || context.front() == '_') ? "*" : context;
    std::string strength = reader.read_word();
    try {
        p.strength = parse_strength(strength);
    } catch (const std::invalid_argument& e) {
        reader.fail(e.what());
    }
    if (!reader.at_end()) reader.fail("trailing characters");
    return p;
}

}  // namespace

Library load_library(std::string_view source) {
    Library library;
    std::vector<Preference> preferences;
    auto lines = split_lines(source);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const Line& line = lines[i];
        std::string_view key;
        std::string_view rest;
        int column = 0;
        if (line.indented || !split_key(line, key, rest, column)) {
            throw ParseError("expected a section keyword (recipe:, fact:, attribute:, supports:, prefers:)",
                             line.number, line.content_column + 1);
        }
        TermReader reader(rest, line.number, column);
        if (key == "fact") {
            Literal f = reader.read_literal();
            if (f.negated || !reader.at_end()) reader.fail("fact must be a single positive proposition");
            if (!f.atom.is_ground()) reader.fail("fact must be ground");
            library.add_fact(std::move(f.atom));
        } else if (key == "attribute") {
            library.add_attribute(parse_attribute(rest, line, column));
        } else if (key == "supports") {
            Term antecedent = reader.read_term();
            reader.expect("=>");
            Term consequent = reader.read_term();
            if (!reader.at_end()) reader.fail("trailing characters");
            library.add_support_rule({std::move(antecedent), std::move(consequent)});
        } else if (key == "prefers") {
            preferences.push_back(parse_preference(reader));
        } else if (key == "recipe") {
            Recipe recipe;
            Literal header = reader.read_literal();
            if (header.negated || !reader.at_end()) reader.fail("recipe header must be an action");
            recipe.action = std::move(header.atom);
            recipe.name = recipe.action.name;
            while (i + 1 < lines.size() && lines[i + 1].indented) {
                const Line& field = lines[++i];
                std::string_view fkey;
                std::string_view frest;
                int fcol = 0;
                if (!split_key(field, fkey, frest, fcol)) {
                    throw ParseError("expected 'field: value' inside recipe", field.number,
                                     field.content_column + 1);
                }
                TermReader freader(frest, field.number, fcol);
                parse_recipe_field(recipe, fkey, freader, field, fcol);
            }
            library.add_recipe(std::move(recipe));
        } else {
            throw ParseError("unknown section '" + std::string(key) + "'", line.number,
                             line.content_column + 1);
        }
    }
    // Preferences may precede their attribute declarations.
    for (auto& p : preferences) {
        if (!library.attribute(p.attribute)) {
            throw ValidationError("preference on undeclared attribute '" + p.attribute + "'");
        }
        library.add_preference(std::move(p));
    }
    return library;
}

Library load_library_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open library file " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_library(buffer.str());
}

namespace {

void render_literals(std::ostringstream& out, std::string_view key, const std::vector<Literal>& items) {
    for (const auto& l : items) {
        out << "  " << key << ": " << to_string(l) << "\n";
    }
}

void render_terms(std::ostringstream& out, std::string_view key, const std::vector<Term>& items) {
    for (const auto& t : items) {
        out << "  " << key << ": " << to_string(t) << "\n";
    }
}

}  // namespace

std::string render_library(const Library& library) {
    std::ostringstream out;
    for (const auto& [name, spec] : library.attributes()) {
        out << "attribute: " << name << " " << to_string(spec.kind);
        for (const auto& v : spec.ordered_values) out << " " << v;
        for (const auto& [a, b] : spec.similar) out << " " << a << "~" << b;
        out << "\n";
    }
    for (const auto& fact : library.facts()) {
        out << "fact: " << to_string(fact) << "\n";
    }
    for (const auto& rule : library.support_rules()) {
        out << "supports: " << to_string(rule.antecedent) << " => " << to_string(rule.consequent) << "\n";
    }
    for (const auto& p : library.preferences()) {
        out << "prefers: " << p.user << " " << p.attribute << "(" << to_string(p.object) << ","
            << to_string(p.value) << ") " << p.action_context << " " << to_string(p.strength) << "\n";
    }
    for (const auto& r : library.recipes()) {
        out << "recipe: " << to_string(r.action) << "\n";
        if (r.name != r.action_name()) out << "  name: " << r.name << "\n";
        out << "  type: " << to_string(r.type) << "\n";
        render_literals(out, "applicability", r.applicability);
        render_literals(out, "precondition", r.preconditions);
        render_literals(out, "constraint", r.constraints);
        render_terms(out, "body", r.body);
        render_terms(out, "effect", r.effects);
        if (r.goal) out << "  goal: " << to_string(*r.goal) << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Queries

std::vector<Substitution> holds(const Literal& condition, const Substitution& bindings,
                                const Library& library) {
    Term pattern = substitute(condition.atom, bindings);
    if (!library.knows_predicate(pattern.name)) {
        spdlog::warn("unknown predicate '{}' treated as false", pattern.name);
    }
    std::vector<Substitution> solutions;
    for (const auto& fact : library.facts_for(pattern.name)) {
        if (fact.arity() != pattern.arity()) continue;
        Substitution s = bindings;
        if (unify(pattern, fact, s)) {
            if (condition.negated) {
                return {};
            }
            if (std::find(solutions.begin(), solutions.end(), s) == solutions.end()) {
                solutions.push_back(std::move(s));
            }
        }
    }
    if (condition.negated) {
        return {bindings};
    }
    return solutions;
}

std::vector<Substitution> solve(std::span<const Literal> conditions, const Substitution& bindings,
                                const Library& library, std::size_t* failed_at) {
    std::vector<Substitution> frontier{bindings};
    for (std::size_t i = 0; i < conditions.size(); ++i) {
        std::vector<Substitution> next;
        for (const auto& s : frontier) {
            for (auto& ext : holds(conditions[i], s, library)) {
                if (std::find(next.begin(), next.end(), ext) == next.end()) {
                    next.push_back(std::move(ext));
                }
            }
        }
        if (next.empty()) {
            if (failed_at) *failed_at = i;
            return {};
        }
        frontier = std::move(next);
    }
    return frontier;
}

std::vector<Term> candidates(const Recipe& recipe, std::string_view parameter,
                             const Substitution& partial, const Library& library) {
    std::vector<Term> out;
    Term var = Term::variable(std::string(parameter));
    for (const auto& s : solve(recipe.constraints, partial, library)) {
        Term value = substitute(var, s);
        if (value.is_ground() && std::find(out.begin(), out.end(), value) == out.end()) {
            out.push_back(std::move(value));
        }
    }
    std::sort(out.begin(), out.end(), term_less);
    return out;
}

std::vector<const Recipe*> achievers(const Literal& condition, const Library& library) {
    std::vector<const Recipe*> out;
    if (condition.negated) {
        return out;
    }
    for (const auto& recipe : library.recipes()) {
        for (const auto& effect : recipe.effects) {
            Substitution s;
            if (unify(rename_variables(effect, "ach"), condition.atom, s)) {
                out.push_back(&recipe);
                break;
            }
        }
    }
    return out;
}

}  // namespace plannego
