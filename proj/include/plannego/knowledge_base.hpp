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
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "plannego/term.hpp"

namespace plannego {

/// Library content that parses but violates a structural invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RecipeType { Decomposition, Specialization };

std::string_view to_string(RecipeType type);

/// Generic action template. `action` is the header, e.g.
/// `Take-Course(_agent,_course)`; `name` distinguishes alternative recipes
/// for the same action and defaults to the action's functor.
struct Recipe {
    std::string name;
    Term action;
    RecipeType type = RecipeType::Decomposition;
    std::vector<Literal> applicability;
    std::vector<Literal> preconditions;
    std::vector<Literal> constraints;
    std::vector<Term> body;
    std::vector<Term> effects;
    std::optional<Term> goal;

    const std::string& action_name() const { return action.name; }
    std::vector<std::string> parameters() const;

    friend bool operator==(const Recipe&, const Recipe&) = default;
};

/// Ground domain fact, e.g. `Teaches(Smith,CS601)`.
using Fact = Term;

/// Twelve graded degrees: six positive, six mirrored negative.
enum class PreferenceStrength {
    VeryWeak,
    Weak,
    LowModerate,
    Moderate,
    Strong,
    VeryStrong,
    NegVeryWeak,
    NegWeak,
    NegLowModerate,
    NegModerate,
    NegStrong,
    NegVeryStrong,
};

std::string_view to_string(PreferenceStrength strength);
/// Throws std::invalid_argument for an unknown degree name.
PreferenceStrength parse_strength(std::string_view name);

/// `prefers(user, attribute(object, value), action, strength)`.
/// An action context of "*" (written `_action` or `*`) matches any action.
struct Preference {
    std::string user;
    std::string attribute;
    Term object;
    Term value;
    std::string action_context;
    PreferenceStrength strength = PreferenceStrength::Moderate;

    bool applies_to(std::string_view action) const {
        return action_context == "*" || action_context == action;
    }

    friend bool operator==(const Preference&, const Preference&) = default;
};

enum class AttributeKind { Ordinal, TimeInterval, TopicSet };

std::string_view to_string(AttributeKind kind);

struct AttributeSpec {
    std::string name;
    AttributeKind kind = AttributeKind::Ordinal;
    std::vector<std::string> ordered_values;                     // ordinal only
    std::vector<std::pair<std::string, std::string>> similar;    // topic-set only

    bool similar_to(std::string_view a, std::string_view b) const;

    friend bool operator==(const AttributeSpec&, const AttributeSpec&) = default;
};

/// `antecedent => consequent`: a belief in the antecedent counts as support
/// for a belief in the consequent.
struct SupportRule {
    Term antecedent;
    Term consequent;

    friend bool operator==(const SupportRule&, const SupportRule&) = default;
};

/// Recipe library, closed-world fact base and user model. Immutable after
/// load and safe to share across sessions.
class Library {
public:
    Library() = default;

    const std::vector<Recipe>& recipes() const noexcept { return recipes_; }
    const std::vector<Fact>& facts() const noexcept { return facts_; }
    const std::vector<Preference>& preferences() const noexcept { return preferences_; }
    const std::vector<SupportRule>& support_rules() const noexcept { return support_rules_; }
    const std::map<std::string, AttributeSpec>& attributes() const noexcept { return attributes_; }

    const Recipe* find_recipe(std::string_view name) const;
    std::vector<const Recipe*> recipes_for(std::string_view action_name) const;
    const AttributeSpec* attribute(std::string_view name) const;
    std::span<const Fact> facts_for(std::string_view predicate) const;
    /// True when a fact or a recipe effect uses the predicate.
    bool knows_predicate(std::string_view predicate) const;
    std::vector<Preference> preferences_of(std::string_view user) const;

    /// Every ground non-compound term appearing as a fact argument.
    std::vector<Term> constants() const;

    void add_recipe(Recipe recipe);
    void add_fact(Fact fact);
    void add_preference(Preference preference);
    void add_support_rule(SupportRule rule);
    void add_attribute(AttributeSpec spec);

    friend bool operator==(const Library& a, const Library& b) {
        return a.recipes_ == b.recipes_ && a.facts_ == b.facts_ &&
               a.preferences_ == b.preferences_ && a.support_rules_ == b.support_rules_ &&
               a.attributes_ == b.attributes_;
    }

private:
    std::vector<Recipe> recipes_;
    std::vector<Fact> facts_;
    std::map<std::string, std::vector<Fact>, std::less<>> facts_by_predicate_;
    std::vector<Preference> preferences_;
    std::vector<SupportRule> support_rules_;
    std::map<std::string, AttributeSpec> attributes_;
};

/// The system's model of one user: who they are and what they prefer.
struct UserModel {
    std::string user;
    std::vector<Preference> preferences;

    static UserModel of(const Library& library, std::string user) {
        auto prefs = library.preferences_of(user);
        return UserModel{std::move(user), std::move(prefs)};
    }
};

/// Parses the line-oriented library format documented in
/// docs/library-format.md. Throws ParseError or ValidationError.
Library load_library(std::string_view source);
Library load_library_file(const std::string& path);

/// Inverse of load_library: load_library(render_library(lib)) == lib.
std::string render_library(const Library& library);

/// Checks Recipe invariants; throws ValidationError naming the recipe.
void validate_recipe(const Recipe& recipe);

/// All extensions of `bindings` under which `condition` is entailed by the
/// closed-world fact base. Negated literals succeed (returning `bindings`
/// unchanged) iff the positive atom has no solution.
std::vector<Substitution> holds(const Literal& condition, const Substitution& bindings,
                                const Library& library);

/// Conjunctive solve. On failure `failed_at` receives the index of the first
/// condition with no solution.
std::vector<Substitution> solve(std::span<const Literal> conditions, const Substitution& bindings,
                                const Library& library, std::size_t* failed_at = nullptr);

/// Ground values of `parameter` for which every recipe constraint is
/// satisfiable, sorted lexicographically.
std::vector<Term> candidates(const Recipe& recipe, std::string_view parameter,
                             const Substitution& partial, const Library& library);

/// Recipes with an effect unifying with `condition`, in declaration order.
std::vector<const Recipe*> achievers(const Literal& condition, const Library& library);

}  // namespace plannego
