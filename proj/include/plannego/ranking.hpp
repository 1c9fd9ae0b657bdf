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

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "plannego/knowledge_base.hpp"

namespace plannego {

using Rational = boost::rational<long long>;

/// Parses `a/b`, an integer, or a decimal such as `0.25`.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);
double to_double(const Rational& r);

enum class MatchCloseness { None = 0, Weak = 1, Strong = 2, Exact = 3 };

std::string_view to_string(MatchCloseness closeness);
inline int value_of(MatchCloseness c) { return static_cast<int>(c); }

/// Numeric value for each of the twelve strength degrees. The default scale
/// is 1..6 for the positive degrees and -1..-6 for the negative ones.
class StrengthScale {
public:
    StrengthScale();
    /// Every value multiplied by `factor` (> 0).
    static StrengthScale scaled(int factor);

    int value(PreferenceStrength strength) const {
        return values_[static_cast<std::size_t>(strength)];
    }

private:
    std::array<int, 12> values_{};
};

/// Default-scale value of a strength degree name; throws
/// std::invalid_argument for an unknown name.
int strength_value(std::string_view name);

/// How closely `actual` matches the `preferred` value of an attribute.
/// Throws std::invalid_argument when a value does not fit the attribute kind.
MatchCloseness closeness(const AttributeSpec& spec, const Term& preferred, const Term& actual);

struct ScoreRow {
    std::string attribute;
    PreferenceStrength strength = PreferenceStrength::Moderate;
    int strength_value = 0;
    Term preferred;
    std::optional<Term> actual;  // unset when the candidate has no such fact
    MatchCloseness closeness = MatchCloseness::None;
    int product = 0;

    /// The fact the row was scored against, e.g. `Meets-At(CS601,14:00-15:15)`.
    std::optional<Term> fact(const Term& candidate) const;

    friend bool operator==(const ScoreRow&, const ScoreRow&) = default;
};

struct CandidateScore {
    Term candidate;
    std::vector<ScoreRow> rows;
    long long raw = 0;
    Rational normalized{0};

    friend bool operator==(const CandidateScore&, const CandidateScore&) = default;
};

/// Scores `candidate` against every preference applicable to
/// `action_context`: raw = sum of strength * closeness, normalized by
/// 3 * sum of |strength|.
CandidateScore score(const Term& candidate, std::string_view action_context,
                     std::span<const Preference> preferences, const Library& library,
                     const StrengthScale& scale = {});

/// Descending by normalized weight; ties broken by candidate text.
/// Throws std::invalid_argument on an empty candidate list.
std::vector<CandidateScore> rank(std::span<const Term> candidates, std::string_view action_context,
                                 std::span<const Preference> preferences, const Library& library,
                                 const StrengthScale& scale = {});

bool substantially_better(const CandidateScore& a, const CandidateScore& b, const Rational& threshold);

struct SupportFeature {
    std::string attribute;
    Term fact;
    int delta = 0;
};

/// Attributes where the winner's row product beats the loser's, largest
/// delta first.
std::vector<SupportFeature> support_features(const CandidateScore& winner, const CandidateScore& loser);

/// Table rendering in the attribute / strength / match / product layout.
std::string render_table(const CandidateScore& score);

}  // namespace plannego
