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

#include "plannego/ranking.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <spdlog/spdlog.h>

namespace plannego {

Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto bad = [&]() { return std::invalid_argument("not a rational number: '" + s + "'"); };
    auto parse_int = [&](std::string_view digits) -> long long {
        if (digits.empty()) throw bad();
        long long v = 0;
        for (char c : digits) {
            if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
            v = v * 10 + (c - '0');
        }
        return v;
    };
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && body.front() == '-') {
        negative = true;
        body.remove_prefix(1);
    }
    Rational r;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        long long den = parse_int(body.substr(slash + 1));
        if (den == 0) throw bad();
        r = Rational(parse_int(body.substr(0, slash)), den);
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        std::string_view frac = body.substr(dot + 1);
        long long den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        std::string_view whole = body.substr(0, dot);
        r = Rational((whole.empty() ? 0 : parse_int(whole)) * den + parse_int(frac), den);
    } else {
        r = Rational(parse_int(body));
    }
    return negative ? -r : r;
}

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double to_double(const Rational& r) {
    return boost::rational_cast<double>(r);
}

std::string_view to_string(MatchCloseness closeness) {
    switch (closeness) {
    case MatchCloseness::None: return "none";
    case MatchCloseness::Weak: return "weak";
    case MatchCloseness::Strong: return "strong";
    case MatchCloseness::Exact: return "exact";
    }
    return "?";
}

StrengthScale::StrengthScale() {
    for (int i = 0; i < 6; ++i) {
        values_[i] = i + 1;
        values_[i + 6] = -(i + 1);
    }
}

StrengthScale StrengthScale::scaled(int factor) {
    if (factor <= 0) throw std::invalid_argument("strength scale factor must be positive");
    StrengthScale s;
    for (auto& v : s.values_) v *= factor;
    return s;
}

int strength_value(std::string_view name) {
    return StrengthScale{}.value(parse_strength(name));
}

namespace {

MatchCloseness by_distance(long distance) {
    switch (distance) {
    case 0: return MatchCloseness::Exact;
    case 1: return MatchCloseness::Strong;
    case 2: return MatchCloseness::Weak;
    default: return MatchCloseness::None;
    }
}

std::size_t ordinal_index(const AttributeSpec& spec, const Term& value) {
    if (value.kind == Term::Kind::Constant) {
        auto it = std::find(spec.ordered_values.begin(), spec.ordered_values.end(), value.name);
        if (it != spec.ordered_values.end()) {
            return static_cast<std::size_t>(it - spec.ordered_values.begin());
        }
    }
    throw std::invalid_argument("'" + to_string(value) + "' is not a value of ordinal attribute " + spec.name);
}

TimeSpan time_of(const AttributeSpec& spec, const Term& value) {
    if (value.kind == Term::Kind::Constant) {
        if (auto span = parse_time_span(value.name)) return *span;
    }
    throw std::invalid_argument("'" + to_string(value) + "' is not a time for attribute " + spec.name);
}

}  // namespace

MatchCloseness closeness(const AttributeSpec& spec, const Term& preferred, const Term& actual) {
    switch (spec.kind) {
    case AttributeKind::Ordinal: {
        long a = static_cast<long>(ordinal_index(spec, preferred));
        long b = static_cast<long>(ordinal_index(spec, actual));
        return by_distance(std::labs(a - b));
    }
    case AttributeKind::TimeInterval: {
        TimeSpan wanted = time_of(spec, preferred);
        int start = time_of(spec, actual).start;
        if (start >= wanted.start && start <= wanted.end) return MatchCloseness::Exact;
        int gap = start < wanted.start ? wanted.start - start : start - wanted.end;
        if (gap <= 60) return MatchCloseness::Strong;
        if (gap <= 180) return MatchCloseness::Weak;
        return MatchCloseness::None;
    }
    case AttributeKind::TopicSet: {
        if (preferred.kind != Term::Kind::Constant) {
            throw std::invalid_argument("preferred topic must be a single topic for " + spec.name);
        }
        std::vector<Term> members;
        if (actual.kind == Term::Kind::Set) {
            members = actual.args;
        } else if (actual.kind == Term::Kind::Constant) {
            members.push_back(actual);
        } else {
            throw std::invalid_argument("'" + to_string(actual) + "' is not a topic set for " + spec.name);
        }
        if (std::find(members.begin(), members.end(), preferred) != members.end()) {
            return MatchCloseness::Exact;
        }
        for (const auto& m : members) {
            if (spec.similar_to(preferred.name, m.name)) return MatchCloseness::Strong;
        }
        return MatchCloseness::None;
    }
    }
    return MatchCloseness::None;
}

std::optional<Term> ScoreRow::fact(const Term& candidate) const {
    if (!actual) return std::nullopt;
    return Term::compound(attribute, {candidate, *actual});
}

CandidateScore score(const Term& candidate, std::string_view action_context,
                     std::span<const Preference> preferences, const Library& library,
                     const StrengthScale& scale) {
    CandidateScore out;
    out.candidate = candidate;
    long long denominator = 0;
    for (const auto& pref : preferences) {
        if (!pref.applies_to(action_context)) continue;
        if (!pref.object.is_variable() && pref.object != candidate) continue;
        const AttributeSpec* spec = library.attribute(pref.attribute);
        if (!spec) {
            throw std::invalid_argument("no attribute declaration for " + pref.attribute);
        }
        ScoreRow row;
        row.attribute = pref.attribute;
        row.strength = pref.strength;
        row.strength_value = scale.value(pref.strength);
        row.preferred = pref.value;
        Literal query{Term::compound(pref.attribute, {candidate, Term::variable("_value")}), false};
        auto solutions = holds(query, {}, library);
        if (solutions.empty()) {
            spdlog::debug("{} has no {} fact; scored as no match", to_string(candidate), pref.attribute);
        } else {
            row.actual = substitute(Term::variable("_value"), solutions.front());
            row.closeness = closeness(*spec, pref.value, *row.actual);
        }
        row.product = row.strength_value * value_of(row.closeness);
        out.raw += row.product;
        denominator += 3LL * std::abs(row.strength_value);
        out.rows.push_back(std::move(row));
    }
    out.normalized = denominator == 0 ? Rational(0) : Rational(out.raw, denominator);
    return out;
}

std::vector<CandidateScore> rank(std::span<const Term> candidates, std::string_view action_context,
                                 std::span<const Preference> preferences, const Library& library,
                                 const StrengthScale& scale) {
    if (candidates.empty()) {
        throw std::invalid_argument("rank: empty candidate list");
    }
    std::vector<CandidateScore> scores;
    scores.reserve(candidates.size());
    for (const auto& c : candidates) {
        scores.push_back(score(c, action_context, preferences, library, scale));
    }
    std::sort(scores.begin(), scores.end(), [](const CandidateScore& a, const CandidateScore& b) {
        if (a.normalized != b.normalized) return a.normalized > b.normalized;
        return term_less(a.candidate, b.candidate);
    });
    return scores;
}

bool substantially_better(const CandidateScore& a, const CandidateScore& b, const Rational& threshold) {
    return a.normalized - b.normalized >= threshold;
}

std::vector<SupportFeature> support_features(const CandidateScore& winner, const CandidateScore& loser) {
    std::vector<SupportFeature> out;
    for (std::size_t i = 0; i < winner.rows.size() && i < loser.rows.size(); ++i) {
        const ScoreRow& w = winner.rows[i];
        const ScoreRow& l = loser.rows[i];
        int delta = w.product - l.product;
        if (delta > 0 && w.actual) {
            out.push_back({w.attribute, *w.fact(winner.candidate), delta});
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const SupportFeature& a, const SupportFeature& b) { return a.delta > b.delta; });
    return out;
}

std::string render_table(const CandidateScore& score) {
    std::ostringstream out;
    out << std::left << std::setw(14) << to_string(score.candidate) << std::setw(20) << "Preference-Strength"
        << std::setw(12) << "Match" << "Product\n";
    for (const auto& row : score.rows) {
        out << std::left << std::setw(14) << row.attribute << std::setw(16) << to_string(row.strength)
            << std::right << std::setw(3) << row.strength_value << " " << std::left << std::setw(8)
            << to_string(row.closeness) << std::right << std::setw(3) << value_of(row.closeness) << " "
            << std::setw(8) << row.product << "\n";
    }
    out << std::left << std::setw(46) << "total" << std::right << std::setw(8) << score.raw << "\n";
    out << std::left << std::setw(46) << "normalized" << std::right << std::setw(8)
        << to_string(score.normalized) << "\n";
    return out.str();
}

}  // namespace plannego
