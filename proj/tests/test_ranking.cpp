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

#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "fixtures.hpp"
#include "plannego/ranking.hpp"

using namespace plannego;
using plannego::testing::figure1;

namespace {

// Six courses spread over every closeness class of each attribute.
const char* kSixCourses = R"(
attribute: Meets-At time-interval
attribute: Difficulty ordinal very-easy easy moderate difficult very-difficult
attribute: Workload ordinal very-light light moderate heavy very-heavy
attribute: Content topic-set formal-languages~complexity-theory
fact: Meets-At(C1,14:00-15:15)
fact: Difficulty(C1,difficult)
fact: Workload(C1,moderate)
fact: Content(C1,{formal-languages,grammar})
fact: Meets-At(C2,08:00-09:15)
fact: Difficulty(C2,difficult)
fact: Workload(C2,heavy)
fact: Content(C2,{algorithm-design,complexity-theory})
fact: Meets-At(C3,09:30-10:45)
fact: Difficulty(C3,moderate)
fact: Workload(C3,very-light)
fact: Content(C3,{databases})
fact: Meets-At(C4,19:00-20:15)
fact: Difficulty(C4,very-easy)
fact: Workload(C4,heavy)
fact: Content(C4,{formal-languages})
fact: Meets-At(C5,06:00-07:15)
fact: Difficulty(C5,very-difficult)
fact: Workload(C5,very-heavy)
fact: Content(C5,{complexity-theory,logic})
fact: Meets-At(C6,17:30-18:45)
fact: Difficulty(C6,easy)
fact: Content(C6,{graphics})
prefers: A Meets-At(_course,10:00-17:00) _action very-strong
prefers: A Difficulty(_course,moderate) Take-Course weak
prefers: A Workload(_course,heavy) Take-Course low-moderate
prefers: A Content(_course,formal-languages) Take-Course strong
)";

// Independent scoring straight from the closeness rules.
int oracle_closeness(const std::string& attr, const std::string& preferred, const std::string& actual) {
    if (attr == "Difficulty" || attr == "Workload") {
        std::vector<std::string> scale = attr == "Difficulty"
            ? std::vector<std::string>{"very-easy", "easy", "moderate", "difficult", "very-difficult"}
            : std::vector<std::string>{"very-light", "light", "moderate", "heavy", "very-heavy"};
        auto pos = [&](const std::string& v) { return std::find(scale.begin(), scale.end(), v) - scale.begin(); };
        long d = std::labs(pos(preferred) - pos(actual));
        return d == 0 ? 3 : d == 1 ? 2 : d == 2 ? 1 : 0;
    }
    if (attr == "Meets-At") {
        auto minutes = [](const std::string& s, std::size_t at) {
            return std::stoi(s.substr(at, 2)) * 60 + std::stoi(s.substr(at + 3, 2));
        };
        int lo = minutes(preferred, 0), hi = minutes(preferred, 6), start = minutes(actual, 0);
        int dist = start < lo ? lo - start : start > hi ? start - hi : 0;
        return dist == 0 ? 3 : dist <= 60 ? 2 : dist <= 180 ? 1 : 0;
    }
    // Content: members of the braced set.
    std::string members = actual.substr(1, actual.size() - 2);
    std::vector<std::string> items;
    std::stringstream ss(members);
    for (std::string item; std::getline(ss, item, ',');) items.push_back(item);
    if (std::find(items.begin(), items.end(), preferred) != items.end()) return 3;
    if (preferred == "formal-languages" &&
        std::find(items.begin(), items.end(), "complexity-theory") != items.end())
        return 2;
    return 0;
}

struct OracleScore {
    std::string course;
    long long raw = 0;
    long long denom = 0;
};

OracleScore oracle_score(const Library& lib, const std::string& course, int factor = 1) {
    const std::map<std::string, int> strength{{"very-weak", 1}, {"weak", 2}, {"low-moderate", 3},
                                              {"moderate", 4}, {"strong", 5}, {"very-strong", 6}};
    OracleScore out{course, 0, 0};
    for (const Preference& p : lib.preferences()) {
        int s = strength.at(std::string(to_string(p.strength))) * factor;
        out.denom += 3 * s;
        for (const Fact& f : lib.facts_for(p.attribute)) {
            if (to_string(f.args[0]) != course) continue;
            out.raw += s * oracle_closeness(p.attribute, to_string(p.value), to_string(f.args[1]));
        }
    }
    return out;
}

std::vector<Term> courses_of(unsigned mask) {
    std::vector<Term> out;
    for (int i = 0; i < 6; ++i) {
        if (mask & (1u << i)) out.push_back(Term::constant("C" + std::to_string(i + 1)));
    }
    return out;
}

std::vector<std::string> order(const std::vector<CandidateScore>& ranking) {
    std::vector<std::string> out;
    for (const auto& s : ranking) out.push_back(to_string(s.candidate));
    return out;
}

}  // namespace

TEST_SUITE("ranking") {

TEST_CASE("strength and closeness scales") {
    CHECK(strength_value("very-strong") == 6);
    CHECK(strength_value("weak") == 2);
    CHECK(strength_value("low-moderate") == 3);
    CHECK(strength_value("neg-very-strong") == -6);
    CHECK_THROWS_AS(strength_value("huge"), std::invalid_argument);
    CHECK(value_of(MatchCloseness::Exact) == 3);
    CHECK(value_of(MatchCloseness::None) == 0);

    const Library& lib = *figure1();
    const AttributeSpec& time = *lib.attribute("Meets-At");
    CHECK(closeness(time, parse_term("10:00-17:00"), parse_term("14:00-15:15")) == MatchCloseness::Exact);
    CHECK(closeness(time, parse_term("10:00-17:00"), parse_term("09:00-10:15")) == MatchCloseness::Strong);
    CHECK(closeness(time, parse_term("10:00-17:00"), parse_term("08:00-09:15")) == MatchCloseness::Weak);
    CHECK(closeness(time, parse_term("10:00-17:00"), parse_term("06:00-07:15")) == MatchCloseness::None);
    const AttributeSpec& content = *lib.attribute("Content");
    CHECK(closeness(content, parse_term("formal-languages"), parse_term("{algorithm-design,complexity-theory}")) ==
          MatchCloseness::Strong);
    CHECK_THROWS_AS(closeness(time, parse_term("10:00-17:00"), parse_term("noon")), std::invalid_argument);
}

TEST_CASE("score table for the two theory courses") {
    const Library& lib = *figure1();
    auto prefs = lib.preferences_of("UserA");
    CandidateScore a = score(parse_term("CS601"), "Take-Course", prefs, lib);
    CandidateScore b = score(parse_term("CS621"), "Take-Course", prefs, lib);
    std::vector<int> pa, pb;
    for (const auto& r : a.rows) pa.push_back(r.product);
    for (const auto& r : b.rows) pb.push_back(r.product);
    CHECK(pa == std::vector<int>{18, 4, 6, 15});
    CHECK(pb == std::vector<int>{6, 4, 9, 10});
    CHECK(a.raw == 43);
    CHECK(b.raw == 29);
    CHECK(a.normalized == Rational(43, 48));
    CHECK(b.normalized == Rational(29, 48));
    CHECK(to_string(a.normalized) == "43/48");

    auto features = support_features(a, b);
    REQUIRE(features.size() == 2);
    CHECK(features[0].attribute == "Meets-At");
    CHECK(features[0].delta == 12);
    CHECK(features[1].attribute == "Content");
    CHECK(features[1].delta == 5);
    CHECK(to_string(features[0].fact) == "Meets-At(CS601,14:00-15:15)");

    CHECK(substantially_better(a, b, Rational(1, 4)));
    CHECK_FALSE(substantially_better(a, b, parse_rational("0.30")));
    CHECK(render_table(a).find("43/48") != std::string::npos);
}

TEST_CASE("rank rejects an empty candidate list") {
    const Library& lib = *figure1();
    auto prefs = lib.preferences_of("UserA");
    CHECK_THROWS_AS(rank({}, "Take-Course", prefs, lib), std::invalid_argument);
}

TEST_CASE("ranking equals the brute-force oracle on every subset") {
    Library lib = load_library(kSixCourses);
    auto prefs = lib.preferences_of("A");
    for (unsigned mask = 1; mask < 64; ++mask) {
        auto cands = courses_of(mask);
        std::vector<OracleScore> expected;
        for (const auto& c : cands) expected.push_back(oracle_score(lib, to_string(c)));
        std::sort(expected.begin(), expected.end(), [](const OracleScore& x, const OracleScore& y) {
            // Common denominator, so raw order is normalized order.
            if (x.raw != y.raw) return x.raw > y.raw;
            return x.course < y.course;
        });
        auto got = rank(cands, "Take-Course", prefs, lib);
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CAPTURE(mask);
            CHECK(to_string(got[i].candidate) == expected[i].course);
            CHECK(got[i].raw == expected[i].raw);
            CHECK(got[i].normalized == Rational(expected[i].raw, expected[i].denom));
            CHECK(got[i].raw == std::accumulate(got[i].rows.begin(), got[i].rows.end(), 0LL,
                                                [](long long acc, const ScoreRow& r) { return acc + r.product; }));
        }
    }
}

TEST_CASE("rank order is invariant under uniform scaling") {
    Library lib = load_library(kSixCourses);
    auto prefs = lib.preferences_of("A");
    for (int factor : {2, 3, 7}) {
        StrengthScale scaled = StrengthScale::scaled(factor);
        for (unsigned mask = 1; mask < 64; ++mask) {
            auto cands = courses_of(mask);
            auto base = rank(cands, "Take-Course", prefs, lib);
            auto other = rank(cands, "Take-Course", prefs, lib, scaled);
            CAPTURE(mask);
            CHECK(order(base) == order(other));
            for (std::size_t i = 0; i < base.size(); ++i) CHECK(base[i].normalized == other[i].normalized);
        }
    }
    CHECK(oracle_score(lib, "C1", 3).raw == 3 * oracle_score(lib, "C1").raw);
}

TEST_CASE("improving one attribute never lowers a candidate") {
    // Move C2 one ordinal step at a time toward the preferred difficulty,
    // and its time slot toward the preferred window.
    const std::vector<std::pair<std::string, std::string>> steps{
        {"Difficulty(C2,difficult)", "Difficulty(C2,moderate)"},
        {"Workload(C3,very-light)", "Workload(C3,light)"},
        {"Workload(C3,very-light)", "Workload(C3,moderate)"},
        {"Meets-At(C5,06:00-07:15)", "Meets-At(C5,08:00-09:15)"},
        {"Meets-At(C2,08:00-09:15)", "Meets-At(C2,09:30-10:45)"},
        {"Content(C6,{graphics})", "Content(C6,{complexity-theory})"},
    };
    Library base = load_library(kSixCourses);
    auto prefs = base.preferences_of("A");
    auto all = courses_of(63);
    auto before = rank(all, "Take-Course", prefs, base);
    for (const auto& [from, to] : steps) {
        std::string text = kSixCourses;
        text.replace(text.find(from), from.size(), to);
        Library improved = load_library(text);
        auto after = rank(all, "Take-Course", prefs, improved);
        std::string subject = to.substr(to.find('(') + 1, 2);
        auto find = [&](const std::vector<CandidateScore>& r) {
            return std::find_if(r.begin(), r.end(), [&](const CandidateScore& s) {
                return to_string(s.candidate) == subject;
            });
        };
        CAPTURE(to);
        CHECK(find(after)->normalized > find(before)->normalized);
        CHECK(find(after) - after.begin() <= find(before) - before.begin());
    }
}

}
