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

#include <functional>

#include "plannego/term.hpp"

using namespace plannego;

namespace {

// Counts by explicit recursion over the text form of every subterm.
std::size_t naive_count(const Term& t, const std::string& needle) {
    std::size_t n = to_string(t) == needle ? 1 : 0;
    for (const auto& a : t.args) n += naive_count(a, needle);
    return n;
}

}  // namespace

TEST_SUITE("term") {

TEST_CASE("parse and print round trip") {
    for (const char* text : {"Teaches(_who,CS601)", "{formal-languages,grammar}", "Meets-At(CS601,14:00-15:15)",
                             "Build-Plan(U,S,Take-Course(U,AI))", "Offered(AI)", "x"}) {
        CHECK(to_string(parse_term(text)) == text);
    }
    CHECK(parse_term("_fac").is_variable());
    CHECK(parse_term("{b, a}") == parse_term("{a,b}"));
}

TEST_CASE("literals") {
    Literal l = parse_literal("not seminar-course(AI)");
    CHECK(l.negated);
    CHECK(to_string(l) == "not seminar-course(AI)");
    CHECK(negate(l) == parse_literal("seminar-course(AI)"));
}

TEST_CASE("parse errors carry positions") {
    try {
        parse_term("Teaches(Smith,");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() >= 14);
    }
    CHECK_THROWS_AS(parse_term("a)"), ParseError);
}

TEST_CASE("unification") {
    Substitution s;
    REQUIRE(unify(parse_term("Teaches(_x,CS601)"), parse_term("Teaches(Smith,_c)"), s));
    CHECK(to_string(substitute(parse_term("p(_x,_c)"), s)) == "p(Smith,CS601)");

    Substitution occurs;
    CHECK_FALSE(unify(parse_term("_x"), parse_term("f(_x)"), occurs));

    Substitution clash;
    CHECK_FALSE(unify(parse_term("f(a,_y)"), parse_term("f(b,c)"), clash));

    Substitution chain;
    REQUIRE(unify(parse_term("f(_a,_b)"), parse_term("f(_b,c)"), chain));
    CHECK(to_string(substitute(parse_term("_a"), chain)) == "c");
}

TEST_CASE("variable renaming keeps structure") {
    Term t = rename_variables(parse_term("Take-Course(_agent,_course)"), "r1");
    CHECK(to_string(t) == "Take-Course(_agent#r1,_course#r1)");
    CHECK(rename_variables(parse_term("Offered(AI)"), "r1") == parse_term("Offered(AI)"));
}

TEST_CASE("occurrence counts agree with a recursive text scan") {
    for (const char* text : {"Build-Plan(U,S,Take-Course(U,AI))", "f(AI,g(AI,h(AI)),AI)", "p({AI,b},AI)"}) {
        Term t = parse_term(text);
        for (const char* needle : {"AI", "U", "Take-Course(U,AI)", "zzz"}) {
            CAPTURE(text);
            CAPTURE(needle);
            CHECK(count_occurrences(t, parse_term(needle)) == naive_count(t, needle));
        }
    }
    Term t = parse_term("f(AI,g(AI))");
    CHECK(replace_all(t, parse_term("AI"), parse_term("_v1")) == 2);
    CHECK(to_string(t) == "f(_v1,g(_v1))");
}

TEST_CASE("clock parsing") {
    CHECK(parse_clock("14:00") == 840);
    CHECK_FALSE(parse_clock("25:00"));
    auto span = parse_time_span("08:00-09:15");
    REQUIRE(span);
    CHECK(span->start == 480);
    CHECK(span->end == 555);
}

}
