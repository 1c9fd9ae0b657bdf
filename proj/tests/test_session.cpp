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

#include <cstdlib>

#include "fixtures.hpp"
#include "paper_fixtures.hpp"
#include "random_proposals.hpp"

using namespace plannego;
using namespace plannego::testing;

namespace {

Session masters_session(SessionOptions options = {}) {
    return Session(advisement(), "U", std::move(options), existing_model(agreed_masters()));
}

std::string first_claim(const SystemTurn& t) { return t.acts.empty() ? "" : to_string(t.acts.front().claim); }

}  // namespace

TEST_SUITE("session") {

TEST_CASE("seminar flow ends merged with the query dropped") {
    Session s = masters_session();
    SystemTurn t1 = s.submit_proposal(seminar_proposal());
    CHECK(t1.outcome == Outcome::Negotiating);
    CHECK(t1.stack_depth == 1);
    CHECK(s.phase() == Phase::AwaitingReaction);
    REQUIRE(t1.dropped_queries.size() == 1);
    CHECK(to_string(t1.dropped_queries[0].logical_form) == "Mknowref(_fac,Teaches(_fac,AI))");
    CHECK(t1.answered_queries.empty());

    SystemTurn t2 = s.react(UserReaction::accept_claims());
    CHECK(t2.frame_kind == FrameKind::SystemProposal);
    CHECK(first_claim(t2) == "proposed(Take-Course(U,CS889))");

    SystemTurn t3 = s.react(UserReaction::accept_claims());
    CHECK(t3.outcome == Outcome::AcceptedAndMerged);
    CHECK(t3.answered_queries.empty());
    CHECK(t3.model.proposed_ids().empty());
    CHECK(s.phase() == Phase::MergedIdle);
    CHECK(s.model().count_everywhere(parse_term("AI")) == 0);
}

TEST_CASE("theory flow answers the instructor query after the switch") {
    Session s = masters_session();
    SystemTurn t1 = s.submit_proposal(cs621_proposal());
    CHECK(t1.specialization == Specialization::ImproveParameter);
    CHECK(t1.dropped_queries.empty());
    SystemTurn t2 = s.react(UserReaction::accept_claims());
    CHECK(t2.outcome == Outcome::AcceptedAndMerged);
    REQUIRE(t2.answered_queries.size() == 1);
    CHECK(to_string(t2.answered_queries[0].answer_form) == "MB(Teaches(Smith,CS601))");
}

TEST_CASE("rejecting an improvement concedes it") {
    Session s = masters_session();
    s.submit_proposal(cs621_proposal());
    SystemTurn t2 = s.react(UserReaction::reject_claims());
    CHECK(t2.outcome == Outcome::Conceded);
    CHECK(s.phase() == Phase::MergedIdle);
    CHECK(s.model().find_action(3)->action == parse_term("Take-Course(U,CS621)"));
    REQUIRE(t2.answered_queries.size() == 1);
    CHECK(to_string(t2.answered_queries[0].answer_form) == "MB(Teaches(Brown,CS621))");
}

TEST_CASE("a validity dispute reaches impasse after the round limit") {
    Session s = masters_session();
    s.submit_proposal(seminar_proposal());
    SystemTurn again = s.react(UserReaction::reject_claims());
    CHECK(again.outcome == Outcome::Negotiating);
    CHECK(first_claim(again) == "not contributes(Take-Course(U,AI),Satisfy-Seminar-Course(U,CS))");
    SystemTurn stop = s.react(UserReaction::reject_claims());
    CHECK(stop.outcome == Outcome::Impasse);
    CHECK(s.phase() == Phase::Impasse);
    CHECK_THROWS_AS(s.react(UserReaction::accept_claims()), PhaseError);
    CHECK_THROWS_AS(s.submit_proposal(seminar_proposal()), PhaseError);
}

TEST_CASE("rejecting the only replacement is an impasse") {
    Session s = masters_session();
    s.submit_proposal(seminar_proposal());
    s.react(UserReaction::accept_claims());
    SystemTurn t = s.react(UserReaction::reject_claims());
    CHECK(t.outcome == Outcome::Impasse);
}

TEST_CASE("phase errors") {
    Session s = masters_session();
    CHECK_THROWS_AS(s.react(UserReaction::accept_claims()), PhaseError);
    s.submit_proposal(seminar_proposal());
    try {
        s.submit_proposal(seminar_proposal());
        FAIL("expected PhaseError");
    } catch (const PhaseError& e) {
        CHECK(e.phase() == Phase::AwaitingReaction);
    }
}

TEST_CASE("belief flow changes only the disputed edge") {
    Session s(advisement(), "U");
    SystemTurn t1 = s.submit_proposal(belief_proposal());
    DialogueModel before = s.model();
    CHECK(first_claim(t1) == "not supports(full-professor(Brown),teaches(Brown,AI))");
    SystemTurn t2 = s.react(UserReaction::accept_claims());
    CHECK(t2.outcome == Outcome::AcceptedAndMerged);
    CHECK(s.model().supports().size() == 1);
    for (const auto& [id, node] : before.level(Level::Discourse)) {
        ActionNode merged = node;
        merged.status = Status::Existing;
        CHECK(s.model().level(Level::Discourse).at(id) == merged);
    }
}

TEST_CASE("counter-belief nests a frame and unwinds") {
    Session s(advisement(), "U");
    s.submit_proposal(belief_proposal());
    SystemTurn t2 = s.react(UserReaction::reject_claims(chair_counter(8)));
    CHECK(t2.stack_depth == 2);
    CHECK(first_claim(t2) == "not supports(department-chair(Brown),full-professor(Brown))");
    SystemTurn t3 = s.react(UserReaction::accept_claims());
    CHECK(t3.stack_depth == 1);
    CHECK(first_claim(t3) == "not supports(full-professor(Brown),teaches(Brown,AI))");
    SystemTurn t4 = s.react(UserReaction::accept_claims());
    CHECK(t4.stack_depth == 0);
    CHECK(t4.outcome == Outcome::AcceptedAndMerged);
    CHECK(s.model().proposed_ids().empty());
    CHECK(s.model().check_invariants().empty());
}

TEST_CASE("an acceptable counter counts as a plain rejection") {
    Session s(advisement(), "U");
    s.submit_proposal(belief_proposal());
    Proposal good;
    good.beliefs.push_back({"x", BeliefKind::MB, parse_term("specializes(Brown,AI)"), std::nullopt, "U", {}});
    good.supports.push_back({NodeRef{std::string("x")}, NodeRef{7}});
    SystemTurn t = s.react(UserReaction::reject_claims(good));
    CHECK(t.stack_depth == 1);
    CHECK(t.outcome == Outcome::Negotiating);
}

TEST_CASE("replay reproduces the transcript") {
    Session s(advisement(), "U");
    s.submit_proposal(belief_proposal());
    s.react(UserReaction::reject_claims(chair_counter(8)));
    s.react(UserReaction::accept_claims());
    Session again = Session::replay(advisement(), "U", {}, {}, s.transcript());
    REQUIRE(again.transcript().size() == s.transcript().size());
    for (std::size_t i = 0; i < s.transcript().size(); ++i) {
        CHECK(again.transcript()[i].turn == s.transcript()[i].turn);
    }
}

TEST_CASE("explain ranks by node or by recipe step") {
    Session s = masters_session();
    auto generic = s.explain("take-course", "_course");
    CHECK_FALSE(generic.empty());
    s.submit_proposal(cs621_proposal());
    auto ranking = s.explain("Take-Course", "_course");
    REQUIRE(ranking.size() == 2);
    CHECK(ranking[0].raw == 43);
    CHECK(ranking[1].raw == 29);
    CHECK_THROWS_AS(s.explain("Take-Course", "_nothing"), std::invalid_argument);
}

TEST_CASE("stack depth moves by at most one per turn") {
    int nested = 0;
    for (unsigned seed = 0; seed < 1000; ++seed) {
        ProposalGenerator gen(seed);
        Session s = masters_session();
        std::size_t depth = 0;
        CAPTURE(seed);
        for (int step = 0; step < 12 && s.phase() != Phase::Impasse; ++step) {
            SystemTurn t;
            if (s.phase() == Phase::AwaitingReaction) {
                int r = gen.between(0, 2);
                if (r == 0) {
                    t = s.react(UserReaction::accept_claims());
                } else if (r == 1 || s.model().beliefs().empty()) {
                    t = s.react(UserReaction::reject_claims());
                } else {
                    std::vector<NodeId> ids;
                    for (const auto& [id, b] : s.model().beliefs()) ids.push_back(id);
                    t = s.react(UserReaction::reject_claims(gen.counter(gen.pick(ids))));
                }
            } else {
                t = s.submit_proposal(gen.next(NodeId{1}));
            }
            CHECK(std::llabs(static_cast<long long>(t.stack_depth) - static_cast<long long>(depth)) <= 1);
            CHECK(t.stack_depth == s.depth());
            if (t.stack_depth > 1) ++nested;
            depth = t.stack_depth;
            REQUIRE(s.model().check_invariants().empty());
        }
    }
    CHECK(nested > 0);
}

}
