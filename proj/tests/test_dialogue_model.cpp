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

#include <set>

#include "plannego/session.hpp"
#include "random_proposals.hpp"

using namespace plannego;

namespace {

Proposal seminar_chain() {
    Proposal p;
    p.actions.push_back({"d1", Level::Domain, parse_term("Satisfy-Seminar-Course(U,CS)"), NodeRef{1}, {}});
    p.actions.push_back({"d2", Level::Domain, parse_term("Take-Course(U,AI)"), NodeRef{std::string("d1")}, {}});
    p.actions.push_back({"p1", Level::ProblemSolving, parse_term("Build-Plan(U,S,Take-Course(U,AI))"), {},
                         {NodeRef{std::string("d2")}}});
    p.actions.push_back({"p2", Level::ProblemSolving, parse_term("Instantiate-Vars(U,S,Take-Course(U,AI))"),
                         NodeRef{std::string("p1")}, {}});
    p.actions.push_back({"c1", Level::Discourse, parse_term("Obtain-Info-Ref(U,S,_fac,Teaches(_fac,AI))"), {},
                         {NodeRef{std::string("p2")}}});
    p.beliefs.push_back({"q1", BeliefKind::Mknowref, parse_term("Teaches(_fac,AI)"), parse_term("_fac"), "U",
                         NodeRef{std::string("c1")}});
    return p;
}

DialogueModel seminar_model() {
    Proposal root;
    root.actions.push_back({"g", Level::Domain, parse_term("Get-Masters(U,CS)"), {}, {}});
    DialogueModel m = existing_model(root);
    m.attach(seminar_chain());
    return m;
}

// Fixpoint over parent pointers and links rather than a child walk.
std::set<NodeId> expected_removal(const DialogueModel& m, NodeId root) {
    std::set<NodeId> doomed{root};
    bool grew = true;
    while (grew) {
        grew = false;
        for (Level level : {Level::Domain, Level::ProblemSolving}) {
            for (const auto& [id, node] : m.level(level)) {
                if (doomed.count(id) || node.status != Status::Proposed) continue;
                bool hit = node.parent && doomed.count(*node.parent);
                if (level == Level::ProblemSolving) {
                    for (const auto& l : m.links()) {
                        const ActionNode* to = m.find_action(l.to);
                        if (l.from == id && to && to->level == Level::Domain && doomed.count(l.to)) hit = true;
                    }
                }
                if (hit) {
                    doomed.insert(id);
                    grew = true;
                }
            }
        }
    }
    return doomed;
}

std::set<NodeId> all_action_ids(const DialogueModel& m) {
    std::set<NodeId> out;
    for (Level level : kActionLevels) {
        for (const auto& [id, node] : m.level(level)) out.insert(id);
    }
    return out;
}

}  // namespace

TEST_SUITE("dialogue-model") {

TEST_CASE("attach assigns ids in proposal order") {
    DialogueModel m = seminar_model();
    CHECK(m.node_count() == 7);
    CHECK(m.find_action(3)->action == parse_term("Take-Course(U,AI)"));
    CHECK(m.find_action(3)->parent == 2);
    CHECK(m.find_action(1)->status == Status::Existing);
    CHECK(m.proposed_ids() == std::vector<NodeId>{2, 3, 4, 5, 6, 7});
    CHECK(to_string(m.find_belief(7)->logical_form()) == "Mknowref(_fac,Teaches(_fac,AI))");
    REQUIRE(m.pending_queries().size() == 1);
    CHECK(m.pending_queries()[0].state == QueryState::Open);
    CHECK(m.check_invariants().empty());
}

TEST_CASE("attach rejects dangling references and duplicate keys") {
    DialogueModel m;
    Proposal dangling;
    dangling.actions.push_back({"a", Level::Domain, parse_term("Take-Course(U,AI)"), NodeRef{42}, {}});
    CHECK_THROWS_AS(m.attach(dangling), ModelError);
    Proposal dup;
    dup.actions.push_back({"a", Level::Domain, parse_term("Take-Course(U,AI)"), {}, {}});
    dup.actions.push_back({"a", Level::Domain, parse_term("Take-Course(U,CS601)"), {}, {}});
    CHECK_THROWS_AS(m.attach(dup), ModelError);
    CHECK(m.node_count() == 0);
}

TEST_CASE("alter replaces every occurrence with one variable") {
    DialogueModel m = seminar_model();
    std::size_t before = m.count_everywhere(parse_term("AI"));
    CHECK(before == 5);
    Term v = m.alter_node(3, 1);
    CHECK(v.is_variable());
    CHECK(m.count_everywhere(parse_term("AI")) == 0);
    CHECK(m.count_everywhere(v) == before);
    CHECK_THROWS_AS(m.alter_node(3, 1), ModelError);
    CHECK_THROWS_AS(m.alter_node(3, 9), ModelError);
    CHECK(m.replace_everywhere(v, parse_term("CS889")) == before);
}

TEST_CASE("remove cascades to descendants and linked intentions") {
    DialogueModel m = seminar_model();
    auto expected = expected_removal(m, 2);
    CHECK(expected == std::set<NodeId>{2, 3, 4, 5});
    auto before = all_action_ids(m);
    m.remove_node(2);
    auto after = all_action_ids(m);
    for (NodeId id : expected) CHECK_FALSE(after.count(id));
    CHECK(after.size() == before.size() - expected.size());
    CHECK(m.find_action(6));  // discourse stays
    CHECK(m.find_action(1)->children.empty());
    CHECK_THROWS_AS(m.remove_node(1), ModelError);
    CHECK_THROWS_AS(m.remove_node(6), ModelError);
}

TEST_CASE("remove matches the parent-pointer oracle on random models") {
    for (unsigned seed = 0; seed < 200; ++seed) {
        plannego::testing::ProposalGenerator gen(seed);
        DialogueModel m;
        m.attach(gen.next(std::nullopt));
        std::vector<NodeId> removable;
        for (Level level : {Level::Domain, Level::ProblemSolving}) {
            for (const auto& [id, node] : m.level(level)) removable.push_back(id);
        }
        NodeId target = gen.pick(removable);
        auto expected = expected_removal(m, target);
        auto before = all_action_ids(m);
        m.remove_node(target);
        auto after = all_action_ids(m);
        std::set<NodeId> gone;
        for (NodeId id : before) {
            if (!after.count(id)) gone.insert(id);
        }
        CAPTURE(seed);
        CHECK(gone == expected);
        CHECK(m.check_invariants().empty());
    }
}

TEST_CASE("merge is idempotent") {
    for (unsigned seed = 0; seed < 200; ++seed) {
        plannego::testing::ProposalGenerator gen(seed);
        DialogueModel m;
        m.attach(gen.next(std::nullopt));
        m.merge_accepted();
        CHECK(m.proposed_ids().empty());
        DialogueModel once = m;
        m.merge_accepted();
        CHECK(m == once);
    }
}

TEST_CASE("support edges and queries") {
    DialogueModel m = seminar_model();
    Proposal b;
    b.beliefs.push_back({"x", BeliefKind::MB, parse_term("Offered(AI)"), std::nullopt, "U", std::nullopt});
    b.beliefs.push_back({"y", BeliefKind::MB, parse_term("teaches(Brown,AI)"), std::nullopt, "U", std::nullopt});
    b.supports.push_back({NodeRef{std::string("y")}, NodeRef{std::string("x")}});
    auto ids = m.attach(b);
    CHECK(m.proposed_supports().size() == 1);
    m.remove_support(ids["y"], ids["x"]);
    CHECK(m.supports().empty());
    CHECK_THROWS_AS(m.remove_support(ids["y"], ids["x"]), ModelError);

    NodeId answer = m.answer_query(7, parse_term("Teaches(Brown,AI)"), "S");
    CHECK(m.find_belief(7)->query == QueryState::Answered);
    CHECK(m.find_belief(7)->answered_by == answer);
    CHECK(m.pending_queries().empty());
}

}
