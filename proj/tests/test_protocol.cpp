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

#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"

#include "fixtures.hpp"
#include "paper_fixtures.hpp"
#include "plannego/protocol.hpp"
#include "plannego/repl.hpp"
#include "plannego/scenario.hpp"
#include "plannego/service.hpp"

using namespace plannego;
using namespace plannego::testing;

namespace {

Templates templates() { return Templates::load_file(data_path("templates.txt")); }

SessionSetup masters_setup() {
    SessionSetup setup;
    setup.library = advisement();
    setup.existing = agreed_masters();
    return setup;
}

// Serves on a free local port for the lifetime of the object.
class RunningService {
public:
    RunningService() : service_(masters_setup(), templates()) {
        port_ = service_.bind_any_port("127.0.0.1");
        thread_ = std::thread([this] { service_.listen_after_bind(); });
    }
    ~RunningService() {
        service_.stop();
        thread_.join();
    }
    httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

private:
    Service service_;
    int port_ = 0;
    std::thread thread_;
};

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("templates render claims with nested placeholders") {
    Templates t = templates();
    CHECK(t.render(parse_literal("not contributes(Take-Course(U,AI),Satisfy-Seminar-Course(U,CS))")) ==
          "Taking AI does not contribute to Satisfy-Seminar-Course(U,CS).");
    CHECK(t.render(parse_literal("not seminar-course(AI)")) == "AI is not a seminar course.");
    CHECK(t.render(parse_literal("Content(CS601,{formal-languages,grammar})")) ==
          "CS601 involves formal-languages and grammar.");
    CHECK(t.render(parse_literal("unheard-of(x)")) == "unheard-of(x)");
    CHECK_THROWS_AS(Templates::parse("no equals sign here\n"), ParseError);
}

TEST_CASE("proposal documents round trip") {
    for (const Proposal& p : {seminar_proposal(), belief_proposal(), chair_counter(8)}) {
        Json doc = to_json(p);
        CHECK(to_json(proposal_from_json(doc)) == doc);
    }
    Json bad = Json::parse(R"j({"actions":[{"key":"a","level":"orbit","action":"X(U)"}]})j");
    CHECK_THROWS_AS(proposal_from_json(bad), std::exception);
    CHECK_THROWS_AS(proposal_from_json(Json::parse(R"({"actions":[{"key":"a"}]})")), ProtocolError);
}

TEST_CASE("reaction documents") {
    UserReaction r = reaction_from_json(Json::parse(R"({"reaction":"reject","counter":{"beliefs":[]}})"));
    CHECK_FALSE(r.accept);
    CHECK(reaction_from_json(Json::parse(R"({"reaction":"accept"})")).accept);
    CHECK_THROWS_AS(reaction_from_json(Json::parse(R"({"reaction":"maybe"})")), ProtocolError);
    CHECK(reaction_from_json(to_json(UserReaction::reject_claims(chair_counter(8)))).counter.has_value());
}

TEST_CASE("model snapshots round trip") {
    Session s(advisement(), "U", {}, existing_model(agreed_masters()));
    s.submit_proposal(seminar_proposal());
    s.react(UserReaction::accept_claims());
    Json snap = model_snapshot(s.model());
    DialogueModel back = model_from_snapshot(snap);
    CHECK(back == s.model());
    CHECK(model_snapshot(back) == snap);
}

TEST_CASE("turn documents carry tags and both text forms") {
    Session s(advisement(), "U", {}, existing_model(agreed_masters()));
    Templates t = templates();
    Json turn = to_json(s.submit_proposal(seminar_proposal()), &t);
    CHECK(turn["outcome"] == "negotiating");
    CHECK(turn["verdict"]["tag"] == "IllFormed");
    CHECK(turn["specialization"] == "Correct-Relation");
    CHECK(turn["acts"][0]["claim"] == "not contributes(Take-Course(U,AI),Satisfy-Seminar-Course(U,CS))");
    CHECK(turn["acts"][0]["text"] == "Taking AI does not contribute to Satisfy-Seminar-Course(U,CS).");
    CHECK(turn["stack_depth"] == 1);
    CHECK(turn["phase"] == "awaiting-reaction");
    Json ex = explanation(s.explain("Take-Course", "_course"));
    CHECK(ex["ranking"][0]["candidate"] == "CS889");
}

TEST_CASE("service and REPL emit identical turn documents") {
    Templates t = templates();
    std::string proposal = to_json(seminar_proposal()).dump();

    std::ostringstream repl_out;
    {
        Session s = masters_setup().start();
        std::istringstream in("propose-json " + proposal + "\naccept\naccept\nquit\n");
        CHECK(repl_loop(s, &t, in, repl_out, ReplOptions{true, false}) == 0);
    }

    RunningService service;
    auto cli = service.client();
    auto created = cli.Post("/sessions", "{}", "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    std::string id = Json::parse(created->body)["session"];
    std::string http_out;
    auto r1 = cli.Post(("/sessions/" + id + "/proposal").c_str(), proposal, "application/json");
    REQUIRE(r1);
    CHECK(r1->status == 200);
    http_out += r1->body + "\n";
    for (int i = 0; i < 2; ++i) {
        auto r = cli.Post(("/sessions/" + id + "/reaction").c_str(), R"({"reaction":"accept"})", "application/json");
        REQUIRE(r);
        http_out += r->body + "\n";
    }
    CHECK(repl_out.str() == http_out);

    auto state = cli.Get(("/sessions/" + id).c_str());
    REQUIRE(state);
    CHECK(Json::parse(state->body)["phase"] == "merged-idle");
    auto model = cli.Get(("/sessions/" + id + "/model").c_str());
    REQUIRE(model);
    CHECK(Json::parse(model->body)["proposed"].empty());
    auto explain = cli.Get(("/sessions/" + id + "/explain?action=Take-Course&parameter=_course").c_str());
    REQUIRE(explain);
    CHECK(explain->status == 200);
}

TEST_CASE("service errors") {
    RunningService service;
    auto cli = service.client();
    auto missing = cli.Get("/sessions/nope");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    CHECK(Json::parse(missing->body)["error"] == "unknown-session");

    auto created = cli.Post("/sessions", "{}", "application/json");
    std::string id = Json::parse(created->body)["session"];
    auto early = cli.Post(("/sessions/" + id + "/reaction").c_str(), R"({"reaction":"accept"})", "application/json");
    REQUIRE(early);
    CHECK(early->status == 409);
    CHECK(Json::parse(early->body)["phase"] == "awaiting-proposal");

    auto garbage = cli.Post(("/sessions/" + id + "/proposal").c_str(), "{not json", "application/json");
    REQUIRE(garbage);
    CHECK(garbage->status == 400);
    auto bad_term = cli.Post(("/sessions/" + id + "/proposal").c_str(),
                             R"({"actions":[{"key":"a","level":"domain","action":"Take-Course(U,"}]})",
                             "application/json");
    REQUIRE(bad_term);
    CHECK(bad_term->status == 400);
    auto no_param = cli.Get(("/sessions/" + id + "/explain?action=Take-Course").c_str());
    REQUIRE(no_param);
    CHECK(no_param->status == 400);
}

TEST_CASE("REPL reports usage errors and keeps going") {
    Session s = masters_setup().start();
    std::istringstream in("accept\npropose take-course U CS889 under satisfy-seminar-course\nbogus\nquit\n");
    std::ostringstream out;
    int failures = repl_loop(s, nullptr, in, out, ReplOptions{false, false});
    CHECK(failures == 2);
    CHECK(out.str().find("usage error:") != std::string::npos);
    CHECK(out.str().find("accepted-and-merged") != std::string::npos);
    CHECK(s.phase() == Phase::MergedIdle);
}

TEST_CASE("chain_for infers the missing requirement step") {
    DialogueModel m = existing_model(agreed_masters());
    Proposal p = chain_for(m, *advisement(), "take-course", {"U", "CS601"}, std::string("satisfy-theory-course"));
    REQUIRE(p.actions.size() == 2);
    CHECK(to_string(p.actions[0].action) == "Satisfy-Theory-Course(U,CS)");
    CHECK(to_string(p.actions[1].action) == "Take-Course(U,CS601)");
}

TEST_CASE("bundled scenarios pass against their goldens") {
    for (const char* name : {"seminar", "cs621", "belief", "recursion"}) {
        ScenarioReport report = run_scenario_file(data_path(std::string("scenarios/") + name + ".json"));
        CAPTURE(report.render());
        CHECK(report.passed());
        CHECK(report.golden_match == true);
    }
}

TEST_CASE("a wrong expectation fails the scenario") {
    std::ifstream in(data_path("scenarios/cs621.json"));
    Json script = Json::parse(in);
    script.erase("golden");
    script["steps"][1]["expect"]["verdict"]["better"] = "CS621";
    ScenarioReport report = run_scenario(script, data_path("scenarios"));
    CHECK_FALSE(report.passed());
    REQUIRE(report.expects.size() == 2);
    CHECK_FALSE(report.expects[0].passed);
    CHECK(report.expects[1].passed);
    CHECK(report.expects[0].diffs.front().find("better") != std::string::npos);

    CHECK(partial_diff(Json::parse(R"({"a":[1,2]})"), Json::parse(R"({"a":[1,2],"b":0})")).empty());
    CHECK_FALSE(partial_diff(Json::parse(R"({"a":[1]})"), Json::parse(R"({"a":[1,2]})")).empty());

    Json broken = Json::parse(R"({"name":"x","library":"../advisement.kb","steps":[{"dance":{}}]})");
    CHECK_THROWS_AS(run_scenario(broken, data_path("scenarios")), ProtocolError);
}

}
