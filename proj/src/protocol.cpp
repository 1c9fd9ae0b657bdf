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

#include "plannego/protocol.hpp"

namespace plannego {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string text(const Term& t) { return to_string(t); }
std::string text(const Literal& l) { return to_string(l); }

Json optional_id(const std::optional<NodeId>& id) {
    return id ? Json(*id) : Json(nullptr);
}

Json literals(const std::vector<Literal>& items) {
    Json out = Json::array();
    for (const auto& l : items) out.push_back(text(l));
    return out;
}

Json ranking_json(const std::vector<CandidateScore>& ranking) {
    Json out = Json::array();
    for (const auto& s : ranking) out.push_back(to_json(s));
    return out;
}

const Json& field(const Json& doc, const char* name) {
    if (!doc.is_object() || !doc.contains(name)) {
        throw ProtocolError(std::string("missing field '") + name + "'");
    }
    return doc.at(name);
}

std::string string_field(const Json& doc, const char* name) {
    const Json& v = field(doc, name);
    if (!v.is_string()) throw ProtocolError(std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
}

NodeId id_field(const Json& doc, const char* name) {
    const Json& v = field(doc, name);
    if (!v.is_number_integer()) throw ProtocolError(std::string("field '") + name + "' must be an integer");
    return v.get<NodeId>();
}

std::optional<NodeId> optional_id_field(const Json& doc, const char* name) {
    if (!doc.contains(name) || doc.at(name).is_null()) return std::nullopt;
    return id_field(doc, name);
}

Term term_field(const Json& doc, const char* name) {
    return parse_term(string_field(doc, name));
}

NodeRef node_ref(const Json& v) {
    if (v.is_number_integer()) return v.get<NodeId>();
    if (v.is_string()) return v.get<std::string>();
    throw ProtocolError("a node reference is an existing node id or a proposal key");
}

Json node_ref_json(const NodeRef& ref) {
    return std::visit([](const auto& v) { return Json(v); }, ref);
}

QueryState parse_query_state(std::string_view s) {
    for (auto q : {QueryState::Open, QueryState::Answered, QueryState::Superseded, QueryState::Unanswerable}) {
        if (to_string(q) == s) return q;
    }
    throw ProtocolError("unknown query state '" + std::string(s) + "'");
}

Status parse_status(std::string_view s) {
    if (s == "existing") return Status::Existing;
    if (s == "proposed") return Status::Proposed;
    throw ProtocolError("unknown status '" + std::string(s) + "'");
}

Json edge_json(const SupportEdge& e) {
    return Json{{"from", e.from}, {"to", e.to}, {"status", to_string(e.status)}};
}

Json query_json(const PendingQuery& q) {
    return Json{{"query", q.id}, {"question", text(q.logical_form)}, {"state", to_string(q.state)}};
}

}  // namespace

Json to_json(const CandidateScore& score) {
    Json rows = Json::array();
    for (const auto& r : score.rows) {
        rows.push_back(Json{{"attribute", r.attribute},
                            {"strength", to_string(r.strength)},
                            {"strength_value", r.strength_value},
                            {"preferred", text(r.preferred)},
                            {"actual", r.actual ? Json(text(*r.actual)) : Json(nullptr)},
                            {"match", to_string(r.closeness)},
                            {"match_value", value_of(r.closeness)},
                            {"product", r.product}});
    }
    return Json{{"candidate", text(score.candidate)},
                {"rows", std::move(rows)},
                {"raw", score.raw},
                {"normalized", to_string(score.normalized)}};
}

Json to_json(const Verdict& verdict) {
    Json out{{"tag", verdict_tag(verdict)}};
    std::visit(overloaded{
                   [](const Accept&) {},
                   [&](const IllFormed& v) {
                       out["parent"] = v.parent;
                       out["child"] = v.child;
                       out["parent_action"] = text(v.parent_action);
                       out["child_action"] = text(v.child_action);
                       out["reason"] = text(v.reason);
                       out["structural"] = v.structural;
                   },
                   [&](const Infeasible& v) {
                       out["node"] = v.node;
                       out["action"] = text(v.action);
                       out["reason"] = text(v.reason);
                       out["kind"] = to_string(v.kind);
                   },
                   [&](const SuboptimalParameter& v) {
                       out["node"] = v.node;
                       out["action"] = text(v.action);
                       out["parameter"] = v.parameter;
                       out["position"] = v.position;
                       out["current"] = text(v.current);
                       out["better"] = text(v.better);
                       out["ranking"] = ranking_json(v.ranking);
                   },
                   [&](const SuboptimalAction& v) {
                       out["node"] = v.node;
                       out["action"] = text(v.action);
                       out["current_recipe"] = v.current_recipe;
                       out["better_recipe"] = v.better_recipe;
                       out["better_action"] = text(v.better_action);
                       out["ranking"] = ranking_json(v.ranking);
                   },
                   [&](const BeliefConflict& v) {
                       out["edge"] = Json{{"from", v.edge.from}, {"to", v.edge.to}};
                       out["from"] = text(v.from);
                       out["to"] = text(v.to);
                       out["reason"] = v.reason;
                   },
               },
               verdict);
    return out;
}

Json to_json(const DiscourseAct& act, const std::string& speaker, const Templates* templates) {
    Json supports = literals(act.supports);
    Json out{{"kind", "Inform"}, {"speaker", speaker}, {"claim", text(act.claim)}, {"supports", supports}};
    if (templates) {
        Json texts = Json::array();
        for (const auto& s : act.supports) texts.push_back(templates->render(s));
        out["text"] = templates->render(act.claim);
        out["support_text"] = std::move(texts);
    }
    return out;
}

Json to_json(const NegotiationFrame& frame, const Templates* templates) {
    Json acts = Json::array();
    for (const auto& a : frame.acts) acts.push_back(to_json(a, frame.system_agent, templates));
    const PendingModification& m = frame.modification;
    Json modification{{"kind", to_string(m.kind)}, {"target", m.target}};
    if (m.kind == ModificationKind::AlterNode || m.kind == ModificationKind::Rebind) modification["position"] = m.position;
    if (m.replacement) modification["replacement"] = text(*m.replacement);
    if (m.edge) modification["edge"] = Json{{"from", m.edge->from}, {"to", m.edge->to}};
    Json out{{"kind", to_string(frame.kind)},
             {"specialization", to_string(frame.specialization)},
             {"state", to_string(frame.state)},
             {"s1", frame.system_agent},
             {"s2", frame.user_agent},
             {"rel", frame.relation ? Json(*frame.relation) : Json(nullptr)},
             {"node1", frame.node1 ? Json(text(*frame.node1)) : Json(nullptr)},
             {"node2", frame.node2 ? Json(text(*frame.node2)) : Json(nullptr)},
             {"support_rounds", frame.support_rounds},
             {"verdict", to_json(frame.verdict)},
             {"acts", std::move(acts)},
             {"modification", std::move(modification)}};
    if (frame.reinstantiation) {
        const Reinstantiation& r = *frame.reinstantiation;
        out["reinstantiation"] = Json{{"node", r.node},
                                      {"position", r.position},
                                      {"variable", text(r.variable)},
                                      {"value", text(r.value())},
                                      {"choice", r.choice},
                                      {"ranking", ranking_json(r.ranking)}};
    }
    return out;
}

Json to_json(const SystemTurn& turn, const Templates* templates) {
    Json acts = Json::array();
    for (const auto& a : turn.acts) acts.push_back(to_json(a, "S", templates));
    Json answered = Json::array();
    for (const auto& q : turn.answered_queries) {
        Json item{{"query", q.query},
                  {"question", text(q.question)},
                  {"answer_node", q.answer},
                  {"answer", text(q.answer_form)}};
        if (templates) item["text"] = templates->render(Literal{q.answer_form.args.at(0), false});
        answered.push_back(std::move(item));
    }
    Json dropped = Json::array();
    for (const auto& q : turn.dropped_queries) dropped.push_back(query_json(q));
    return Json{{"turn", turn.turn},
                {"outcome", to_string(turn.outcome)},
                {"verdict", turn.verdict ? to_json(*turn.verdict) : Json(nullptr)},
                {"specialization", turn.specialization ? Json(to_string(*turn.specialization)) : Json(nullptr)},
                {"frame", turn.frame_kind ? Json(to_string(*turn.frame_kind)) : Json(nullptr)},
                {"acts", std::move(acts)},
                {"answered_queries", std::move(answered)},
                {"dropped_queries", std::move(dropped)},
                {"stack_depth", turn.stack_depth},
                {"phase", to_string(turn.phase)},
                {"model", model_snapshot(turn.model)}};
}

Json model_snapshot(const DialogueModel& model) {
    Json levels = Json::object();
    for (Level level : kActionLevels) {
        Json nodes = Json::array();
        for (const auto& [id, n] : model.level(level)) {
            nodes.push_back(Json{{"id", id},
                                 {"level", to_string(n.level)},
                                 {"status", to_string(n.status)},
                                 {"action", text(n.action)},
                                 {"parent", optional_id(n.parent)},
                                 {"children", n.children}});
        }
        levels[std::string(to_string(level))] = std::move(nodes);
    }
    Json beliefs = Json::array();
    for (const auto& [id, b] : model.beliefs()) {
        Json item{{"id", id},
                  {"kind", to_string(b.kind)},
                  {"proposition", text(b.proposition)},
                  {"parameter", b.parameter ? Json(text(*b.parameter)) : Json(nullptr)},
                  {"logical_form", text(b.logical_form())},
                  {"proposer", b.proposer},
                  {"status", to_string(b.status)}};
        if (b.kind == BeliefKind::Mknowref) {
            item["query"] = to_string(b.query);
            item["answered_by"] = optional_id(b.answered_by);
        }
        beliefs.push_back(std::move(item));
    }
    Json supports = Json::array();
    for (const auto& e : model.supports()) supports.push_back(edge_json(e));
    Json links = Json::array();
    for (const auto& l : model.links()) links.push_back(Json{{"from", l.from}, {"to", l.to}});
    Json pending = Json::array();
    for (const auto& q : model.pending_queries()) pending.push_back(query_json(q));
    return Json{{"levels", std::move(levels)},
                {"beliefs", std::move(beliefs)},
                {"supports", std::move(supports)},
                {"links", std::move(links)},
                {"proposed", model.proposed_ids()},
                {"pending_queries", std::move(pending)},
                {"next_id", model.next_id()},
                {"next_variable", model.next_variable()}};
}

DialogueModel model_from_snapshot(const Json& doc) {
    std::vector<ActionNode> actions;
    const Json& levels = field(doc, "levels");
    for (const auto& [name, nodes] : levels.items()) {
        Level level = parse_level(name);
        for (const auto& n : nodes) {
            ActionNode a;
            a.id = id_field(n, "id");
            a.level = level;
            a.status = parse_status(string_field(n, "status"));
            a.action = term_field(n, "action");
            a.parent = optional_id_field(n, "parent");
            a.children = field(n, "children").get<std::vector<NodeId>>();
            actions.push_back(std::move(a));
        }
    }
    std::vector<BeliefNode> beliefs;
    for (const auto& b : field(doc, "beliefs")) {
        BeliefNode node;
        node.id = id_field(b, "id");
        node.kind = parse_belief_kind(string_field(b, "kind"));
        node.proposition = term_field(b, "proposition");
        if (b.contains("parameter") && !b.at("parameter").is_null()) node.parameter = term_field(b, "parameter");
        node.proposer = string_field(b, "proposer");
        node.status = parse_status(string_field(b, "status"));
        if (b.contains("query")) node.query = parse_query_state(string_field(b, "query"));
        node.answered_by = optional_id_field(b, "answered_by");
        beliefs.push_back(std::move(node));
    }
    std::vector<SupportEdge> supports;
    for (const auto& e : field(doc, "supports")) {
        supports.push_back({id_field(e, "from"), id_field(e, "to"), parse_status(string_field(e, "status"))});
    }
    std::vector<LevelLink> links;
    for (const auto& l : field(doc, "links")) links.push_back({id_field(l, "from"), id_field(l, "to")});
    return DialogueModel::restore(std::move(actions), std::move(beliefs), std::move(supports), std::move(links),
                                  id_field(doc, "next_id"), id_field(doc, "next_variable"));
}

Json to_json(const Proposal& proposal) {
    Json actions = Json::array();
    for (const auto& a : proposal.actions) {
        Json item{{"key", a.key}, {"level", to_string(a.level)}, {"action", text(a.action)}};
        if (a.parent) item["parent"] = node_ref_json(*a.parent);
        if (!a.contributes_to.empty()) {
            Json refs = Json::array();
            for (const auto& r : a.contributes_to) refs.push_back(node_ref_json(r));
            item["contributes_to"] = std::move(refs);
        }
        actions.push_back(std::move(item));
    }
    Json beliefs = Json::array();
    for (const auto& b : proposal.beliefs) {
        Json item{{"key", b.key}, {"kind", to_string(b.kind)}, {"proposition", text(b.proposition)}};
        if (b.parameter) item["parameter"] = text(*b.parameter);
        item["proposer"] = b.proposer;
        if (b.conveyed_by) item["conveyed_by"] = node_ref_json(*b.conveyed_by);
        beliefs.push_back(std::move(item));
    }
    Json supports = Json::array();
    for (const auto& s : proposal.supports) {
        supports.push_back(Json{{"from", node_ref_json(s.from)}, {"to", node_ref_json(s.to)}});
    }
    return Json{{"actions", std::move(actions)}, {"beliefs", std::move(beliefs)}, {"supports", std::move(supports)}};
}

Proposal proposal_from_json(const Json& doc) {
    if (!doc.is_object()) throw ProtocolError("a proposal is a JSON object");
    Proposal p;
    try {
        for (const auto& a : doc.value("actions", Json::array())) {
            ProposedAction action;
            action.key = string_field(a, "key");
            action.level = a.contains("level") ? parse_level(string_field(a, "level")) : Level::Domain;
            action.action = term_field(a, "action");
            if (a.contains("parent") && !a.at("parent").is_null()) action.parent = node_ref(a.at("parent"));
            for (const auto& r : a.value("contributes_to", Json::array())) action.contributes_to.push_back(node_ref(r));
            p.actions.push_back(std::move(action));
        }
        for (const auto& b : doc.value("beliefs", Json::array())) {
            ProposedBelief belief;
            belief.key = string_field(b, "key");
            belief.kind = b.contains("kind") ? parse_belief_kind(string_field(b, "kind")) : BeliefKind::MB;
            belief.proposition = term_field(b, "proposition");
            if (b.contains("parameter")) belief.parameter = term_field(b, "parameter");
            belief.proposer = b.contains("proposer") ? string_field(b, "proposer") : "U";
            if (b.contains("conveyed_by") && !b.at("conveyed_by").is_null()) {
                belief.conveyed_by = node_ref(b.at("conveyed_by"));
            }
            p.beliefs.push_back(std::move(belief));
        }
        for (const auto& s : doc.value("supports", Json::array())) {
            p.supports.push_back({node_ref(field(s, "from")), node_ref(field(s, "to"))});
        }
    } catch (const ModelError& e) {
        throw ProtocolError(e.what());
    } catch (const Json::exception& e) {
        throw ProtocolError(e.what());
    }
    return p;
}

Json to_json(const UserReaction& reaction) {
    Json out{{"reaction", reaction.accept ? "accept" : "reject"}};
    if (reaction.counter) out["counter"] = to_json(*reaction.counter);
    return out;
}

UserReaction reaction_from_json(const Json& doc) {
    std::string kind = string_field(doc, "reaction");
    if (kind == "accept") return UserReaction::accept_claims();
    if (kind != "reject") throw ProtocolError("reaction must be 'accept' or 'reject'");
    if (doc.contains("counter") && !doc.at("counter").is_null()) {
        return UserReaction::reject_claims(proposal_from_json(doc.at("counter")));
    }
    return UserReaction::reject_claims();
}

Json to_json(const TurnInput& input) {
    return std::visit(overloaded{
                          [](const Proposal& p) { return Json{{"propose", to_json(p)}}; },
                          [](const UserReaction& r) { return Json{{"react", to_json(r)}}; },
                      },
                      input);
}

Json session_state(const Session& session, const Templates* templates) {
    Json stack = Json::array();
    for (const auto& f : session.stack()) stack.push_back(to_json(f, templates));
    Json transcript = Json::array();
    for (const auto& e : session.transcript()) {
        transcript.push_back(Json{{"input", to_json(e.input)}, {"turn", to_json(e.turn, templates)}});
    }
    return Json{{"phase", to_string(session.phase())},
                {"stack_depth", session.depth()},
                {"stack", std::move(stack)},
                {"model", model_snapshot(session.model())},
                {"transcript", std::move(transcript)}};
}

Json explanation(const std::vector<CandidateScore>& ranking) {
    Json out{{"ranking", ranking_json(ranking)}};
    Json tables = Json::array();
    for (const auto& s : ranking) tables.push_back(render_table(s));
    out["tables"] = std::move(tables);
    return out;
}

}  // namespace plannego
