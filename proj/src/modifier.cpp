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

#include "plannego/modifier.hpp"

#include <algorithm>

namespace plannego {

namespace {

constexpr std::size_t kMaxSupports = 2;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Literal positive(Term atom) { return Literal{std::move(atom), false}; }
Literal denial(Term atom) { return Literal{std::move(atom), true}; }

/// Ground arguments of `child` that the failed condition mentions. One
/// culprit means a bad parameter; anything else means a bad action.
std::optional<std::size_t> single_culprit(const IllFormed& v) {
    if (v.structural) return std::nullopt;
    std::optional<std::size_t> found;
    std::vector<Term> seen;
    for (std::size_t i = 0; i < v.child_action.arity(); ++i) {
        const Term& arg = v.child_action.args[i];
        if (!arg.is_ground() || count_occurrences(v.reason.atom, arg) == 0) continue;
        if (std::find(seen.begin(), seen.end(), arg) != seen.end()) continue;
        seen.push_back(arg);
        if (!found) found = i;
    }
    if (seen.size() != 1) return std::nullopt;
    return found;
}

std::vector<Literal> feature_supports(const CandidateScore& winner, const CandidateScore& loser) {
    std::vector<Literal> out;
    for (const auto& f : support_features(winner, loser)) {
        if (out.size() == kMaxSupports) break;
        out.push_back(positive(f.fact));
    }
    return out;
}

}  // namespace

std::string_view to_string(Specialization s) {
    switch (s) {
    case Specialization::CorrectNode: return "Correct-Node";
    case Specialization::CorrectRelation: return "Correct-Relation";
    case Specialization::ImproveAction: return "Improve-Action";
    case Specialization::ImproveParameter: return "Improve-Parameter";
    }
    return "?";
}

Specialization parse_specialization(std::string_view text) {
    for (auto s : {Specialization::CorrectNode, Specialization::CorrectRelation, Specialization::ImproveAction,
                   Specialization::ImproveParameter}) {
        if (to_string(s) == text) return s;
    }
    throw std::invalid_argument("unknown specialization '" + std::string(text) + "'");
}

std::string_view to_string(FrameState state) {
    switch (state) {
    case FrameState::AwaitingUser: return "awaiting-user";
    case FrameState::Resolved: return "resolved";
    case FrameState::Impasse: return "impasse";
    }
    return "?";
}

std::string_view to_string(FrameKind kind) {
    return kind == FrameKind::Negotiation ? "negotiation" : "system-proposal";
}

std::string_view to_string(ModificationKind kind) {
    switch (kind) {
    case ModificationKind::RemoveNode: return "remove-node";
    case ModificationKind::AlterNode: return "alter-node";
    case ModificationKind::Rebind: return "rebind";
    case ModificationKind::ReplaceAction: return "replace-action";
    case ModificationKind::RemoveSupport: return "remove-support";
    }
    return "?";
}

Specialization select_specialization(const Verdict& verdict) {
    return std::visit(overloaded{
                          [](const Accept&) -> Specialization {
                              throw GateError("select_specialization: the proposal was accepted");
                          },
                          [](const Infeasible&) { return Specialization::CorrectNode; },
                          [](const IllFormed&) { return Specialization::CorrectRelation; },
                          [](const SuboptimalAction&) { return Specialization::ImproveAction; },
                          [](const SuboptimalParameter&) { return Specialization::ImproveParameter; },
                          [](const BeliefConflict&) { return Specialization::CorrectRelation; },
                      },
                      verdict);
}

NegotiationFrame propose_resolution(const Verdict& verdict, const Library& /*library*/,
                                    const std::string& user_agent, const std::string& system_agent) {
    NegotiationFrame frame;
    frame.verdict = verdict;
    frame.specialization = select_specialization(verdict);
    frame.user_agent = user_agent;
    frame.system_agent = system_agent;

    std::visit(overloaded{
                   [](const Accept&) {},
                   [&](const IllFormed& v) {
                       frame.relation = "contributes";
                       frame.node1 = v.child_action;
                       frame.node2 = v.parent_action;
                       DiscourseAct act{denial(Term::compound("contributes", {v.child_action, v.parent_action})), {}};
                       if (v.reason != act.claim) act.supports.push_back(v.reason);
                       frame.acts.push_back(std::move(act));
                       if (auto pos = single_culprit(v)) {
                           frame.modification = {ModificationKind::AlterNode, v.child, *pos, std::nullopt, v.parent,
                                                 std::nullopt};
                       } else {
                           frame.modification = {ModificationKind::RemoveNode, v.child, 0, std::nullopt,
                                                 std::nullopt, std::nullopt};
                       }
                   },
                   [&](const Infeasible& v) {
                       frame.node1 = v.action;
                       frame.acts.push_back({denial(Term::compound("feasible", {v.action})), {v.reason}});
                       frame.modification = {ModificationKind::RemoveNode, v.node, 0, std::nullopt, std::nullopt,
                                             std::nullopt};
                   },
                   [&](const SuboptimalParameter& v) {
                       frame.node1 = v.action;
                       const CandidateScore& best = v.ranking.front();
                       auto current = std::find_if(v.ranking.begin(), v.ranking.end(),
                                                   [&](const CandidateScore& s) { return s.candidate == v.current; });
                       DiscourseAct act{positive(Term::compound("better-alternative", {v.better, v.current})), {}};
                       if (current != v.ranking.end()) act.supports = feature_supports(best, *current);
                       frame.acts.push_back(std::move(act));
                       frame.modification = {ModificationKind::Rebind, v.node, v.position, v.better, std::nullopt,
                                             std::nullopt};
                   },
                   [&](const SuboptimalAction& v) {
                       frame.node1 = v.action;
                       DiscourseAct act{positive(Term::compound("better-alternative", {v.better_action, v.action})),
                                        {}};
                       if (v.ranking.size() >= 2) act.supports = feature_supports(v.ranking[0], v.ranking[1]);
                       frame.acts.push_back(std::move(act));
                       frame.modification = {ModificationKind::ReplaceAction, v.node, 0, v.better_action,
                                             std::nullopt, std::nullopt};
                   },
                   [&](const BeliefConflict& v) {
                       frame.relation = "supports";
                       frame.node1 = v.from;
                       frame.node2 = v.to;
                       frame.acts.push_back({denial(Term::compound("supports", {v.from, v.to})), {}});
                       frame.modification = {ModificationKind::RemoveSupport, v.edge.to, 0, std::nullopt,
                                             std::nullopt, v.edge};
                   },
               },
               verdict);
    return frame;
}

NegotiationFrame resolve(NegotiationFrame frame, bool user_accepts) {
    if (frame.state != FrameState::AwaitingUser) {
        throw GateError("resolve: frame is " + std::string(to_string(frame.state)) + ", not awaiting the user");
    }
    if (user_accepts) frame.state = FrameState::Resolved;
    return frame;
}

namespace {

std::optional<Reinstantiation> insert_correction(const DialogueModel& model, NodeId parent_id, NodeId child_id,
                                                 std::size_t position, const Term& variable,
                                                 const Library& library, const UserModel& user,
                                                 const StrengthScale& scale) {
    const ActionNode* parent = model.find_action(parent_id);
    const ActionNode* child = model.find_action(child_id);
    if (!parent || !child) return std::nullopt;
    for (auto& pr : rank_parameters(*parent, *child, library, user, scale)) {
        if (pr.position != position) continue;
        Reinstantiation r{child_id, position, variable, std::move(pr.ranking), 0, {}};
        ActionNode offered = *child;
        offered.action.args[position] = r.value();
        WellFormedResult wf = well_formed(parent, offered, library);
        if (wf.contribution) r.satisfied = satisfied_constraints(*wf.contribution, library);
        return r;
    }
    return std::nullopt;
}

}  // namespace

ModificationResult apply_modification(const NegotiationFrame& frame, DialogueModel model, const Library& library,
                                      const UserModel& user, const StrengthScale& scale) {
    if (frame.state != FrameState::Resolved) {
        throw GateError("apply_modification: the conflict has not been squared away (frame is " +
                        std::string(to_string(frame.state)) + ")");
    }
    ModificationResult result{std::move(model), std::nullopt};
    DialogueModel& m = result.model;
    const PendingModification& mod = frame.modification;

    if (frame.kind == FrameKind::SystemProposal) {
        const Reinstantiation& r = *frame.reinstantiation;
        m.replace_everywhere(r.variable, r.value());
        return result;
    }

    switch (mod.kind) {
    case ModificationKind::RemoveNode:
        m.remove_node(mod.target);
        break;
    case ModificationKind::AlterNode: {
        Term variable = m.alter_node(mod.target, mod.position);
        if (mod.parent) {
            result.follow_up =
                insert_correction(m, *mod.parent, mod.target, mod.position, variable, library, user, scale);
        }
        if (!result.follow_up) m.remove_node(mod.target);
        break;
    }
    case ModificationKind::Rebind: {
        Term variable = m.alter_node(mod.target, mod.position);
        m.replace_everywhere(variable, *mod.replacement);
        break;
    }
    case ModificationKind::ReplaceAction: {
        const ActionNode* node = m.find_action(mod.target);
        if (!node) throw ModelError("replace-action: no node " + std::to_string(mod.target));
        ProposedAction replacement{"replacement", node->level, *mod.replacement, std::nullopt, {}};
        if (node->parent) replacement.parent = NodeRef{*node->parent};
        m.remove_node(mod.target);
        m.attach(Proposal{{replacement}, {}, {}});
        break;
    }
    case ModificationKind::RemoveSupport:
        m.remove_support(mod.edge->from, mod.edge->to);
        break;
    }
    return result;
}

NegotiationFrame propose_reinstantiation(const NegotiationFrame& origin, Reinstantiation reinstantiation,
                                         const DialogueModel& model) {
    NegotiationFrame frame;
    frame.kind = FrameKind::SystemProposal;
    frame.verdict = origin.verdict;
    frame.specialization = origin.specialization;
    frame.system_agent = origin.system_agent;
    frame.user_agent = origin.user_agent;
    frame.support_rounds = 1;
    frame.modification = PendingModification{ModificationKind::Rebind, reinstantiation.node,
                                             reinstantiation.position, reinstantiation.value(), std::nullopt,
                                             std::nullopt};
    Term offered;
    if (const ActionNode* node = model.find_action(reinstantiation.node)) {
        offered = node->action;
        offered.args[reinstantiation.position] = reinstantiation.value();
    } else {
        offered = reinstantiation.value();
    }
    frame.node1 = offered;
    DiscourseAct act{positive(Term::compound("proposed", {offered})), {}};
    for (const auto& c : reinstantiation.satisfied) {
        if (act.supports.size() == kMaxSupports) break;
        act.supports.push_back(c);
    }
    frame.acts.push_back(std::move(act));
    frame.reinstantiation = std::move(reinstantiation);
    return frame;
}

}  // namespace plannego
