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

#include "plannego/dialogue_model.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace plannego {

std::string_view to_string(Level level) {
    switch (level) {
    case Level::Domain: return "domain";
    case Level::ProblemSolving: return "problem-solving";
    case Level::Discourse: return "discourse";
    }
    return "?";
}

std::string_view to_string(Status status) {
    return status == Status::Existing ? "existing" : "proposed";
}

std::string_view to_string(BeliefKind kind) {
    return kind == BeliefKind::MB ? "MB" : "Mknowref";
}

std::string_view to_string(QueryState state) {
    switch (state) {
    case QueryState::Open: return "open";
    case QueryState::Answered: return "answered";
    case QueryState::Superseded: return "superseded";
    case QueryState::Unanswerable: return "unanswerable";
    }
    return "?";
}

Level parse_level(std::string_view text) {
    for (Level l : kActionLevels) {
        if (to_string(l) == text) return l;
    }
    throw ModelError("unknown level '" + std::string(text) + "'");
}

BeliefKind parse_belief_kind(std::string_view text) {
    if (text == "MB") return BeliefKind::MB;
    if (text == "Mknowref") return BeliefKind::Mknowref;
    throw ModelError("unknown belief kind '" + std::string(text) + "'");
}

Term BeliefNode::logical_form() const {
    if (kind == BeliefKind::MB) {
        return Term::compound("MB", {proposition});
    }
    return Term::compound("Mknowref", {parameter.value_or(Term::variable("_")), proposition});
}

// ---------------------------------------------------------------------------

const ActionNode* DialogueModel::find_action(NodeId id) const {
    for (const auto& store : levels_) {
        auto it = store.find(id);
        if (it != store.end()) return &it->second;
    }
    return nullptr;
}

ActionNode* DialogueModel::find_action_mut(NodeId id) {
    for (auto& store : levels_) {
        auto it = store.find(id);
        if (it != store.end()) return &it->second;
    }
    return nullptr;
}

const BeliefNode* DialogueModel::find_belief(NodeId id) const {
    auto it = beliefs_.find(id);
    return it == beliefs_.end() ? nullptr : &it->second;
}

bool DialogueModel::contains(NodeId id) const {
    return find_action(id) || find_belief(id);
}

std::size_t DialogueModel::node_count() const {
    std::size_t n = beliefs_.size();
    for (const auto& store : levels_) n += store.size();
    return n;
}

std::vector<NodeId> DialogueModel::proposed_ids() const {
    std::vector<NodeId> ids;
    for (const auto& store : levels_) {
        for (const auto& [id, node] : store) {
            if (node.status == Status::Proposed) ids.push_back(id);
        }
    }
    for (const auto& [id, node] : beliefs_) {
        if (node.status == Status::Proposed) ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<SupportEdge> DialogueModel::proposed_supports() const {
    std::vector<SupportEdge> out;
    std::copy_if(supports_.begin(), supports_.end(), std::back_inserter(out),
                 [](const SupportEdge& e) { return e.status == Status::Proposed; });
    return out;
}

namespace {

struct DisjointSets {
    std::map<NodeId, NodeId> parent;

    NodeId find(NodeId x) {
        auto it = parent.find(x);
        if (it == parent.end()) {
            parent[x] = x;
            return x;
        }
        if (it->second == x) return x;
        NodeId root = find(it->second);
        parent[x] = root;
        return root;
    }
    void join(NodeId a, NodeId b) { parent[find(a)] = find(b); }
};

}  // namespace

std::map<std::string, NodeId> DialogueModel::attach(const Proposal& proposal) {
    if (proposal.empty()) {
        return {};
    }
    DialogueModel next = *this;
    std::map<std::string, NodeId> ids;
    for (const auto& a : proposal.actions) {
        if (a.key.empty() || !ids.emplace(a.key, next.next_id_++).second) {
            throw ModelError("duplicate or empty node key '" + a.key + "' in proposal");
        }
    }
    for (const auto& b : proposal.beliefs) {
        if (b.key.empty() || !ids.emplace(b.key, next.next_id_++).second) {
            throw ModelError("duplicate or empty node key '" + b.key + "' in proposal");
        }
    }
    auto resolve = [&](const NodeRef& ref) -> NodeId {
        if (const auto* key = std::get_if<std::string>(&ref)) {
            auto it = ids.find(*key);
            if (it == ids.end()) throw ModelError("proposal references unknown key '" + *key + "'");
            return it->second;
        }
        NodeId id = std::get<NodeId>(ref);
        if (!contains(id)) {
            throw ModelError("dangling attachment: node " + std::to_string(id) + " does not exist");
        }
        return id;
    };

    DisjointSets components;
    for (const auto& a : proposal.actions) {
        NodeId id = ids.at(a.key);
        components.find(id);
        if (!a.action.is_compound()) throw ModelError("action must be a compound term: " + a.key);
        next.level_mut(a.level).emplace(id, ActionNode{id, a.action, a.level, std::nullopt, {}, Status::Proposed});
    }
    for (const auto& b : proposal.beliefs) {
        NodeId id = ids.at(b.key);
        components.find(id);
        if (b.kind == BeliefKind::Mknowref && !b.parameter) {
            throw ModelError("Mknowref belief '" + b.key + "' needs a parameter");
        }
        next.beliefs_.emplace(id, BeliefNode{id, b.kind, b.proposition, b.parameter, b.proposer,
                                             Status::Proposed, QueryState::Open, std::nullopt});
    }
    for (const auto& a : proposal.actions) {
        NodeId id = ids.at(a.key);
        ActionNode& node = *next.find_action_mut(id);
        if (a.parent) {
            NodeId parent_id = resolve(*a.parent);
            ActionNode* parent = next.find_action_mut(parent_id);
            if (!parent || parent->level != a.level) {
                throw ModelError("parent of '" + a.key + "' must be an action on the same level");
            }
            node.parent = parent_id;
            parent->children.push_back(id);
            components.join(id, parent_id);
        }
        for (const auto& target_ref : a.contributes_to) {
            NodeId target = resolve(target_ref);
            const ActionNode* t = next.find_action(target);
            if (!t || static_cast<int>(t->level) != static_cast<int>(a.level) - 1) {
                throw ModelError("'" + a.key + "' may only contribute to an action one level down");
            }
            next.links_.push_back({id, target});
            components.join(id, target);
        }
    }
    for (const auto& b : proposal.beliefs) {
        if (!b.conveyed_by) continue;
        NodeId id = ids.at(b.key);
        NodeId source = resolve(*b.conveyed_by);
        const ActionNode* s = next.find_action(source);
        if (!s || s->level != Level::Discourse) {
            throw ModelError("belief '" + b.key + "' must be conveyed by a discourse action");
        }
        next.links_.push_back({source, id});
        components.join(id, source);
    }
    for (const auto& e : proposal.supports) {
        NodeId from = resolve(e.from);
        NodeId to = resolve(e.to);
        if (!next.find_belief(from) || !next.find_belief(to) || from == to) {
            throw ModelError("supports edges must connect two distinct belief nodes");
        }
        next.supports_.push_back({from, to, Status::Proposed});
        components.join(from, to);
    }
    std::set<NodeId> roots;
    for (const auto& [key, id] : ids) roots.insert(components.find(id));
    if (roots.size() > 1) {
        throw ModelError("proposal is not a connected chain");
    }
    if (auto problems = next.check_invariants(); !problems.empty()) {
        throw ModelError("proposal violates model invariants: " + problems.front());
    }
    *this = std::move(next);
    return ids;
}

void DialogueModel::merge_accepted() {
    for (auto& store : levels_) {
        for (auto& [id, node] : store) node.status = Status::Existing;
    }
    for (auto& [id, node] : beliefs_) node.status = Status::Existing;
    for (auto& e : supports_) e.status = Status::Existing;
}

Term DialogueModel::fresh_variable() {
    for (;;) {
        Term v = Term::variable("_v" + std::to_string(next_variable_++));
        if (count_everywhere(v) == 0) return v;
    }
}

std::size_t DialogueModel::replace_everywhere(const Term& from, const Term& to) {
    std::size_t n = 0;
    for (auto& store : levels_) {
        for (auto& [id, node] : store) n += replace_all(node.action, from, to);
    }
    for (auto& [id, node] : beliefs_) {
        n += replace_all(node.proposition, from, to);
        if (node.parameter) n += replace_all(*node.parameter, from, to);
    }
    return n;
}

std::size_t DialogueModel::count_everywhere(const Term& needle) const {
    std::size_t n = 0;
    for (const auto& store : levels_) {
        for (const auto& [id, node] : store) n += count_occurrences(node.action, needle);
    }
    for (const auto& [id, node] : beliefs_) {
        n += count_occurrences(node.proposition, needle);
        if (node.parameter) n += count_occurrences(*node.parameter, needle);
    }
    return n;
}

Term DialogueModel::alter_node(NodeId id, std::size_t position) {
    const ActionNode* node = find_action(id);
    if (!node) throw ModelError("alter: no action node " + std::to_string(id));
    if (position >= node->action.arity()) {
        throw ModelError("alter: node " + std::to_string(id) + " has no parameter " + std::to_string(position));
    }
    Term target = node->action.args[position];
    if (!target.is_ground()) {
        throw ModelError("alter: parameter " + std::to_string(position) + " of node " +
                         std::to_string(id) + " is already a variable");
    }
    Term var = fresh_variable();
    replace_everywhere(target, var);
    return var;
}

void DialogueModel::remove_node(NodeId id) {
    const ActionNode* node = find_action(id);
    if (!node) throw ModelError("remove: no action node " + std::to_string(id));
    if (node->status != Status::Proposed) {
        throw ModelError("remove: node " + std::to_string(id) + " is part of the existing model");
    }
    if (node->level == Level::Discourse) {
        throw ModelError("remove: discourse actions have already been executed");
    }
    std::set<NodeId> doomed;
    std::vector<NodeId> work{id};
    while (!work.empty()) {
        NodeId current = work.back();
        work.pop_back();
        if (!doomed.insert(current).second) continue;
        const ActionNode* n = find_action(current);
        for (NodeId child : n->children) {
            if (find_action(child)->status == Status::Proposed) work.push_back(child);
        }
        if (n->level == Level::Domain) {
            for (const auto& link : links_) {
                const ActionNode* from = link.to == current ? find_action(link.from) : nullptr;
                if (from && from->level == Level::ProblemSolving && from->status == Status::Proposed) {
                    work.push_back(from->id);
                }
            }
        }
    }
    for (NodeId d : doomed) {
        const ActionNode* n = find_action(d);
        if (n->parent && !doomed.count(*n->parent)) {
            auto& siblings = find_action_mut(*n->parent)->children;
            siblings.erase(std::remove(siblings.begin(), siblings.end(), d), siblings.end());
        }
    }
    for (NodeId d : doomed) {
        level_mut(find_action(d)->level).erase(d);
    }
    links_.erase(std::remove_if(links_.begin(), links_.end(),
                                [&](const LevelLink& l) { return doomed.count(l.from) || doomed.count(l.to); }),
                 links_.end());
}

void DialogueModel::remove_support(NodeId from, NodeId to) {
    auto it = std::find_if(supports_.begin(), supports_.end(),
                           [&](const SupportEdge& e) { return e.from == from && e.to == to; });
    if (it == supports_.end()) {
        throw ModelError("no supports edge " + std::to_string(from) + " -> " + std::to_string(to));
    }
    supports_.erase(it);
}

void DialogueModel::set_query_state(NodeId query, QueryState state) {
    auto it = beliefs_.find(query);
    if (it == beliefs_.end() || it->second.kind != BeliefKind::Mknowref) {
        throw ModelError("node " + std::to_string(query) + " is not an Mknowref query");
    }
    it->second.query = state;
}

NodeId DialogueModel::answer_query(NodeId query, Term answer, const std::string& proposer) {
    set_query_state(query, QueryState::Answered);
    NodeId id = next_id_++;
    beliefs_.emplace(id, BeliefNode{id, BeliefKind::MB, std::move(answer), std::nullopt, proposer,
                                    Status::Existing, QueryState::Open, std::nullopt});
    beliefs_.at(query).answered_by = id;
    return id;
}

std::vector<PendingQuery> DialogueModel::pending_queries() const {
    std::vector<PendingQuery> out;
    for (const auto& [id, node] : beliefs_) {
        if (node.kind == BeliefKind::Mknowref && !node.answered_by) {
            out.push_back({id, node.logical_form(), node.query});
        }
    }
    return out;
}

std::vector<std::string> DialogueModel::check_invariants() const {
    std::vector<std::string> problems;
    auto note = [&](std::string s) { problems.push_back(std::move(s)); };
    for (const auto& store : levels_) {
        for (const auto& [id, node] : store) {
            if (node.id != id) note("node key mismatch at " + std::to_string(id));
            if (node.parent) {
                const ActionNode* p = find_action(*node.parent);
                if (!p) {
                    note("node " + std::to_string(id) + " has a missing parent");
                } else if (std::count(p->children.begin(), p->children.end(), id) != 1) {
                    note("parent of " + std::to_string(id) + " does not list it as a child");
                }
            }
            for (NodeId c : node.children) {
                const ActionNode* child = find_action(c);
                if (!child || child->parent != id) {
                    note("child link " + std::to_string(id) + " -> " + std::to_string(c) + " is inconsistent");
                } else if (node.status == Status::Proposed && child->status == Status::Existing) {
                    note("proposed node " + std::to_string(id) + " has an existing child");
                }
            }
            // Acyclicity: walking up must terminate.
            std::set<NodeId> seen{id};
            std::optional<NodeId> up = node.parent;
            while (up) {
                if (!seen.insert(*up).second) {
                    note("cycle through node " + std::to_string(id));
                    break;
                }
                const ActionNode* p = find_action(*up);
                up = p ? p->parent : std::nullopt;
            }
        }
    }
    for (const auto& link : links_) {
        if (!contains(link.from) || !contains(link.to)) {
            note("level link " + std::to_string(link.from) + " -> " + std::to_string(link.to) + " is dangling");
        }
    }
    std::map<NodeId, std::vector<NodeId>> out_edges;
    for (const auto& e : supports_) {
        if (!find_belief(e.from) || !find_belief(e.to)) {
            note("supports edge " + std::to_string(e.from) + " -> " + std::to_string(e.to) + " is dangling");
        }
        out_edges[e.from].push_back(e.to);
    }
    // Support graph must be acyclic.
    std::map<NodeId, int> colour;
    std::function<bool(NodeId)> cyclic = [&](NodeId n) {
        colour[n] = 1;
        for (NodeId m : out_edges[n]) {
            if (colour[m] == 1 || (colour[m] == 0 && cyclic(m))) return true;
        }
        colour[n] = 2;
        return false;
    };
    for (const auto& [n, _] : out_edges) {
        if (colour[n] == 0 && cyclic(n)) {
            note("supports edges form a cycle");
            break;
        }
    }
    return problems;
}

DialogueModel DialogueModel::restore(std::vector<ActionNode> actions, std::vector<BeliefNode> beliefs,
                                     std::vector<SupportEdge> supports, std::vector<LevelLink> links,
                                     NodeId next_id, int next_variable) {
    DialogueModel model;
    for (auto& a : actions) {
        NodeId id = a.id;
        model.level_mut(a.level).emplace(id, std::move(a));
    }
    for (auto& b : beliefs) {
        NodeId id = b.id;
        model.beliefs_.emplace(id, std::move(b));
    }
    model.supports_ = std::move(supports);
    model.links_ = std::move(links);
    model.next_id_ = next_id;
    model.next_variable_ = next_variable;
    if (auto problems = model.check_invariants(); !problems.empty()) {
        throw ModelError("snapshot violates model invariants: " + problems.front());
    }
    return model;
}

}  // namespace plannego
