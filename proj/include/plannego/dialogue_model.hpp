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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "plannego/term.hpp"

namespace plannego {

/// Illegal mutation or malformed proposal.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using NodeId = int;

enum class Level { Domain = 0, ProblemSolving = 1, Discourse = 2 };
enum class Status { Existing, Proposed };
enum class BeliefKind { MB, Mknowref };

/// Lifecycle of an Mknowref query. Superseded queries were made moot by a
/// detected conflict and are never answered.
enum class QueryState { Open, Answered, Superseded, Unanswerable };

std::string_view to_string(Level level);
std::string_view to_string(Status status);
std::string_view to_string(BeliefKind kind);
std::string_view to_string(QueryState state);
Level parse_level(std::string_view text);
BeliefKind parse_belief_kind(std::string_view text);

inline constexpr std::array<Level, 3> kActionLevels = {Level::Domain, Level::ProblemSolving,
                                                       Level::Discourse};

struct ActionNode {
    NodeId id = 0;
    Term action;
    Level level = Level::Domain;
    std::optional<NodeId> parent;
    std::vector<NodeId> children;
    Status status = Status::Proposed;

    friend bool operator==(const ActionNode&, const ActionNode&) = default;
};

struct BeliefNode {
    NodeId id = 0;
    BeliefKind kind = BeliefKind::MB;
    Term proposition;
    std::optional<Term> parameter;  // Mknowref: the term whose referent is sought
    std::string proposer;
    Status status = Status::Proposed;
    QueryState query = QueryState::Open;
    std::optional<NodeId> answered_by;

    /// Logical form, e.g. `MB(Teaches(Smith,CS601))` or
    /// `Mknowref(_fac,Teaches(_fac,AI))`.
    Term logical_form() const;

    friend bool operator==(const BeliefNode&, const BeliefNode&) = default;
};

/// `supports(from, to)` between two belief nodes.
struct SupportEdge {
    NodeId from = 0;
    NodeId to = 0;
    Status status = Status::Proposed;

    friend bool operator==(const SupportEdge&, const SupportEdge&) = default;
};

/// Cross-level contributes link: discourse to problem-solving, problem-solving
/// to domain, and discourse to the belief it conveys.
struct LevelLink {
    NodeId from = 0;
    NodeId to = 0;

    friend bool operator==(const LevelLink&, const LevelLink&) = default;
};

/// Reference from a proposal element to either another element (by key) or a
/// node already in the model (by id).
using NodeRef = std::variant<NodeId, std::string>;

struct ProposedAction {
    std::string key;
    Level level = Level::Domain;
    Term action;
    std::optional<NodeRef> parent;
    std::vector<NodeRef> contributes_to;
};

struct ProposedBelief {
    std::string key;
    BeliefKind kind = BeliefKind::MB;
    Term proposition;
    std::optional<Term> parameter;
    std::string proposer;
    std::optional<NodeRef> conveyed_by;
};

struct ProposedSupport {
    NodeRef from;
    NodeRef to;
};

/// A chain of actions and beliefs offered for addition to the shared plan.
struct Proposal {
    std::vector<ProposedAction> actions;
    std::vector<ProposedBelief> beliefs;
    std::vector<ProposedSupport> supports;

    bool empty() const { return actions.empty() && beliefs.empty() && supports.empty(); }
};

struct PendingQuery {
    NodeId id = 0;
    Term logical_form;
    QueryState state = QueryState::Open;

    friend bool operator==(const PendingQuery&, const PendingQuery&) = default;
};

/// Four-level dialogue model split into the existing (agreed) plan and the
/// proposed additions. Node ids are assigned monotonically.
class DialogueModel {
public:
    using ActionStore = std::map<NodeId, ActionNode>;
    using BeliefStore = std::map<NodeId, BeliefNode>;

    const ActionStore& level(Level level) const { return levels_[static_cast<std::size_t>(level)]; }
    const BeliefStore& beliefs() const noexcept { return beliefs_; }
    const std::vector<SupportEdge>& supports() const noexcept { return supports_; }
    const std::vector<LevelLink>& links() const noexcept { return links_; }

    const ActionNode* find_action(NodeId id) const;
    const BeliefNode* find_belief(NodeId id) const;
    bool contains(NodeId id) const;
    std::size_t node_count() const;

    /// Ids of every node (action or belief) with status proposed, ascending.
    std::vector<NodeId> proposed_ids() const;
    std::vector<SupportEdge> proposed_supports() const;

    /// Adds the proposal with status proposed. Returns key -> assigned id.
    /// Throws ModelError on a dangling reference or duplicate key.
    std::map<std::string, NodeId> attach(const Proposal& proposal);

    /// Marks every proposed node and edge existing.
    void merge_accepted();

    /// Replaces the ground argument at `position` of node `id`, and every
    /// other occurrence of that term in the model, by one fresh variable.
    Term alter_node(NodeId id, std::size_t position);

    /// Replaces every occurrence of `from` (all levels). Returns the count.
    std::size_t replace_everywhere(const Term& from, const Term& to);
    std::size_t count_everywhere(const Term& needle) const;

    /// Removes a proposed node with its proposed descendants and any proposed
    /// problem-solving intentions that contribute to removed domain actions.
    /// Discourse nodes are never removed.
    void remove_node(NodeId id);

    void remove_support(NodeId from, NodeId to);

    void set_query_state(NodeId query, QueryState state);
    /// Records `answer` (an existing MB conveyed by the system) for `query`.
    NodeId answer_query(NodeId query, Term answer, const std::string& proposer);

    /// Mknowref nodes without an answer, superseded ones included (flagged).
    std::vector<PendingQuery> pending_queries() const;

    Term fresh_variable();

    /// Invariant violations, empty when the model is consistent.
    std::vector<std::string> check_invariants() const;

    friend bool operator==(const DialogueModel&, const DialogueModel&) = default;

    /// Restores a model from its parts (snapshot import).
    static DialogueModel restore(std::vector<ActionNode> actions, std::vector<BeliefNode> beliefs,
                                 std::vector<SupportEdge> supports, std::vector<LevelLink> links,
                                 NodeId next_id, int next_variable);
    NodeId next_id() const noexcept { return next_id_; }
    int next_variable() const noexcept { return next_variable_; }

private:
    ActionStore& level_mut(Level level) { return levels_[static_cast<std::size_t>(level)]; }
    ActionNode* find_action_mut(NodeId id);

    std::array<ActionStore, 3> levels_;
    BeliefStore beliefs_;
    std::vector<SupportEdge> supports_;
    std::vector<LevelLink> links_;
    NodeId next_id_ = 1;
    int next_variable_ = 1;
};

}  // namespace plannego
