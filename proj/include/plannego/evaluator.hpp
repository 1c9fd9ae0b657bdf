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

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "plannego/dialogue_model.hpp"
#include "plannego/knowledge_base.hpp"
#include "plannego/ranking.hpp"

namespace plannego {

struct Accept {
    friend bool operator==(const Accept&, const Accept&) = default;
};

/// `child` does not contribute to `parent`. `reason` is the denied
/// condition, e.g. `not seminar-course(AI)`. `structural` is set when no
/// recipe body of the parent mentions the child's action at all.
struct IllFormed {
    NodeId parent = 0;
    NodeId child = 0;
    Term parent_action;
    Term child_action;
    Literal reason;
    bool structural = false;

    friend bool operator==(const IllFormed&, const IllFormed&) = default;
};

enum class FeasibilityFailure { Applicability, PreconditionUnsatisfiable };

std::string_view to_string(FeasibilityFailure kind);

struct Infeasible {
    NodeId node = 0;
    Term action;
    Literal reason;
    FeasibilityFailure kind = FeasibilityFailure::Applicability;

    friend bool operator==(const Infeasible&, const Infeasible&) = default;
};

struct SuboptimalParameter {
    NodeId node = 0;
    Term action;
    std::string parameter;  // recipe variable, e.g. _course
    std::size_t position = 0;
    Term current;
    Term better;
    std::vector<CandidateScore> ranking;

    friend bool operator==(const SuboptimalParameter&, const SuboptimalParameter&) = default;
};

struct SuboptimalAction {
    NodeId node = 0;
    Term action;
    std::string current_recipe;
    std::string better_recipe;
    Term better_action;
    std::vector<CandidateScore> ranking;  // champion first, then the current choice

    friend bool operator==(const SuboptimalAction&, const SuboptimalAction&) = default;
};

struct BeliefConflict {
    SupportEdge edge;
    Term from;  // supporting proposition
    Term to;    // supported proposition
    std::string reason;

    friend bool operator==(const BeliefConflict&, const BeliefConflict&) = default;
};

using Verdict = std::variant<Accept, IllFormed, Infeasible, SuboptimalParameter, SuboptimalAction, BeliefConflict>;

std::string_view verdict_tag(const Verdict& verdict);
inline bool is_accept(const Verdict& v) { return std::holds_alternative<Accept>(v); }

enum class CheckKind { WellFormed, Feasible, Optimal, BeliefSupport };

std::string_view to_string(CheckKind kind);

/// One individual check performed during evaluate(); reported to the
/// optional observer in visiting order.
struct CheckEvent {
    NodeId node = 0;  // for BeliefSupport: the supported belief
    std::optional<NodeId> parent;
    CheckKind check = CheckKind::WellFormed;
    bool passed = true;
};

/// Position marking a conceded action-level optimality dispute in
/// EvaluationOptions::waived_optimality.
inline constexpr std::size_t kWholeAction = static_cast<std::size_t>(-1);

struct EvaluationOptions {
    Rational threshold{1, 4};
    int precondition_depth = 1;
    StrengthScale scale;
    /// (node, argument position) pairs whose optimality the system conceded.
    std::set<std::pair<NodeId, std::size_t>> waived_optimality;
    std::function<void(const CheckEvent&)> observer;
};

/// Recipe match establishing that a child contributes to its parent.
struct Contribution {
    const Recipe* recipe = nullptr;
    std::string suffix;         // variable renaming applied to the recipe
    std::size_t body_index = 0;
    Substitution header_bindings;
    Substitution bindings;      // header and body-step bindings, before constraints
};

struct WellFormedResult {
    bool passed = false;
    Literal reason;  // meaningful when !passed
    bool structural = false;
    std::optional<Contribution> contribution;
};

struct FeasibilityResult {
    bool passed = false;
    Literal reason;
    FeasibilityFailure kind = FeasibilityFailure::Applicability;
};

struct SupportResult {
    bool passed = false;
    std::string reason;
};

WellFormedResult well_formed(const ActionNode* parent, const ActionNode& child, const Library& library);

/// The contributing recipe's constraints under their first solution.
std::vector<Literal> satisfied_constraints(const Contribution& contribution, const Library& library);
FeasibilityResult feasible(const ActionNode& node, const Library& library, int precondition_depth = 1);
SupportResult belief_supported(const BeliefNode& from, const BeliefNode& to, const Library& library);

/// Verdict for the highest failing check over the proposed partition, or
/// Accept. Pure: the model is not modified.
Verdict evaluate(const DialogueModel& model, const Library& library, const UserModel& user,
                 const EvaluationOptions& options = {});

/// Belief-level pass over `edges` only, highest supported belief first.
Verdict evaluate_supports(const DialogueModel& model, std::vector<SupportEdge> edges,
                          const Library& library, const EvaluationOptions& options = {});

/// Ranked alternatives for the constraint-introduced argument of `child`
/// under its parent's recipe. Empty when the argument is not rankable.
struct ParameterRanking {
    std::string parameter;
    std::size_t position = 0;
    std::vector<Term> candidates;
    std::vector<CandidateScore> ranking;
};
std::vector<ParameterRanking> rank_parameters(const ActionNode& parent, const ActionNode& child,
                                              const Library& library, const UserModel& user,
                                              const StrengthScale& scale = {});

}  // namespace plannego
