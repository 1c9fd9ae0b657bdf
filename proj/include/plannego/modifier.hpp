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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "plannego/dialogue_model.hpp"
#include "plannego/evaluator.hpp"
#include "plannego/knowledge_base.hpp"
#include "plannego/ranking.hpp"

namespace plannego {

/// A frame operation attempted in the wrong state, e.g. modifying before
/// the conflict is squared away.
class GateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class Specialization { CorrectNode, CorrectRelation, ImproveAction, ImproveParameter };

std::string_view to_string(Specialization s);
Specialization parse_specialization(std::string_view text);
inline bool is_improvement(Specialization s) {
    return s == Specialization::ImproveAction || s == Specialization::ImproveParameter;
}

/// An Inform: the claim and up to two supporting propositions.
struct DiscourseAct {
    Literal claim;
    std::vector<Literal> supports;

    friend bool operator==(const DiscourseAct&, const DiscourseAct&) = default;
};

enum class FrameState { AwaitingUser, Resolved, Impasse };
std::string_view to_string(FrameState state);

/// Negotiation proper, or the follow-up system proposal issued by
/// Insert-Correction once the conflict itself is resolved.
enum class FrameKind { Negotiation, SystemProposal };
std::string_view to_string(FrameKind kind);

enum class ModificationKind { RemoveNode, AlterNode, Rebind, ReplaceAction, RemoveSupport };
std::string_view to_string(ModificationKind kind);

struct PendingModification {
    ModificationKind kind = ModificationKind::RemoveNode;
    NodeId target = 0;
    std::size_t position = 0;         // AlterNode, Rebind
    std::optional<Term> replacement;  // Rebind: the new argument; ReplaceAction: the new action
    std::optional<NodeId> parent;     // AlterNode: where Insert-Correction looks for candidates
    std::optional<SupportEdge> edge;  // RemoveSupport

    friend bool operator==(const PendingModification&, const PendingModification&) = default;
};

/// Variable left by Alter-Node and the value Insert-Correction offers for it.
struct Reinstantiation {
    NodeId node = 0;
    std::size_t position = 0;
    Term variable;
    std::vector<CandidateScore> ranking;  // best first
    std::size_t choice = 0;               // index into ranking
    std::vector<Literal> satisfied;       // constraints met by the offered value

    const Term& value() const { return ranking.at(choice).candidate; }

    friend bool operator==(const Reinstantiation&, const Reinstantiation&) = default;
};

struct NegotiationFrame {
    FrameKind kind = FrameKind::Negotiation;
    Verdict verdict;
    Specialization specialization = Specialization::CorrectRelation;
    std::vector<DiscourseAct> acts;
    FrameState state = FrameState::AwaitingUser;
    PendingModification modification;
    std::string system_agent = "S";  // _s1
    std::string user_agent = "U";    // _s2
    std::optional<std::string> relation;  // _rel
    std::optional<Term> node1;            // _node1, the child or supporting belief
    std::optional<Term> node2;            // _node2, the parent or supported belief
    int support_rounds = 1;
    std::optional<Reinstantiation> reinstantiation;  // SystemProposal frames

    friend bool operator==(const NegotiationFrame&, const NegotiationFrame&) = default;
};

/// Throws GateError on Accept.
Specialization select_specialization(const Verdict& verdict);

/// Frame in state awaiting-user whose acts argue for the system's view.
NegotiationFrame propose_resolution(const Verdict& verdict, const Library& library,
                                    const std::string& user_agent = "U",
                                    const std::string& system_agent = "S");

/// Accepting resolves the frame; rejecting leaves it awaiting the user.
/// Throws GateError unless the frame awaits the user.
NegotiationFrame resolve(NegotiationFrame frame, bool user_accepts);

struct ModificationResult {
    DialogueModel model;
    std::optional<Reinstantiation> follow_up;
};

/// Performs the frame's pending modification. Throws GateError unless the
/// frame is resolved.
ModificationResult apply_modification(const NegotiationFrame& frame, DialogueModel model,
                                      const Library& library, const UserModel& user,
                                      const StrengthScale& scale = {});

/// Frame presenting `reinstantiation.value()` as a system proposal.
NegotiationFrame propose_reinstantiation(const NegotiationFrame& origin, Reinstantiation reinstantiation,
                                         const DialogueModel& model);

}  // namespace plannego
