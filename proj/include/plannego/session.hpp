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

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "plannego/dialogue_model.hpp"
#include "plannego/evaluator.hpp"
#include "plannego/knowledge_base.hpp"
#include "plannego/modifier.hpp"

namespace plannego {

enum class Phase { AwaitingProposal, AwaitingReaction, MergedIdle, Impasse };
std::string_view to_string(Phase phase);

/// An operation called in a phase that does not allow it.
class PhaseError : public std::logic_error {
public:
    PhaseError(const std::string& message, Phase phase) : std::logic_error(message), phase_(phase) {}
    Phase phase() const noexcept { return phase_; }

private:
    Phase phase_;
};

struct UserReaction {
    bool accept = true;
    /// Beliefs and supports edges offered against the system's claim.
    std::optional<Proposal> counter;

    static UserReaction accept_claims() { return {true, std::nullopt}; }
    static UserReaction reject_claims(std::optional<Proposal> counter = std::nullopt) {
        return {false, std::move(counter)};
    }
};

enum class Outcome { AcceptedAndMerged, Negotiating, Impasse, Conceded };
std::string_view to_string(Outcome outcome);

struct AnsweredQuery {
    NodeId query = 0;
    Term question;  // Mknowref logical form
    NodeId answer = 0;
    Term answer_form;  // MB logical form

    friend bool operator==(const AnsweredQuery&, const AnsweredQuery&) = default;
};

struct SystemTurn {
    int turn = 0;
    Outcome outcome = Outcome::Negotiating;
    std::optional<Verdict> verdict;
    std::optional<Specialization> specialization;
    std::optional<FrameKind> frame_kind;
    std::vector<DiscourseAct> acts;
    std::vector<AnsweredQuery> answered_queries;
    std::vector<PendingQuery> dropped_queries;
    std::size_t stack_depth = 0;
    Phase phase = Phase::AwaitingProposal;
    DialogueModel model;

    friend bool operator==(const SystemTurn&, const SystemTurn&) = default;
};

using TurnInput = std::variant<Proposal, UserReaction>;

struct TranscriptEntry {
    TurnInput input;
    SystemTurn turn;
};

struct SessionOptions {
    EvaluationOptions evaluation;
    /// Claim+support rounds for a validity dispute before impasse.
    int max_support_rounds = 2;
    std::string system_agent = "S";
};

struct SessionState {
    Phase phase = Phase::AwaitingProposal;
    std::size_t stack_depth = 0;
    const DialogueModel* model = nullptr;
    const std::vector<NegotiationFrame>* stack = nullptr;
    const std::vector<TranscriptEntry>* transcript = nullptr;
};

/// One Propose-Evaluate-Modify conversation with one user.
class Session {
public:
    Session(std::shared_ptr<const Library> library, std::string user, SessionOptions options = {},
            DialogueModel initial = {});

    /// Attaches the proposal, evaluates it, and either merges it or opens a
    /// negotiation. Throws PhaseError unless a proposal is expected.
    SystemTurn submit_proposal(const Proposal& proposal);

    /// Throws PhaseError unless a reaction is expected.
    SystemTurn react(const UserReaction& reaction);

    SessionState state() const;
    Phase phase() const noexcept { return phase_; }
    std::size_t depth() const noexcept { return stack_.size(); }
    const DialogueModel& model() const noexcept { return model_; }
    const std::vector<NegotiationFrame>& stack() const noexcept { return stack_; }
    const std::vector<TranscriptEntry>& transcript() const noexcept { return transcript_; }
    const Library& library() const noexcept { return *library_; }
    const UserModel& user() const noexcept { return user_; }
    const SessionOptions& options() const noexcept { return options_; }

    /// Ranking for `parameter` (a recipe variable such as `_course`) of the
    /// most recent node named `action`, or of the recipe body step when no
    /// such node exists. Throws std::invalid_argument when nothing matches.
    std::vector<CandidateScore> explain(std::string_view action, std::string_view parameter) const;

    /// Re-runs the inputs of `transcript` on a fresh session.
    static Session replay(std::shared_ptr<const Library> library, std::string user, SessionOptions options,
                          DialogueModel initial, const std::vector<TranscriptEntry>& transcript);

private:
    SystemTurn evaluate_cycle(SystemTurn turn);
    SystemTurn open_frame(SystemTurn turn, NegotiationFrame frame);
    SystemTurn emit_top(SystemTurn turn);
    SystemTurn react_accept(SystemTurn turn);
    SystemTurn react_reject(SystemTurn turn, const UserReaction& reaction);
    SystemTurn finish(SystemTurn turn, TurnInput input);
    std::vector<AnsweredQuery> answer_queries(std::vector<PendingQuery>& unanswerable);

    std::shared_ptr<const Library> library_;
    UserModel user_;
    SessionOptions options_;
    DialogueModel model_;
    std::vector<NegotiationFrame> stack_;
    Phase phase_ = Phase::AwaitingProposal;
    std::vector<TranscriptEntry> transcript_;
};

/// A model whose existing part is `agreed`: the shared plan that earlier
/// dialogue established.
DialogueModel existing_model(const Proposal& agreed);

}  // namespace plannego
