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

#include "plannego/session.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <spdlog/spdlog.h>

namespace plannego {

std::string_view to_string(Phase phase) {
    switch (phase) {
    case Phase::AwaitingProposal: return "awaiting-proposal";
    case Phase::AwaitingReaction: return "awaiting-reaction";
    case Phase::MergedIdle: return "merged-idle";
    case Phase::Impasse: return "impasse";
    }
    return "?";
}

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
    case Outcome::AcceptedAndMerged: return "accepted-and-merged";
    case Outcome::Negotiating: return "negotiating";
    case Outcome::Impasse: return "impasse";
    case Outcome::Conceded: return "conceded";
    }
    return "?";
}

Session::Session(std::shared_ptr<const Library> library, std::string user, SessionOptions options,
                 DialogueModel initial)
    : library_(std::move(library)),
      user_(UserModel::of(*library_, std::move(user))),
      options_(std::move(options)),
      model_(std::move(initial)) {}

SessionState Session::state() const {
    return SessionState{phase_, stack_.size(), &model_, &stack_, &transcript_};
}

SystemTurn Session::submit_proposal(const Proposal& proposal) {
    if (phase_ != Phase::AwaitingProposal && phase_ != Phase::MergedIdle) {
        throw PhaseError("a proposal cannot be submitted while " + std::string(to_string(phase_)), phase_);
    }
    model_.attach(proposal);
    SystemTurn turn;
    turn = evaluate_cycle(std::move(turn));
    return finish(std::move(turn), proposal);
}

SystemTurn Session::react(const UserReaction& reaction) {
    if (phase_ != Phase::AwaitingReaction) {
        throw PhaseError("no claim is awaiting a reaction (session is " + std::string(to_string(phase_)) + ")",
                         phase_);
    }
    SystemTurn turn;
    turn = reaction.accept ? react_accept(std::move(turn)) : react_reject(std::move(turn), reaction);
    return finish(std::move(turn), reaction);
}

SystemTurn Session::finish(SystemTurn turn, TurnInput input) {
    turn.turn = static_cast<int>(transcript_.size()) + 1;
    turn.stack_depth = stack_.size();
    turn.phase = phase_;
    turn.model = model_;
    transcript_.push_back({std::move(input), turn});
    return turn;
}

SystemTurn Session::evaluate_cycle(SystemTurn turn) {
    // Merges happen only with every negotiation closed.
    if (!stack_.empty()) throw std::logic_error("evaluate_cycle with an open negotiation");
    Verdict verdict = evaluate(model_, *library_, user_, options_.evaluation);
    if (is_accept(verdict)) {
        model_.merge_accepted();
        std::vector<PendingQuery> unanswerable;
        turn.answered_queries = answer_queries(unanswerable);
        for (auto& q : unanswerable) turn.dropped_queries.push_back(std::move(q));
        if (turn.outcome != Outcome::Conceded) turn.outcome = Outcome::AcceptedAndMerged;
        turn.verdict = verdict;
        phase_ = Phase::MergedIdle;
        return turn;
    }
    NegotiationFrame frame = propose_resolution(verdict, *library_, user_.user, options_.system_agent);
    if (!is_improvement(frame.specialization)) {
        // A validity conflict makes the open questions of the proposal moot.
        for (const auto& q : model_.pending_queries()) {
            const BeliefNode* node = model_.find_belief(q.id);
            if (q.state != QueryState::Open || node->status != Status::Proposed) continue;
            model_.set_query_state(q.id, QueryState::Superseded);
            turn.dropped_queries.push_back({q.id, q.logical_form, QueryState::Superseded});
        }
    }
    turn.outcome = Outcome::Negotiating;
    return open_frame(std::move(turn), std::move(frame));
}

SystemTurn Session::open_frame(SystemTurn turn, NegotiationFrame frame) {
    stack_.push_back(std::move(frame));
    return emit_top(std::move(turn));
}

SystemTurn Session::emit_top(SystemTurn turn) {
    const NegotiationFrame& top = stack_.back();
    turn.outcome = Outcome::Negotiating;
    turn.verdict = top.verdict;
    turn.specialization = top.specialization;
    turn.frame_kind = top.kind;
    turn.acts = top.acts;
    phase_ = Phase::AwaitingReaction;
    return turn;
}

std::vector<AnsweredQuery> Session::answer_queries(std::vector<PendingQuery>& unanswerable) {
    std::vector<AnsweredQuery> out;
    for (const auto& q : model_.pending_queries()) {
        if (q.state != QueryState::Open) continue;
        const BeliefNode& node = *model_.find_belief(q.id);
        auto solutions = holds(Literal{node.proposition, false}, {}, *library_);
        std::optional<Term> answer;
        for (const auto& s : solutions) {
            Term candidate = substitute(node.proposition, s);
            if (candidate.is_ground()) {
                answer = std::move(candidate);
                break;
            }
        }
        if (!answer) {
            model_.set_query_state(q.id, QueryState::Unanswerable);
            unanswerable.push_back({q.id, q.logical_form, QueryState::Unanswerable});
            continue;
        }
        NodeId id = model_.answer_query(q.id, *answer, options_.system_agent);
        out.push_back({q.id, q.logical_form, id, model_.find_belief(id)->logical_form()});
    }
    return out;
}

SystemTurn Session::react_accept(SystemTurn turn) {
    NegotiationFrame frame = resolve(stack_.back(), true);
    ModificationResult result = apply_modification(frame, model_, *library_, user_, options_.evaluation.scale);
    stack_.pop_back();
    model_ = std::move(result.model);

    if (!stack_.empty()) {
        // Back in the enclosing negotiation: its claims are still pending.
        return emit_top(std::move(turn));
    }
    if (result.follow_up) {
        return open_frame(std::move(turn), propose_reinstantiation(frame, std::move(*result.follow_up), model_));
    }
    return evaluate_cycle(std::move(turn));
}

SystemTurn Session::react_reject(SystemTurn turn, const UserReaction& reaction) {
    if (reaction.counter && !reaction.counter->empty()) {
        std::vector<SupportEdge> before = model_.supports();
        model_.attach(*reaction.counter);
        std::vector<SupportEdge> added;
        for (const auto& e : model_.supports()) {
            if (std::find(before.begin(), before.end(), e) == before.end()) added.push_back(e);
        }
        Verdict verdict = evaluate_supports(model_, added, *library_, options_.evaluation);
        if (!is_accept(verdict)) {
            NegotiationFrame nested = propose_resolution(verdict, *library_, user_.user, options_.system_agent);
            return open_frame(std::move(turn), std::move(nested));
        }
        spdlog::debug("counter-proposal accepted; treating the rejection as a plain rejection");
    }

    NegotiationFrame& top = stack_.back();
    if (top.kind == FrameKind::SystemProposal) {
        Reinstantiation next = *top.reinstantiation;
        if (next.choice + 1 < next.ranking.size()) {
            ++next.choice;
            NegotiationFrame origin = top;
            stack_.pop_back();
            return open_frame(std::move(turn), propose_reinstantiation(origin, std::move(next), model_));
        }
        top.state = FrameState::Impasse;
        turn.outcome = Outcome::Impasse;
        phase_ = Phase::Impasse;
        turn.verdict = top.verdict;
        turn.specialization = top.specialization;
        turn.frame_kind = top.kind;
        return turn;
    }

    if (is_improvement(top.specialization)) {
        // Preferences are the user's prerogative: concede and never re-raise.
        const PendingModification& mod = top.modification;
        std::size_t position = top.specialization == Specialization::ImproveAction ? kWholeAction : mod.position;
        options_.evaluation.waived_optimality.insert({mod.target, position});
        stack_.pop_back();
        turn.outcome = Outcome::Conceded;
        if (!stack_.empty()) return emit_top(std::move(turn));
        return evaluate_cycle(std::move(turn));
    }

    if (top.support_rounds < options_.max_support_rounds) {
        ++top.support_rounds;
        return emit_top(std::move(turn));
    }
    top.state = FrameState::Impasse;
    phase_ = Phase::Impasse;
    turn.outcome = Outcome::Impasse;
    turn.verdict = top.verdict;
    turn.specialization = top.specialization;
    turn.frame_kind = top.kind;
    return turn;
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

}  // namespace

std::vector<CandidateScore> Session::explain(std::string_view action, std::string_view parameter) const {
    // Most recent node first.
    std::vector<const ActionNode*> nodes;
    for (Level level : kActionLevels) {
        for (const auto& [id, node] : model_.level(level)) {
            if (iequals(node.action.name, action) && node.parent) nodes.push_back(&node);
        }
    }
    std::sort(nodes.begin(), nodes.end(), [](const ActionNode* a, const ActionNode* b) { return a->id > b->id; });
    for (const ActionNode* node : nodes) {
        const ActionNode* parent = model_.find_action(*node->parent);
        for (auto& pr : rank_parameters(*parent, *node, *library_, user_, options_.evaluation.scale)) {
            if (pr.parameter == parameter) return std::move(pr.ranking);
        }
    }
    for (const Recipe& recipe : library_->recipes()) {
        for (const Term& step : recipe.body) {
            if (!iequals(step.name, action)) continue;
            for (const Term& arg : step.args) {
                if (!arg.is_variable() || arg.name != parameter) continue;
                auto found = candidates(recipe, parameter, {}, *library_);
                if (found.empty()) continue;
                return rank(found, step.name, user_.preferences, *library_, options_.evaluation.scale);
            }
        }
    }
    throw std::invalid_argument("nothing to explain for " + std::string(action) + " " + std::string(parameter));
}

DialogueModel existing_model(const Proposal& agreed) {
    DialogueModel model;
    model.attach(agreed);
    model.merge_accepted();
    return model;
}

Session Session::replay(std::shared_ptr<const Library> library, std::string user, SessionOptions options,
                        DialogueModel initial, const std::vector<TranscriptEntry>& transcript) {
    Session session(std::move(library), std::move(user), std::move(options), std::move(initial));
    for (const auto& entry : transcript) {
        if (const auto* p = std::get_if<Proposal>(&entry.input)) {
            session.submit_proposal(*p);
        } else {
            session.react(std::get<UserReaction>(entry.input));
        }
    }
    return session;
}

}  // namespace plannego
