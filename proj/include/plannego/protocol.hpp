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

// JSON documents of the session protocol. Schemas: docs/protocol.md.

#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "plannego/session.hpp"
#include "plannego/templates.hpp"

namespace plannego {

using Json = nlohmann::ordered_json;

/// A request document that does not follow the schema.
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json to_json(const CandidateScore& score);
Json to_json(const Verdict& verdict);
Json to_json(const DiscourseAct& act, const std::string& speaker, const Templates* templates);
Json to_json(const NegotiationFrame& frame, const Templates* templates);
Json to_json(const SystemTurn& turn, const Templates* templates);

/// Model snapshot: levels (level/status/action/children), beliefs,
/// supports, links, the proposed partition and the id counters.
Json model_snapshot(const DialogueModel& model);
DialogueModel model_from_snapshot(const Json& doc);

Json to_json(const Proposal& proposal);
Proposal proposal_from_json(const Json& doc);

Json to_json(const UserReaction& reaction);
UserReaction reaction_from_json(const Json& doc);

Json to_json(const TurnInput& input);

/// phase, stack depth, frames, model snapshot and transcript.
Json session_state(const Session& session, const Templates* templates);

/// Ranking explanation in score-table form.
Json explanation(const std::vector<CandidateScore>& ranking);

}  // namespace plannego
