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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "plannego/protocol.hpp"

namespace plannego {

struct ReplOptions {
    bool json = false;    // print SystemTurn documents instead of prose
    bool prompt = true;
};

/// Proposal for `action(args)`. With `under`, the action is placed below
/// the latest node of that name, or below a new node of that name that is
/// itself placed under an existing node whose recipe mentions it.
/// Action names match recipe names case-insensitively.
Proposal chain_for(const DialogueModel& model, const Library& library, const std::string& action,
                   const std::vector<std::string>& args, const std::optional<std::string>& under);

/// Reads commands from `in` until `quit` or end of input. Returns the number
/// of commands that failed.
int repl_loop(Session& session, const Templates* templates, std::istream& in, std::ostream& out,
              const ReplOptions& options = {});

}  // namespace plannego
