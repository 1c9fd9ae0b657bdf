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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plannego/protocol.hpp"

namespace plannego {

/// Session construction parameters shared by the CLI, the service and
/// scenario scripts.
struct SessionSetup {
    std::shared_ptr<const Library> library;
    std::string user = "U";
    SessionOptions options;
    Proposal existing;  // agreed plan the session starts from

    Session start() const;
};

/// Reads `threshold`, `max_support_rounds` and `precondition_depth` from an
/// options object; absent keys keep the values already in `options`.
void apply_options(const Json& doc, SessionOptions& options);

struct ExpectResult {
    std::size_t step = 0;  // zero-based index into "steps"
    bool passed = false;
    std::vector<std::string> diffs;
};

struct ScenarioReport {
    std::string name;
    std::vector<ExpectResult> expects;
    std::optional<bool> golden_match;  // set when the script names a golden file
    std::vector<std::string> golden_diffs;
    Json transcript = Json::array();

    bool passed() const;
    std::string render() const;
};

/// Differences between `expected` (a partial document) and `actual`: every
/// key of an expected object must match, arrays must match element-wise.
std::vector<std::string> partial_diff(const Json& expected, const Json& actual, const std::string& path = "");

/// Runs a scenario script. Relative paths resolve against `base_dir`.
/// Throws ProtocolError naming the step for a malformed script.
ScenarioReport run_scenario(const Json& script, const std::filesystem::path& base_dir,
                            const Templates* templates = nullptr, bool update_golden = false);
ScenarioReport run_scenario_file(const std::filesystem::path& path, bool update_golden = false);

}  // namespace plannego
