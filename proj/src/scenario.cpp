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

#include "plannego/scenario.hpp"

#include <fstream>
#include <sstream>

namespace plannego {

Session SessionSetup::start() const {
    return Session(library, user, options, existing_model(existing));
}

void apply_options(const Json& doc, SessionOptions& options) {
    if (!doc.is_object()) throw ProtocolError("options must be an object");
    if (doc.contains("threshold")) {
        const Json& t = doc.at("threshold");
        try {
            options.evaluation.threshold = parse_rational(t.is_string() ? t.get<std::string>() : t.dump());
        } catch (const std::invalid_argument& e) {
            throw ProtocolError(e.what());
        }
    }
    if (doc.contains("max_support_rounds")) options.max_support_rounds = doc.at("max_support_rounds").get<int>();
    if (doc.contains("precondition_depth")) {
        options.evaluation.precondition_depth = doc.at("precondition_depth").get<int>();
    }
}

bool ScenarioReport::passed() const {
    for (const auto& e : expects) {
        if (!e.passed) return false;
    }
    return golden_match.value_or(true);
}

std::string ScenarioReport::render() const {
    std::ostringstream out;
    for (const auto& e : expects) {
        out << name << " step " << e.step << ": " << (e.passed ? "pass" : "FAIL") << "\n";
        for (const auto& d : e.diffs) out << "    " << d << "\n";
    }
    if (golden_match) {
        out << name << " golden: " << (*golden_match ? "pass" : "FAIL") << "\n";
        for (const auto& d : golden_diffs) out << "    " << d << "\n";
    }
    return out.str();
}

std::vector<std::string> partial_diff(const Json& expected, const Json& actual, const std::string& path) {
    std::vector<std::string> diffs;
    std::string where = path.empty() ? "/" : path;
    if (expected.is_object()) {
        if (!actual.is_object()) {
            diffs.push_back(where + ": expected an object, got " + actual.dump());
            return diffs;
        }
        for (const auto& [key, value] : expected.items()) {
            if (!actual.contains(key)) {
                diffs.push_back(path + "/" + key + ": missing");
                continue;
            }
            auto sub = partial_diff(value, actual.at(key), path + "/" + key);
            diffs.insert(diffs.end(), sub.begin(), sub.end());
        }
        return diffs;
    }
    if (expected.is_array()) {
        if (!actual.is_array() || actual.size() != expected.size()) {
            diffs.push_back(where + ": expected " + expected.dump() + ", got " + actual.dump());
            return diffs;
        }
        for (std::size_t i = 0; i < expected.size(); ++i) {
            auto sub = partial_diff(expected[i], actual[i], path + "/" + std::to_string(i));
            diffs.insert(diffs.end(), sub.begin(), sub.end());
        }
        return diffs;
    }
    if (expected != actual) diffs.push_back(where + ": expected " + expected.dump() + ", got " + actual.dump());
    return diffs;
}

namespace {

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ProtocolError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ProtocolError(path.string() + ": " + e.what());
    }
}

}  // namespace

ScenarioReport run_scenario(const Json& script, const std::filesystem::path& base_dir, const Templates* templates,
                            bool update_golden) {
    if (!script.is_object()) throw ProtocolError("a scenario is a JSON object");
    ScenarioReport report;
    report.name = script.value("name", std::string("scenario"));

    SessionSetup setup;
    if (!script.contains("library") || !script.at("library").is_string()) {
        throw ProtocolError("scenario needs a library path");
    }
    setup.library = std::make_shared<const Library>(
        load_library_file((base_dir / script.at("library").get<std::string>()).string()));
    setup.user = script.value("user", std::string("U"));
    if (script.contains("options")) apply_options(script.at("options"), setup.options);
    if (script.contains("existing")) setup.existing = proposal_from_json(script.at("existing"));

    std::optional<Templates> own_templates;
    if (!templates && script.contains("templates")) {
        own_templates = Templates::load_file((base_dir / script.at("templates").get<std::string>()).string());
        templates = &*own_templates;
    }

    Session session = setup.start();
    Json last = nullptr;
    const Json& steps = script.value("steps", Json::array());
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const Json& step = steps[i];
        try {
            if (step.contains("propose")) {
                last = to_json(session.submit_proposal(proposal_from_json(step.at("propose"))), templates);
            } else if (step.contains("react")) {
                last = to_json(session.react(reaction_from_json(step.at("react"))), templates);
            } else if (step.contains("expect")) {
                ExpectResult r{i, false, partial_diff(step.at("expect"), last)};
                r.passed = r.diffs.empty();
                report.expects.push_back(std::move(r));
            } else if (step.contains("expect_state")) {
                ExpectResult r{i, false, partial_diff(step.at("expect_state"), session_state(session, templates))};
                r.passed = r.diffs.empty();
                report.expects.push_back(std::move(r));
            } else {
                throw ProtocolError("unknown step kind");
            }
        } catch (const ProtocolError& e) {
            throw ProtocolError("step " + std::to_string(i) + ": " + e.what());
        } catch (const ParseError& e) {
            throw ProtocolError("step " + std::to_string(i) + ": " + e.what());
        }
    }
    report.transcript = session_state(session, templates)["transcript"];

    if (script.contains("golden")) {
        std::filesystem::path golden = base_dir / script.at("golden").get<std::string>();
        if (update_golden) {
            std::ofstream(golden) << report.transcript.dump(2) << "\n";
        }
        Json expected = read_json(golden);
        report.golden_diffs = partial_diff(expected, report.transcript);
        if (expected.is_array() && report.golden_diffs.empty() && expected != report.transcript) {
            report.golden_diffs.push_back("/: documents differ outside the compared fields");
        }
        report.golden_match = report.golden_diffs.empty();
    }
    return report;
}

ScenarioReport run_scenario_file(const std::filesystem::path& path, bool update_golden) {
    Json script = read_json(path);
    return run_scenario(script, path.parent_path(), nullptr, update_golden);
}

}  // namespace plannego
