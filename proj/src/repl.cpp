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

#include "plannego/repl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

namespace plannego {

namespace {

constexpr const char* kHelp =
    "commands:\n"
    "  propose <action> <arg>... [under <parent-action>]\n"
    "  propose-json <proposal document on one line>\n"
    "  load <file>                 proposal document from a file\n"
    "  accept                      accept the system's claims\n"
    "  reject [counter document]   reject them, optionally with counter beliefs\n"
    "  show                        model snapshot\n"
    "  state                       phase and stack depth\n"
    "  explain <action> <_param>   ranking table for a parameter\n"
    "  help | quit\n";

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string canonical(const Library& library, const std::string& name) {
    std::string key = lower(name);
    for (const Recipe& r : library.recipes()) {
        if (lower(r.action.name) == key) return r.action.name;
        for (const Term& step : r.body) {
            if (lower(step.name) == key) return step.name;
        }
    }
    return name;
}

const ActionNode* latest_named(const DialogueModel& model, const std::string& name) {
    const ActionNode* found = nullptr;
    for (Level level : kActionLevels) {
        for (const auto& [id, node] : model.level(level)) {
            if (node.action.name == name && (!found || id > found->id)) found = &node;
        }
    }
    return found;
}

void print_turn(const SystemTurn& turn, const Templates* templates, std::ostream& out, bool json) {
    if (json) {
        out << to_json(turn, templates).dump(2) << "\n";
        return;
    }
    out << "[turn " << turn.turn << "] " << to_string(turn.outcome);
    if (turn.specialization && turn.outcome != Outcome::AcceptedAndMerged) {
        out << " (" << to_string(*turn.specialization) << ")";
    }
    out << ", depth " << turn.stack_depth << ", " << to_string(turn.phase) << "\n";
    auto say = [&](const Literal& l, const char* lead) {
        out << lead << (templates ? templates->render(l) : to_string(l)) << "\n";
        out << "     " << to_string(l) << "\n";
    };
    for (const auto& act : turn.acts) {
        say(act.claim, "S: ");
        for (const auto& s : act.supports) say(s, "S: ");
    }
    for (const auto& q : turn.answered_queries) {
        say(Literal{q.answer_form.args.at(0), false}, "S: ");
    }
    for (const auto& q : turn.dropped_queries) {
        out << "dropped: " << to_string(q.logical_form) << " (" << to_string(q.state) << ")\n";
    }
}

Json parse_document(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ProtocolError(e.what());
    }
}

}  // namespace

Proposal chain_for(const DialogueModel& model, const Library& library, const std::string& action,
                   const std::vector<std::string>& args, const std::optional<std::string>& under) {
    std::vector<Term> terms;
    for (const auto& a : args) terms.push_back(parse_term(a));
    Term child = Term::compound(canonical(library, action), std::move(terms));
    Proposal p;
    if (!under) {
        p.actions.push_back({"a1", Level::Domain, child, std::nullopt, {}});
        return p;
    }
    std::string parent_name = canonical(library, *under);
    if (const ActionNode* parent = latest_named(model, parent_name)) {
        p.actions.push_back({"a1", parent->level, child, NodeRef{parent->id}, {}});
        return p;
    }
    // Infer the missing parent from the recipe that has the child in its body.
    for (const Recipe* r : library.recipes_for(parent_name)) {
        Term header = rename_variables(r->action, "c");
        for (const Term& raw_step : r->body) {
            if (raw_step.name != child.name || raw_step.arity() != child.arity()) continue;
            Substitution b;
            if (!unify(rename_variables(raw_step, "c"), child, b)) continue;
            Term parent_action = substitute(header, b);
            for (Level level : kActionLevels) {
                for (const auto& [id, node] : model.level(level)) {
                    for (const Recipe* above : library.recipes_for(node.action.name)) {
                        for (const Term& step : above->body) {
                            if (step.name != parent_name) continue;
                            Substitution s = b;
                            if (!unify(rename_variables(above->action, "u"), node.action, s)) continue;
                            if (!unify(rename_variables(step, "u"), parent_action, s)) continue;
                            Term placed = substitute(parent_action, s);
                            p.actions.push_back({"a0", level, placed, NodeRef{id}, {}});
                            p.actions.push_back({"a1", level, substitute(child, s), NodeRef{std::string("a0")}, {}});
                            return p;
                        }
                    }
                }
            }
        }
    }
    throw ProtocolError("cannot place " + to_string(child) + " under " + parent_name);
}

int repl_loop(Session& session, const Templates* templates, std::istream& in, std::ostream& out,
              const ReplOptions& options) {
    int failures = 0;
    std::string line;
    while (true) {
        if (options.prompt) out << "plannego> " << std::flush;
        if (!std::getline(in, line)) break;
        std::istringstream words(line);
        std::string command;
        words >> command;
        if (command.empty() || command.front() == '#') continue;
        std::string rest;
        std::getline(words, rest);
        rest.erase(0, rest.find_first_not_of(" \t"));
        try {
            if (command == "quit" || command == "exit") {
                break;
            } else if (command == "help") {
                out << kHelp;
            } else if (command == "propose") {
                std::istringstream ws(rest);
                std::vector<std::string> tokens;
                for (std::string w; ws >> w;) tokens.push_back(w);
                if (tokens.empty()) throw ProtocolError("usage: propose <action> <arg>... [under <parent-action>]");
                std::optional<std::string> under;
                auto u = std::find(tokens.begin(), tokens.end(), "under");
                if (u != tokens.end()) {
                    if (u + 2 != tokens.end()) throw ProtocolError("usage: ... under <parent-action>");
                    under = *(u + 1);
                    tokens.erase(u, tokens.end());
                }
                std::vector<std::string> args(tokens.begin() + 1, tokens.end());
                Proposal p = chain_for(session.model(), session.library(), tokens.front(), args, under);
                print_turn(session.submit_proposal(p), templates, out, options.json);
            } else if (command == "propose-json") {
                print_turn(session.submit_proposal(proposal_from_json(parse_document(rest))), templates, out,
                           options.json);
            } else if (command == "load") {
                std::ifstream file(rest);
                if (!file) throw ProtocolError("cannot open " + rest);
                std::stringstream buffer;
                buffer << file.rdbuf();
                print_turn(session.submit_proposal(proposal_from_json(parse_document(buffer.str()))), templates, out,
                           options.json);
            } else if (command == "accept") {
                print_turn(session.react(UserReaction::accept_claims()), templates, out, options.json);
            } else if (command == "reject") {
                std::optional<Proposal> counter;
                if (!rest.empty()) counter = proposal_from_json(parse_document(rest));
                print_turn(session.react(UserReaction::reject_claims(std::move(counter))), templates, out,
                           options.json);
            } else if (command == "show") {
                out << model_snapshot(session.model()).dump(2) << "\n";
            } else if (command == "state") {
                out << "phase " << to_string(session.phase()) << ", depth " << session.depth() << "\n";
            } else if (command == "explain") {
                std::istringstream ws(rest);
                std::string action, parameter;
                if (!(ws >> action >> parameter)) throw ProtocolError("usage: explain <action> <_param>");
                auto ranking = session.explain(action, parameter);
                if (options.json) {
                    out << explanation(ranking).dump(2) << "\n";
                } else {
                    for (const auto& s : ranking) out << render_table(s) << "\n";
                }
            } else {
                throw ProtocolError("unknown command '" + command + "'");
            }
        } catch (const PhaseError& e) {
            ++failures;
            out << "usage error: " << e.what() << "\n";
        } catch (const std::exception& e) {
            ++failures;
            out << "error: " << e.what() << "\n";
            if (dynamic_cast<const ProtocolError*>(&e)) out << "type 'help' for commands\n";
        }
    }
    return failures;
}

}  // namespace plannego
