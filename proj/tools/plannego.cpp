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

// plannego: interactive negotiation, scenario runner and session service.

#include <iostream>

#include <unistd.h>

#include "CLI11.hpp"

#include <spdlog/spdlog.h>

#include "plannego/repl.hpp"
#include "plannego/service.hpp"

using namespace plannego;

int main(int argc, char** argv) {
    CLI::App app{"Plan negotiation engine: evaluate proposals, negotiate, merge."};

    std::string library_path;
    std::vector<std::string> scenarios;
    bool serve = false;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string threshold;
    int max_support_rounds = 2;
    int precondition_depth = 1;
    std::string user = "U";
    std::string templates_path;
    std::vector<std::string> existing;
    bool json = false;
    bool update_golden = false;
    std::string log_level = "warn";

    app.add_option("--library", library_path, "Recipe library / knowledge base file");
    app.add_option("--scenario", scenarios, "Scenario script(s) to run; exit status 1 if any expect fails");
    app.add_flag("--serve", serve, "Serve the session protocol over HTTP");
    app.add_option("--host", host, "Address to bind with --serve");
    app.add_option("--port", port, "Port for --serve");
    app.add_option("--threshold", threshold, "Substantially-better threshold, e.g. 1/4 or 0.25");
    app.add_option("--max-support-rounds", max_support_rounds, "Support rounds before impasse in validity disputes")
        ->check(CLI::PositiveNumber);
    app.add_option("--precondition-depth", precondition_depth, "Achiever recursion depth for feasibility")
        ->check(CLI::PositiveNumber);
    app.add_option("--user", user, "User whose preferences apply");
    app.add_option("--templates", templates_path, "Sentence template file");
    app.add_option("--existing", existing, "Agreed root action, e.g. 'Get-Masters(U,CS)' (repeatable)");
    app.add_flag("--json", json, "Print SystemTurn documents");
    app.add_flag("--update-golden", update_golden, "Rewrite golden transcripts named by scenarios");
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");
    CLI11_PARSE(app, argc, argv);

    spdlog::set_level(spdlog::level::from_str(log_level));

    try {
        if (!scenarios.empty()) {
            bool ok = true;
            for (const auto& path : scenarios) {
                ScenarioReport report = run_scenario_file(path, update_golden);
                std::cout << report.render();
                ok = ok && report.passed();
            }
            return ok ? 0 : 1;
        }
        if (library_path.empty()) {
            std::cerr << "--library is required without --scenario\n";
            return 2;
        }

        SessionSetup setup;
        setup.library = std::make_shared<const Library>(load_library_file(library_path));
        setup.user = user;
        setup.options.max_support_rounds = max_support_rounds;
        setup.options.evaluation.precondition_depth = precondition_depth;
        if (!threshold.empty()) setup.options.evaluation.threshold = parse_rational(threshold);
        for (std::size_t i = 0; i < existing.size(); ++i) {
            setup.existing.actions.push_back({"e" + std::to_string(i), Level::Domain, parse_term(existing[i]),
                                              std::nullopt, {}});
        }
        std::optional<Templates> templates;
        if (!templates_path.empty()) templates = Templates::load_file(templates_path);

        if (serve) {
            Service service(setup, std::move(templates));
            std::cerr << "serving on " << host << ":" << port << "\n";
            if (!service.listen(host, port)) {
                std::cerr << "cannot listen on " << host << ":" << port << "\n";
                return 1;
            }
            return 0;
        }

        Session session = setup.start();
        ReplOptions options;
        options.json = json;
        options.prompt = isatty(0);
        repl_loop(session, templates ? &*templates : nullptr, std::cin, std::cout, options);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
