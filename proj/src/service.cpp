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

#include "plannego/service.hpp"

#include "httplib.h"

#include <spdlog/spdlog.h>

namespace plannego {

namespace {

constexpr const char* kJson = "application/json";

struct HttpError {
    int status;
    Json body;
};

void reply(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(2), kJson);
}

HttpError not_found(const std::string& id) {
    return {404, Json{{"error", "unknown-session"}, {"message", "no session '" + id + "'"}}};
}

Json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return Json::object();
    try {
        return Json::parse(req.body);
    } catch (const Json::parse_error& e) {
        throw ProtocolError(std::string("request body is not JSON: ") + e.what());
    }
}

/// Runs `handler`, translating engine exceptions into structured errors.
template <class F>
void guarded(httplib::Response& res, F&& handler) {
    try {
        handler();
    } catch (const HttpError& e) {
        reply(res, e.status, e.body);
    } catch (const PhaseError& e) {
        reply(res, 409,
              Json{{"error", "phase-violation"}, {"message", e.what()}, {"phase", to_string(e.phase())}});
    } catch (const GateError& e) {
        reply(res, 409, Json{{"error", "phase-violation"}, {"message", e.what()}});
    } catch (const ProtocolError& e) {
        reply(res, 400, Json{{"error", "bad-request"}, {"message", e.what()}});
    } catch (const ParseError& e) {
        reply(res, 400, Json{{"error", "bad-request"}, {"message", e.what()}});
    } catch (const ModelError& e) {
        reply(res, 400, Json{{"error", "bad-request"}, {"message", e.what()}});
    } catch (const std::invalid_argument& e) {
        reply(res, 400, Json{{"error", "bad-request"}, {"message", e.what()}});
    } catch (const Json::exception& e) {
        reply(res, 400, Json{{"error", "bad-request"}, {"message", e.what()}});
    } catch (const std::exception& e) {
        spdlog::error("internal error: {}", e.what());
        reply(res, 500, Json{{"error", "internal"}, {"message", e.what()}});
    }
}

}  // namespace

Service::Service(SessionSetup defaults, std::optional<Templates> templates)
    : defaults_(std::move(defaults)), templates_(std::move(templates)), server_(std::make_unique<httplib::Server>()) {
    routes();
}

Service::~Service() { stop(); }

bool Service::listen(const std::string& host, int port) { return server_->listen(host, port); }

int Service::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool Service::listen_after_bind() { return server_->listen_after_bind(); }

void Service::stop() {
    if (server_) server_->stop();
}

std::shared_ptr<Service::Hosted> Service::find(const std::string& id) {
    std::lock_guard lock(sessions_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw not_found(id);
    return it->second;
}

void Service::routes() {
    const Templates* templates = templates_ ? &*templates_ : nullptr;

    server_->Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            Json body = parse_body(req);
            SessionSetup setup = defaults_;
            if (body.contains("user")) setup.user = body.at("user").get<std::string>();
            if (body.contains("options")) apply_options(body.at("options"), setup.options);
            if (body.contains("existing")) setup.existing = proposal_from_json(body.at("existing"));
            auto hosted = std::make_shared<Hosted>(setup.start());
            std::string id;
            {
                std::lock_guard lock(sessions_mutex_);
                id = "s" + std::to_string(next_session_++);
                sessions_.emplace(id, hosted);
            }
            reply(res, 201,
                  Json{{"session", id},
                       {"phase", to_string(hosted->session.phase())},
                       {"stack_depth", hosted->session.depth()}});
        });
    });

    server_->Post(R"(/sessions/([^/]+)/proposal)", [this, templates](const httplib::Request& req,
                                                                      httplib::Response& res) {
        guarded(res, [&] {
            auto hosted = find(req.matches[1]);
            Proposal p = proposal_from_json(parse_body(req));
            std::lock_guard lock(hosted->mutex);
            reply(res, 200, to_json(hosted->session.submit_proposal(p), templates));
        });
    });

    server_->Post(R"(/sessions/([^/]+)/reaction)", [this, templates](const httplib::Request& req,
                                                                      httplib::Response& res) {
        guarded(res, [&] {
            auto hosted = find(req.matches[1]);
            UserReaction r = reaction_from_json(parse_body(req));
            std::lock_guard lock(hosted->mutex);
            reply(res, 200, to_json(hosted->session.react(r), templates));
        });
    });

    server_->Get(R"(/sessions/([^/]+))", [this, templates](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto hosted = find(req.matches[1]);
            std::lock_guard lock(hosted->mutex);
            reply(res, 200, session_state(hosted->session, templates));
        });
    });

    server_->Get(R"(/sessions/([^/]+)/model)", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto hosted = find(req.matches[1]);
            std::lock_guard lock(hosted->mutex);
            reply(res, 200, model_snapshot(hosted->session.model()));
        });
    });

    server_->Get(R"(/sessions/([^/]+)/explain)", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto hosted = find(req.matches[1]);
            if (!req.has_param("action") || !req.has_param("parameter")) {
                throw ProtocolError("explain needs action and parameter query parameters");
            }
            std::lock_guard lock(hosted->mutex);
            reply(res, 200,
                  explanation(hosted->session.explain(req.get_param_value("action"),
                                                      req.get_param_value("parameter"))));
        });
    });
}

}  // namespace plannego
