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

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "plannego/scenario.hpp"

namespace httplib {
class Server;
}

namespace plannego {

/// HTTP front end for the session protocol. Endpoints:
///   POST /sessions                     {user?, existing?, options?}
///   POST /sessions/{id}/proposal       proposal document
///   POST /sessions/{id}/reaction       {reaction: accept|reject, counter?}
///   GET  /sessions/{id}                session state
///   GET  /sessions/{id}/model          model snapshot
///   GET  /sessions/{id}/explain?action=&parameter=
/// Errors are {error, message[, phase]} with status 400, 404 or 409.
class Service {
public:
    Service(SessionSetup defaults, std::optional<Templates> templates);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds and serves until stop(). Returns false if the port is taken.
    bool listen(const std::string& host, int port);
    /// Binds to a free port and returns it; serve with listen_after_bind().
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();

private:
    struct Hosted {
        explicit Hosted(Session s) : session(std::move(s)) {}
        std::mutex mutex;  // serializes the turns of one session
        Session session;
    };

    void routes();
    std::shared_ptr<Hosted> find(const std::string& id);

    SessionSetup defaults_;
    std::optional<Templates> templates_;
    std::unique_ptr<httplib::Server> server_;
    std::mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Hosted>> sessions_;
    int next_session_ = 1;
};

}  // namespace plannego
