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

// Shared fixture loading for the test binaries.

#pragma once

#include <memory>
#include <string>

#include "plannego/knowledge_base.hpp"

namespace plannego::testing {

inline std::string data_path(const std::string& name) { return std::string(PLANNEGO_DATA_DIR) + "/" + name; }

inline std::shared_ptr<const Library> advisement() {
    static auto lib = std::make_shared<const Library>(load_library_file(data_path("advisement.kb")));
    return lib;
}

inline std::shared_ptr<const Library> figure1() {
    static auto lib = std::make_shared<const Library>(load_library_file(data_path("figure1.kb")));
    return lib;
}

}  // namespace plannego::testing
