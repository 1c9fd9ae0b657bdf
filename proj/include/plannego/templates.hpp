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
#include <string>
#include <string_view>

#include "plannego/term.hpp"

namespace plannego {

/// Sentence templates keyed by claim predicate (`not ` prefixed for
/// denials). Placeholders: `{1}` is the first argument, `{1.2}` the second
/// argument of the first argument. Format described in docs/templates.md.
class Templates {
public:
    Templates() = default;

    /// Throws ParseError on a line without `=`.
    static Templates parse(std::string_view text);
    static Templates load_file(const std::string& path);

    /// Rendered sentence, or the logical form when no template matches.
    std::string render(const Literal& literal) const;

    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::map<std::string, std::string, std::less<>> entries_;
};

}  // namespace plannego
