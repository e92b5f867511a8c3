// Copyright 2026 The csq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "csq/hilbert.hpp"
#include "csq/phase_space.hpp"

namespace csq {

/// {"dim": n, "re": [[...]], "im": [[...]]}, row-major.
nlohmann::json operator_to_json(const Operator& op);
Operator operator_from_json(const nlohmann::json& j);

/// Columns coord1, coord2, weight, re, im.
void write_grid_function_csv(std::ostream& out, const GridFunction& f);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace csq
