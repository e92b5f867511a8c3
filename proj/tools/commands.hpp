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

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "config.hpp"

namespace csq::cli {

enum ExitCode : int { kPass = 0, kIdentityFailure = 1, kConfigError = 2, kDegraded = 3 };

/// Numeric breakdown during a run (NaN, drift, ill-conditioning); exit 3.
class Degradation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Check {
  std::string name;
  double defect = 0.0;
  double tolerance = 0.0;
  bool asserted = true;
  bool lower_bound = false;  // witness: passes when defect > tolerance
  std::string note;

  bool pass() const;
};

nlohmann::json check_json(const Check& c);
/// Fixed-width pass/fail table.
void print_table(std::ostream& out, const std::vector<Check>& checks);
/// Writes the document with a trailing newline; throws Degradation on I/O failure.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
void write_text(const std::filesystem::path& path, const std::string& text);

std::vector<Check> verify_suite(const RunConfig& cfg);

int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_orderings(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_measure_sim(const RunConfig& cfg, const std::filesystem::path& out);
int cmd_evolve(const RunConfig& cfg, const std::filesystem::path& out);

}  // namespace csq::cli
