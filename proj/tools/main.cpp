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

#include <Eigen/Core>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "csq/expression.hpp"
#include "csq/measure.hpp"

namespace {

using Command = std::function<int(const csq::cli::RunConfig&, const std::filesystem::path&)>;

// CSQ_WORKERS sets the thread count of the inner kernels.
void apply_workers() {
  const char* env = std::getenv("CSQ_WORKERS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) throw csq::cli::ConfigError("CSQ_WORKERS must be a positive integer");
  Eigen::setNbThreads(static_cast<int>(n));
}

int run(const Command& command, const std::string& config_path, const std::string& out_dir) {
  using namespace csq::cli;
  try {
    apply_workers();
    const RunConfig cfg = load_config(config_path);
    std::filesystem::create_directories(out_dir);
    return command(cfg, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const csq::ExpressionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const csq::SamplingInefficiency& e) {
    std::cerr << "sampling inefficiency: " << e.what() << "\n";
    return kDegraded;
  } catch (const csq::TrajectoryLeftDomain& e) {
    std::cerr << "trajectory left domain: " << e.what() << "\n";
    return kDegraded;
  } catch (const std::invalid_argument& e) {
    // Preconditions of the numeric layer rejected a configured value.
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numeric degradation: " << e.what() << "\n";
    return kDegraded;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent-state quantization toolkit"};
  app.require_subcommand(1);
  const std::map<std::string, std::pair<std::string, Command>> commands = {
      {"verify", {"Run the identity suite", csq::cli::cmd_verify}},
      {"orderings", {"Compare antinormal, Weyl and normal quantization", csq::cli::cmd_orderings}},
      {"measure-sim", {"Simulate coherent-state measurements", csq::cli::cmd_measure_sim}},
      {"evolve", {"Integrate the Liouville flow", csq::cli::cmd_evolve}},
  };
  std::string config;
  std::string out;
  std::string chosen;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", out, "Output directory")->required();
    sub->callback([&chosen, name = name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : csq::cli::kConfigError;
  }
  return run(commands.at(chosen).second, config, out);
}
