// Copyright 2026 The glhs Authors.
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

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "glhs/core.hpp"

int main(int argc, char** argv) {
  CLI::App app{"glhs: dictatorship tests, Label Cover reductions and lemma checks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI/TOML run config; flags override it");

  glhs::cli::CliState state;
  state.workers = glhs::default_workers();
  app.add_option("--workers", state.workers, "worker threads (default: GLHS_WORKERS or hardware threads)")
      ->check(CLI::PositiveNumber);
  app.add_option("--report", state.report_path, "append report records to this file");
  app.add_option("--config-version", state.config_version, "run config format version")->check(CLI::Range(1, 1));
  glhs::cli::register_commands(app, state);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; usage errors share the error code.
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const glhs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    return glhs::cli::flush_records(state);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
