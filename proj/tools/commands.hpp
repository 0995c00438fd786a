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

#ifndef GLHS_TOOLS_COMMANDS_HPP_
#define GLHS_TOOLS_COMMANDS_HPP_

#include <string>
#include <vector>

#include "CLI11.hpp"
#include "glhs/report.hpp"

namespace glhs::cli {

struct CliState {
  std::string report_path;
  unsigned workers = 1;
  int config_version = 1;
  std::vector<Record> records;
  bool checks_failed = false;  // set by commands with a non-record verdict
};

void register_commands(CLI::App& app, CliState& state);

// Prints records to stdout, appends them to the report file, returns the exit code.
int flush_records(CliState& state);

}  // namespace glhs::cli

#endif  // GLHS_TOOLS_COMMANDS_HPP_
