// Copyright (c) the lowlight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOWLIGHT_TOOLS_CLI_APP_HPP_
#define LOWLIGHT_TOOLS_CLI_APP_HPP_

#include <string>
#include <vector>

namespace lowlight_cli {

struct CliConfig {
  std::vector<std::string> inputs;  // files or directories
  std::string output_dir = ".";
  double percentile = 75.0;
  double alpha = 0.5;
  double lambda = 0.15;
  std::string sigma = "auto";  // "auto" or a non-negative number
  bool no_denoise = false;
  bool keep_intermediates = false;
  bool compare_mode = false;
  std::string reference;
  unsigned int seed = 0;
};

// Parses argv into *config. Returns -1 to continue, otherwise the exit code
// (help or usage error; the message names the offending flag).
int parse_args(int argc, const char* const* argv, CliConfig* config);

// Processes every input independently, in order; returns 0 iff all
// succeeded. Per-file failures go to stderr and do not abort the batch.
int run(const CliConfig& config);

}  // namespace lowlight_cli

#endif  // LOWLIGHT_TOOLS_CLI_APP_HPP_
