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

#include "cli_app.hpp"

int main(int argc, char** argv) {
  lowlight_cli::CliConfig config;
  const int parse_code = lowlight_cli::parse_args(argc, argv, &config);
  if (parse_code >= 0) return parse_code;
  return lowlight_cli::run(config);
}
