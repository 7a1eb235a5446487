// Copyright 2026 The pedplan Authors
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

#ifndef PEDPLAN__CLI_HPP_
#define PEDPLAN__CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pedplan::cli
{

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitIo = 3,
  kExitVerification = 4,
};

/// Parses "7", "0..49" and comma lists of either, inclusive ranges.
std::vector<std::uint64_t> parse_seeds(const std::vector<std::string> & specs);

/// One experiment condition of a run recipe.
struct Condition
{
  std::string name;
  std::string preset;
  std::optional<std::string> bank;  // memory bank name under <data>/banks, or zero-shot
};

std::vector<std::string> recipe_names();
/// Conditions of `exp1`..`exp4`; an unknown name is a ConfigError.
std::vector<Condition> recipe(std::string_view name);

/// Runs the `pedplan` command line. Never calls exit().
int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);
int run(int argc, char ** argv, std::ostream & out, std::ostream & err);

}  // namespace pedplan::cli

#endif  // PEDPLAN__CLI_HPP_
