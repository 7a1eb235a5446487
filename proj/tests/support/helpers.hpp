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

#ifndef PEDPLAN_TESTS__HELPERS_HPP_
#define PEDPLAN_TESTS__HELPERS_HPP_

#include "pedplan/engine.hpp"

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

namespace pedplan::testing
{

inline std::filesystem::path fixture_dir() { return PEDPLAN_FIXTURE_DIR; }
inline std::filesystem::path source_data_dir() { return PEDPLAN_SOURCE_DATA_DIR; }
inline std::filesystem::path golden_dir() { return PEDPLAN_GOLDEN_DIR; }

class TempDir
{
public:
  TempDir()
  {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("pedplan-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir()
  {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir & operator=(const TempDir &) = delete;

  const std::filesystem::path & path() const { return path_; }
  std::filesystem::path operator/(const std::string & name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path & p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Setup with no pacing and default configuration.
inline engine::RunSetup default_setup() { return engine::RunSetup{}; }

inline behaviors::ScenarioConfig preset(const std::string & name, std::uint64_t seed)
{
  const config::SimConfig sim;
  return behaviors::make_preset(
    name, seed, sim.pedestrian, sim.road, sim.ego_start, sim.engine.max_steps);
}

inline behaviors::ScenarioConfig empty_road(std::uint64_t seed = 0)
{
  auto s = preset("single_cross", seed);
  s.preset = "single_cross";
  s.pedestrian_count = 0;
  s.behaviors.clear();
  return s;
}

}  // namespace pedplan::testing

#endif  // PEDPLAN_TESTS__HELPERS_HPP_
