/*
Copyright 2026 The cosched Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include "cosched/model.hpp"
#include "cosched/solve.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace cosched {

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ScenarioFile {
    Scenario scenario;
    std::uint64_t seed = 0;
    double noise_dbm = 0.0;
    double mean_gain = 0.0;
};

double dbm_to_watts(double dbm);

// Throws ParseError on schema problems and Error on invalid instances.
ScenarioFile parse_scenario(const std::string& text);
ScenarioFile load_scenario(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);

std::string solution_to_json(const Solution& solution);
// Throws ParseError.
Solution solution_from_json(const std::string& text);

// Nine significant digits, C locale.
std::string format_number(double v, int digits = 9);
std::string schedule_csv(const Solution& solution);

} // namespace cosched
