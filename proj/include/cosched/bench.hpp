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

#include "cosched/scenario_io.hpp"
#include "cosched/solve.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cosched {

enum class BenchAxis { TotalData, Horizon, Buffer };

const char* to_string(BenchAxis axis) noexcept;

struct BenchConfig {
    explicit BenchConfig(ScenarioFile file) : base(std::move(file)) {}

    ScenarioFile base;
    int realizations = 100;
    BenchAxis axis = BenchAxis::TotalData;
    // total_data: total bits; horizon: time multiplier; buffer: buffer bits.
    std::vector<double> values;
    std::vector<Scheme> schemes{Scheme::JSTRC};
    std::optional<std::filesystem::path> output;
    std::uint64_t seed = 0;
};

// Scenario paths inside the config resolve against the config's directory.
BenchConfig parse_bench_config(const std::string& text, const std::filesystem::path& base_dir);
BenchConfig load_bench_config(const std::filesystem::path& path);

struct BenchRow {
    std::string axis; // formatted axis value, "inf" for the unbounded-buffer reference
    double axis_value = 0.0;
    Scheme scheme = Scheme::JSTRC;
    double mean = 0.0;
    double stddev = 0.0;
    int n = 0;
    int failed = 0;
};

// The scenario each axis value produces before the channel draw.
Scenario bench_scenario(const BenchConfig& config, double value);

// Realizations share their channel draws across axis values. The buffer axis
// appends an unbounded-buffer reference row per scheme.
std::vector<BenchRow> run_bench(const BenchConfig& config);
std::string bench_csv(const std::vector<BenchRow>& rows);

} // namespace cosched
