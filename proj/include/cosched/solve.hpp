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

#include "cosched/height.hpp"
#include "cosched/model.hpp"
#include "cosched/sp.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace cosched {

struct SchedulePair {
    RateSchedule sensing;
    RateSchedule transmission;
};

/// Cumulative curves of the fixed-height scheduler. Without a busy interval
/// only `transmission` is set and sensing equals it.
struct HeightCurves {
    StringPath sensing_pre;  // (0,0) -> (b1,h)
    StringPath sensing_post; // (b2,h) -> (tN,D)
    StringPath transmission; // (0,0) -> (tN,D)

    SchedulePair schedules(const Scenario& scenario) const;
};

HeightCurves height_curves(const Scenario& scenario, double h, bool buffered);

// Ignores any buffer in the scenario.
SchedulePair rates_for_height(const Scenario& scenario, double h);
// Requires a buffer.
SchedulePair rates_for_height_buffered(const Scenario& scenario, double h);

struct EnergySplit {
    double sensing = 0.0;
    double transmission = 0.0;
    double total() const { return sensing + transmission; }
};

EnergySplit energy_of(const SchedulePair& pair, const PhysicalParams& params);
// Energy of the fixed-height scheduler; buffered picks the variant.
EnergySplit energy_at_height(const Scenario& scenario, double h, bool buffered);

enum class Scheme { JSTRC, UB, LB, RH };

const char* to_string(Scheme scheme) noexcept;
std::optional<Scheme> parse_scheme(const std::string& name);

struct AreaOptimum {
    double hi = 0.0;
    double lo = 0.0;
    double height = 0.0;
    double energy = 0.0;
};

struct Solution {
    Scheme scheme = Scheme::JSTRC;
    bool buffered = false;
    std::optional<double> height; // unset without a busy interval
    RateSchedule sensing;
    RateSchedule transmission;
    double sensing_energy = 0.0;
    double transmission_energy = 0.0;
    double total_energy = 0.0;
    std::optional<SearchBounds> bounds;
    std::vector<CriticalHeight> critical_heights;
    std::vector<AreaOptimum> areas;
};

// Infinite buffer; a buffer in the scenario is ignored.
Solution optimize(const Scenario& scenario);
// Requires a buffer.
Solution optimize_buffered(const Scenario& scenario);
// Picks optimize_buffered when the scenario carries a buffer.
Solution solve(const Scenario& scenario);

// Fixed-height solution with the scheduler that matches the scenario's buffer.
Solution solution_at_height(const Scenario& scenario, const SearchBounds& bounds, double h,
                            Scheme scheme);
// Maps u in [0,1) onto the random-height interval.
double random_height(const SearchBounds& bounds, const Scenario& scenario, double u);
Solution baseline(const Scenario& scenario, Scheme scheme, std::uint64_t seed);

} // namespace cosched
