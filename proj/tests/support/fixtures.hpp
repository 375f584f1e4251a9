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
#include "cosched/sp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

namespace cosched::testing {

inline PhysicalParams reference_params(double gain = 1e-3) {
    PhysicalParams p;
    p.alpha = 1e-28;
    p.cycles_per_bit = 500.0;
    p.noise_power = std::pow(10.0, (-79.5 - 30.0) / 10.0);
    p.channel_gain = gain;
    p.bandwidth = 10e6;
    return p;
}

// Five tasks, busy [55, 85].
inline Scenario reference_scenario(std::optional<double> buffer = std::nullopt) {
    return Scenario({{10, 500}, {20, 500}, {80, 500}, {90, 700}, {200, 300}}, BusyInterval{55, 85},
                    reference_params(), buffer);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// N tasks on [10, 200] s; the busy interval sits strictly inside the horizon.
inline Scenario random_scenario(std::mt19937_64& rng, int n, bool busy,
                                std::optional<double> buffer = std::nullopt) {
    std::vector<double> t;
    while (static_cast<int>(t.size()) < n) {
        const double v = std::round(uniform(rng, 10.0, 200.0));
        if (std::none_of(t.begin(), t.end(), [&](double u) { return std::abs(u - v) < 2.0; })) t.push_back(v);
    }
    std::sort(t.begin(), t.end());
    std::vector<Task> tasks;
    for (double d : t) tasks.push_back({d, std::round(uniform(rng, 100.0, 800.0))});
    std::optional<BusyInterval> b;
    if (busy) {
        const double T = t.back();
        const double start = uniform(rng, 0.1 * T, 0.6 * T);
        const double len = uniform(rng, 0.05 * T, 0.25 * T);
        b = BusyInterval{start, std::min(start + len, 0.95 * T)};
    }
    return Scenario(std::move(tasks), b, reference_params(), buffer);
}

// Random nondecreasing floor from (0,0) with n breakpoints.
inline FloorSpec random_floor(std::mt19937_64& rng, int n) {
    FloorSpec f;
    f.origin = {0.0, 0.0};
    double t = 0.0;
    double c = 0.0;
    for (int i = 0; i < n; ++i) {
        t += uniform(rng, 0.5, 10.0);
        c += uniform_int(rng, 0, 3) == 0 ? 0.0 : uniform(rng, 0.0, 50.0);
        f.breakpoints.push_back({t, c});
    }
    f.terminus = {t + uniform(rng, 0.5, 10.0), c + uniform(rng, 0.0, 50.0)};
    return f;
}

inline double rel_diff(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

} // namespace cosched::testing
