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

#include <vector>

namespace cosched {

/// Slot grid with every task deadline and busy endpoint on a boundary.
struct DiscretizedProblem {
    int slot_count = 0;
    std::vector<double> boundaries; // slot_count + 1 entries, from 0 to t_N
    std::vector<bool> busy_slot;
    std::vector<bool> instant_boundary; // boundary k carries a deadline or busy endpoint
};

// Inserts all instants, then splits the longest pieces until `slots` slots exist.
DiscretizedProblem discretize(const Scenario& scenario, int slots);

struct DiscretizedSolution {
    double energy = 0.0;
    std::vector<double> sensing_rates;
    std::vector<double> transmission_rates;
    std::vector<double> boundaries;
    double duality_gap = 0.0; // barrier bound on the objective gap, joules
    int newton_steps = 0;

    RateSchedule sensing() const;
    RateSchedule transmission() const;
};

/// Log-barrier interior-point solve of the slot-discretized convex program in
/// cumulative variables. The returned point is strictly feasible and its
/// objective is within tol (relative) of the discretized optimum.
DiscretizedSolution solve_discretized(const Scenario& scenario, int slots, double tol = 1e-7);

/// Exhaustive search over per-slot rates on the grid {0, u, ..., L*u}, with
/// u = 2 D / (t_N L), on equal slots. Deadlines and busy endpoints must lie on
/// slot boundaries.
double brute_force_tiny(const Scenario& scenario, int slots, int rate_levels);

// Energy of the cheapest grid point that dominates `reference` after
// averaging it onto the brute-force slots and rounding cumulative values up.
// This bounds brute_force_tiny from above.
double brute_force_rounding_bound(const Scenario& scenario, int slots, int rate_levels,
                                  const RateSchedule& sensing, const RateSchedule& transmission);

struct SweepPoint {
    double height = 0.0;
    double sensing = 0.0;
    double transmission = 0.0;
    bool feasible = true;

    double total() const { return sensing + transmission; }
};

// Uniform grid over [min(h_l, h_u), max(h_l, h_u)] with both ends included.
std::vector<SweepPoint> height_sweep(const Scenario& scenario, int points);

} // namespace cosched
