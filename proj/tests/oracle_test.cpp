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

#include "cosched/errors.hpp"
#include "cosched/oracle.hpp"
#include "cosched/solve.hpp"
#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace cosched {
namespace {

using testing::reference_params;
using testing::reference_scenario;
using testing::rel_diff;

TEST(Discretize, InstantsLandOnBoundaries) {
    const DiscretizedProblem d = discretize(reference_scenario(), 100);
    EXPECT_EQ(d.slot_count, 100);
    ASSERT_EQ(d.boundaries.size(), 101u);
    for (double t : {10.0, 20.0, 55.0, 80.0, 85.0, 90.0, 200.0}) {
        EXPECT_TRUE(std::find(d.boundaries.begin(), d.boundaries.end(), t) != d.boundaries.end()) << t;
    }
    int busy = 0;
    for (int k = 0; k < d.slot_count; ++k) {
        const bool inside = d.boundaries[k] >= 55.0 && d.boundaries[k + 1] <= 85.0;
        EXPECT_EQ(d.busy_slot[k], inside);
        busy += inside;
    }
    EXPECT_GT(busy, 0);
}

TEST(SolveDiscretized, SingleTaskIsUniform) {
    // With the reference radio both costs are nearly linear in the rate and
    // the per-slot rates are barely pinned; strengthen both curvatures.
    PhysicalParams p = reference_params();
    p.alpha = 2e-16;
    p.bandwidth = 20.0;
    const Scenario s({{50, 1000}}, std::nullopt, p);
    const DiscretizedSolution d = solve_discretized(s, 100, 1e-9);
    for (double r : d.sensing_rates) EXPECT_NEAR(r, 20.0, 1e-3);
    for (double r : d.transmission_rates) EXPECT_NEAR(r, 20.0, 1e-3);
    const RateSchedule flat({{0, 50, 20}});
    const double want = sensing_energy(flat, s.params()) + transmission_energy(flat, s.params());
    EXPECT_LE(rel_diff(d.energy, want), 1e-8);
    EXPECT_LE(d.duality_gap, 1e-9 * d.energy);
}

TEST(SolveDiscretized, RejectsCoarseGrid) {
    EXPECT_THROW(solve_discretized(reference_scenario(), 20), std::invalid_argument);
}

TEST(SolveDiscretized, ReferenceScenarioAgrees) {
    const Scenario s = reference_scenario();
    const Solution analytic = optimize(s);
    const DiscretizedSolution d = solve_discretized(s, 2000, 1e-9);
    EXPECT_LE(rel_diff(d.energy, analytic.total_energy), 0.02);
    // The analytic optimum lies on the 2000-slot grid's feasible set, and
    // this instance's breakpoints are all instants, so the two agree tightly.
    EXPECT_LE(rel_diff(d.energy, analytic.total_energy), 1e-6);
    EXPECT_GE(d.energy, analytic.total_energy * (1 - 1e-9));
}

TEST(SolveDiscretized, RefinementIsNonIncreasing) {
    const Scenario s({{10, 800}, {20, 400}, {30, 1100}, {60, 700}, {70, 1200}, {80, 600}, {100, 1100}},
                     BusyInterval{40, 50}, reference_params());
    double prev = 0.0;
    for (int m : {500, 1000, 2000, 4000}) {
        const DiscretizedSolution d = solve_discretized(s, m, 1e-9);
        if (prev > 0.0) EXPECT_LE(d.energy, prev * (1 + 2e-9)) << m;
        prev = d.energy;
    }
    EXPECT_LE(rel_diff(prev, optimize(s).total_energy), 0.02);
}

TEST(SolveDiscretized, SchedulesAreFeasible) {
    for (const Scenario& s : {reference_scenario(), reference_scenario(1000.0)}) {
        const DiscretizedSolution d = solve_discretized(s, 400, 1e-8);
        const FeasibilityReport r = check_feasibility(s, d.sensing(), d.transmission(), 1e-6);
        EXPECT_TRUE(r.feasible()) << r.describe();
    }
}

TEST(SolveDiscretized, RandomScenariosAgreeWithAnalytic) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 12; ++trial) {
        const bool buffered = trial % 3 == 2;
        Scenario s = testing::random_scenario(rng, testing::uniform_int(rng, 1, 5), true);
        if (buffered) s = s.with_buffer(s.max_task_data() * testing::uniform(rng, 1.2, 2.5));
        Solution a;
        try {
            a = solve(s);
        } catch (const Error&) {
            continue;
        }
        const DiscretizedSolution d = solve_discretized(s, 2000, 1e-8);
        EXPECT_LE(rel_diff(d.energy, a.total_energy), 0.02) << trial;
        EXPECT_GE(d.energy, a.total_energy * (1 - 1e-6)) << trial;
    }
}

TEST(BruteForce, SingleTaskPicksUniformRate) {
    const Scenario s({{2, 100}}, std::nullopt, reference_params());
    const double e = brute_force_tiny(s, 2, 4);
    const RateSchedule flat({{0, 2, 50}});
    EXPECT_LE(rel_diff(e, sensing_energy(flat, s.params()) + transmission_energy(flat, s.params())), 1e-12);
}

TEST(BruteForce, BusySlotCostsEnergy) {
    const PhysicalParams p = reference_params();
    const Scenario free({{3, 300}}, std::nullopt, p);
    const Scenario busy({{3, 300}}, BusyInterval{1, 2}, p);
    const double e_free = brute_force_tiny(free, 3, 6);
    const double e_busy = brute_force_tiny(busy, 3, 6);
    EXPECT_GT(e_busy, e_free);
    EXPECT_GE(e_busy, solve_discretized(busy, 300, 1e-9).energy * (1 - 1e-9));
}

TEST(BruteForce, BracketedByOracleAndRounding) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        // Integer instants on a 6-slot grid.
        const double T = 6.0;
        std::vector<Task> tasks{{T, std::round(testing::uniform(rng, 50, 200))}};
        if (trial % 2 == 0) tasks.insert(tasks.begin(), Task{2.0, std::round(testing::uniform(rng, 50, 200))});
        std::optional<BusyInterval> b;
        if (trial % 3 != 0) b = BusyInterval{3.0, 4.0};
        const Scenario s(tasks, b, reference_params());
        const int slots = trial < 5 ? 3 : 6;
        if (slots == 3 && (tasks.front().deadline == 2.0 || b)) continue;
        const int levels = slots == 6 ? 6 : 12;
        double brute = 0.0;
        try {
            brute = brute_force_tiny(s, slots, levels);
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::NoFeasiblePoint);
            continue;
        }
        const DiscretizedSolution d = solve_discretized(s, 600, 1e-9);
        EXPECT_GE(brute, d.energy * (1 - 1e-9)) << trial;
        const Solution a = solve(s);
        EXPECT_LE(brute, brute_force_rounding_bound(s, slots, levels, a.sensing, a.transmission) * (1 + 1e-12))
            << trial;
    }
}

TEST(BruteForce, RejectsLargeInstances) {
    const Scenario s({{6, 100}}, std::nullopt, reference_params());
    EXPECT_THROW(brute_force_tiny(s, 7, 4), std::invalid_argument);
    EXPECT_THROW(brute_force_tiny(s, 3, 13), std::invalid_argument);
}

TEST(HeightSweep, ReferenceScenario) {
    const Scenario s = reference_scenario();
    const Solution best = optimize(s);
    const std::vector<SweepPoint> pts = height_sweep(s, 1001);
    ASSERT_EQ(pts.size(), 1001u);
    const SearchBounds b = search_bounds(s);
    EXPECT_DOUBLE_EQ(pts.front().height, b.lower);
    EXPECT_DOUBLE_EQ(pts.back().height, b.upper);
    const double step = (b.upper - b.lower) / 1000.0;
    const auto argmin = std::min_element(pts.begin(), pts.end(),
                                         [](const SweepPoint& x, const SweepPoint& y) { return x.total() < y.total(); });
    EXPECT_LE(std::abs(argmin->height - *best.height), step);
    EXPECT_GE(argmin->total(), best.total_energy * (1 - 1e-12));
    EXPECT_DOUBLE_EQ(pts.front().total(), baseline(s, Scheme::LB, 0).total_energy);
    EXPECT_DOUBLE_EQ(pts.back().total(), baseline(s, Scheme::UB, 0).total_energy);
    // A single sub-area: convex end to end.
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
        EXPECT_GE(pts[k - 1].total() - 2 * pts[k].total() + pts[k + 1].total(), -1e-9 * pts[k].total());
    }
}

TEST(HeightSweep, FlagsInfeasibleHeights) {
    const Scenario s({{10, 10}, {100, 500}, {110, 500}}, BusyInterval{20, 90}, reference_params(), 500.0);
    const std::vector<SweepPoint> pts = height_sweep(s, 11);
    ASSERT_EQ(pts.size(), 11u);
    // Lower bound above upper: the grid still runs low to high.
    EXPECT_NEAR(pts.front().height, 459.0, 1e-6);
    EXPECT_NEAR(pts.back().height, 505.0, 1e-6);
    const double h_l = search_bounds(s, true).lower;
    for (const SweepPoint& p : pts) {
        if (p.feasible) EXPECT_GE(p.total(), energy_at_height(s, h_l, true).total() * (1 - 1e-12));
    }
}

TEST(HeightSweep, NeedsBusyInterval) {
    const Scenario s({{10, 5}}, std::nullopt, reference_params());
    try {
        height_sweep(s, 10);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoBusyInterval);
    }
}

} // namespace
} // namespace cosched
