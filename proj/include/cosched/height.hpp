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

#include <optional>
#include <vector>

namespace cosched {

struct SearchBounds {
    double lower = 0.0;
    double upper = 0.0;
    bool lower_clipped = false;
    double balanced = 0.0; // root of the adjacent-rate equation before clipping
};

// Uses the buffered upper bound when `buffered` is set.
SearchBounds search_bounds(const Scenario& scenario, bool buffered);
SearchBounds search_bounds(const Scenario& scenario);

// Last pre-busy sensing rate minus first post-busy sensing rate.
double adjacent_rate_gap(const Scenario& scenario, double h);

enum class CurveSide {
    PreBusySensing,
    PreBusyTransmission,
    PostBusy,
    PostBusySensing,
    PostBusyTransmission,
};

const char* to_string(CurveSide side) noexcept;

struct CriticalHeight {
    double height = 0.0;
    Point anchor;
    CurveSide side = CurveSide::PostBusy;
    bool merge = false; // a ceiling contact released rather than a floor contact made
    double unchanged_from = 0.0;
    double unchanged_to = 0.0;
};

// Three max/min-slope sweeps; infinite buffer only.
std::vector<CriticalHeight> critical_heights(const Scenario& scenario, const SearchBounds& bounds);
// Iterates next_critical_height over the four curve sides.
std::vector<CriticalHeight> critical_heights_buffered(const Scenario& scenario,
                                                      const SearchBounds& bounds);
// Same driver without the buffer; used to cross-check the sweeps.
std::vector<CriticalHeight> critical_heights_by_events(const Scenario& scenario,
                                                       const SearchBounds& bounds, bool buffered);

/// One side of the busy interval for one curve. The chain runs from the
/// nearest fixed vertex (origin, terminus or floor contact) to the vertex
/// adjacent to (edge, h); every vertex in between is a ceiling contact.
struct SideState {
    CurveSide side = CurveSide::PreBusySensing;
    double edge = 0.0;
    bool pre = true;
    std::vector<Vertex> chain; // increasing time
    std::vector<Point> floor;  // floor points on this side, increasing time
};

struct SideStep {
    CriticalHeight event;
    SideState next;
};

// Largest height below which the side's structure changes; nullopt if none.
std::optional<SideStep> try_next_critical_height(const SideState& state);
// Throws Error(ExhaustedArea) when the result would not lie above `lower`.
SideStep next_critical_height(const SideState& state, double h, double lower);

std::vector<SideState> side_states(const Scenario& scenario, double h, bool buffered);

struct Anchor {
    Point at;
    double span = 0.0; // length of the h-dependent segment
};

/// Energy in a height range where the curve structure is fixed.
struct SubArea {
    double hi = 0.0;
    double lo = 0.0;
    std::optional<Anchor> sensing_pre;
    std::optional<Anchor> sensing_post;
    std::optional<Anchor> transmission_pre;
    std::optional<Anchor> transmission_post;
    double constant = 0.0; // h-independent energy

    double energy(const PhysicalParams& params, double h) const;
    double slope(const PhysicalParams& params, double h) const;
};

SubArea make_sub_area(const Scenario& scenario, double hi, double lo, bool buffered);

struct LocalOptimum {
    double height = 0.0;
    double energy = 0.0;
};

LocalOptimum local_optimum(const SubArea& area, const Scenario& scenario);

} // namespace cosched
