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

struct Point {
    double time = 0.0;
    double bits = 0.0;
};

struct FloorSpec {
    std::vector<Point> breakpoints; // strictly after origin, strictly before terminus
    Point origin;
    Point terminus;
};

struct Tunnel {
    FloorSpec floor;
    std::vector<Point> ceiling;
};

enum class VertexKind { Origin, Floor, Ceiling, Terminus };

struct Vertex {
    Point at;
    VertexKind kind = VertexKind::Floor;
};

/// Taut string as its canonical vertex list: interior vertices are exactly the
/// points where the rate changes. A rate drop marks a floor contact, a rise a
/// ceiling contact.
struct StringPath {
    std::vector<Vertex> vertices;

    RateSchedule schedule() const;
    double value_at(double t) const;
    // Rate of the segment ending at the last vertex.
    double last_rate() const;
    // Rate of the segment leaving the first vertex.
    double first_rate() const;
};

StringPath pull_path_above_floor(const FloorSpec& floor);
StringPath pull_path_in_tunnel(const Tunnel& tunnel);

RateSchedule pull_above_floor(const FloorSpec& floor);
RateSchedule pull_in_tunnel(const Tunnel& tunnel);
// Ceiling at each breakpoint and at the terminus is the demand strictly before
// it plus the buffer size.
RateSchedule pull_with_buffer(const FloorSpec& floor, double buffer);
Tunnel buffer_tunnel(const FloorSpec& floor, double buffer);

} // namespace cosched
