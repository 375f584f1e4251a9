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

#include "cosched/sp.hpp"

#include "cosched/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cosched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double slope(const Point& a, const Point& b) { return (b.bits - a.bits) / (b.time - a.time); }

void validate_floor(const FloorSpec& floor) {
    if (!(floor.terminus.time > floor.origin.time)) {
        throw std::invalid_argument("floor terminus must come after its origin");
    }
    double prev = floor.origin.time;
    for (const Point& p : floor.breakpoints) {
        if (!(p.time > prev) || !(p.time < floor.terminus.time)) {
            throw std::invalid_argument("floor breakpoints must be strictly inside (origin, terminus)");
        }
        prev = p.time;
    }
}

// Ceilings above the terminus never bind, so only the floor sets the scale.
double rate_scale(const FloorSpec& floor) {
    double span = std::abs(floor.terminus.bits - floor.origin.bits);
    for (const Point& p : floor.breakpoints) span = std::max(span, std::abs(p.bits - floor.origin.bits));
    return span / (floor.terminus.time - floor.origin.time);
}

// Drops interior vertices without a rate change and labels the rest.
StringPath canonical(const std::vector<Point>& raw, double tol) {
    std::vector<Point> pts;
    for (const Point& p : raw) {
        while (pts.size() >= 2 &&
               std::abs(slope(pts[pts.size() - 2], pts.back()) - slope(pts.back(), p)) <= tol) {
            pts.pop_back();
        }
        pts.push_back(p);
    }
    StringPath path;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        VertexKind kind;
        if (i == 0) {
            kind = VertexKind::Origin;
        } else if (i + 1 == pts.size()) {
            kind = VertexKind::Terminus;
        } else {
            kind = slope(pts[i], pts[i + 1]) < slope(pts[i - 1], pts[i]) ? VertexKind::Floor
                                                                         : VertexKind::Ceiling;
        }
        path.vertices.push_back({pts[i], kind});
    }
    return path;
}

struct Gate {
    double time;
    double lower;
    double upper;
};

StringPath pull_through(const Point& origin, const std::vector<Gate>& gates, double tol) {
    std::vector<Point> raw{origin};
    Point cur = origin;
    std::size_t k = 0;
    auto land = [&](Point next) {
        if (slope(cur, next) < -tol) {
            throw Error(ErrorCode::InfeasibleTunnel, "tunnel forces a decreasing curve");
        }
        raw.push_back(next);
        cur = next;
    };
    while (k < gates.size()) {
        double lo = -kInf;
        double hi = kInf;
        std::size_t lo_at = 0;
        std::size_t hi_at = 0;
        bool landed = false;
        for (std::size_t m = k; m < gates.size(); ++m) {
            const Gate& g = gates[m];
            const double dt = g.time - cur.time;
            const double l = std::isfinite(g.lower) ? (g.lower - cur.bits) / dt : -kInf;
            const double u = std::isfinite(g.upper) ? (g.upper - cur.bits) / dt : kInf;
            if (u < lo - tol) {
                land({gates[lo_at].time, gates[lo_at].lower});
                k = lo_at + 1;
                landed = true;
                break;
            }
            if (l > hi + tol) {
                land({gates[hi_at].time, gates[hi_at].upper});
                k = hi_at + 1;
                landed = true;
                break;
            }
            // Ties go to the latest instant so collinear spans stay merged.
            if (l > lo + tol) {
                lo = l;
                lo_at = m;
            } else if (l >= lo - tol) {
                lo = std::max(lo, l);
                lo_at = m;
            }
            if (u < hi - tol) {
                hi = u;
                hi_at = m;
            } else if (u <= hi + tol) {
                hi = std::min(hi, u);
                hi_at = m;
            }
        }
        if (!landed) {
            const Gate& last = gates.back();
            land({last.time, last.lower});
            break;
        }
    }
    return canonical(raw, tol);
}

} // namespace

RateSchedule StringPath::schedule() const {
    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        const Point& a = vertices[i].at;
        const Point& b = vertices[i + 1].at;
        segs.push_back({a.time, b.time, std::max(0.0, slope(a, b))});
    }
    return RateSchedule(std::move(segs));
}

double StringPath::value_at(double t) const {
    if (vertices.empty()) return 0.0;
    if (t <= vertices.front().at.time) return vertices.front().at.bits;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        const Point& a = vertices[i].at;
        const Point& b = vertices[i + 1].at;
        if (t <= b.time) {
            if (t == b.time) return b.bits;
            return a.bits + slope(a, b) * (t - a.time);
        }
    }
    return vertices.back().at.bits;
}

double StringPath::last_rate() const {
    const std::size_t n = vertices.size();
    return n < 2 ? 0.0 : slope(vertices[n - 2].at, vertices[n - 1].at);
}

double StringPath::first_rate() const {
    return vertices.size() < 2 ? 0.0 : slope(vertices[0].at, vertices[1].at);
}

StringPath pull_path_above_floor(const FloorSpec& floor) {
    validate_floor(floor);
    const double tol = kSlopeEps * rate_scale(floor);
    std::vector<Point> pts = floor.breakpoints;
    pts.push_back(floor.terminus);

    std::vector<Point> raw{floor.origin};
    Point cur = floor.origin;
    std::size_t i = 0;
    while (i < pts.size()) {
        double best = -kInf;
        std::size_t arg = i;
        for (std::size_t j = i; j < pts.size(); ++j) {
            const double s = slope(cur, pts[j]);
            if (s > best + tol) {
                best = s;
                arg = j;
            } else if (s >= best - tol) {
                best = std::max(best, s);
                arg = j;
            }
        }
        if (best < -tol) {
            throw Error(ErrorCode::InfeasibleTunnel, "floor rises above the terminus");
        }
        cur = pts[arg];
        raw.push_back(cur);
        i = arg + 1;
    }
    return canonical(raw, tol);
}

StringPath pull_path_in_tunnel(const Tunnel& tunnel) {
    const FloorSpec& floor = tunnel.floor;
    validate_floor(floor);
    const double tol = kSlopeEps * rate_scale(floor);
    const double span = floor.terminus.time - floor.origin.time;
    const double same_time = 1e-12 * std::max(span, std::abs(floor.terminus.time));
    const double bits_tol = tol * span;

    std::vector<Gate> gates;
    for (const Point& p : floor.breakpoints) gates.push_back({p.time, p.bits, kInf});
    for (const Point& c : tunnel.ceiling) {
        if (c.time <= floor.origin.time + same_time) {
            if (floor.origin.bits > c.bits + bits_tol) {
                throw Error(ErrorCode::InfeasibleTunnel, "origin lies above the ceiling");
            }
            continue;
        }
        if (c.time > floor.terminus.time + same_time) continue;
        gates.push_back({std::min(c.time, floor.terminus.time), -kInf, c.bits});
    }
    gates.push_back({floor.terminus.time, floor.terminus.bits, floor.terminus.bits});
    std::stable_sort(gates.begin(), gates.end(),
                     [](const Gate& a, const Gate& b) { return a.time < b.time; });

    std::vector<Gate> merged;
    for (const Gate& g : gates) {
        if (!merged.empty() && g.time - merged.back().time <= same_time) {
            Gate& m = merged.back();
            m.time = std::max(m.time, g.time);
            m.lower = std::max(m.lower, g.lower);
            m.upper = std::min(m.upper, g.upper);
        } else {
            merged.push_back(g);
        }
    }
    for (Gate& g : merged) {
        if (g.lower > g.upper + bits_tol) {
            throw Error(ErrorCode::InfeasibleTunnel, "ceiling below floor");
        }
        if (g.upper < g.lower) g.upper = g.lower;
    }
    // The terminus gate is pinned to the terminus value.
    merged.back().lower = merged.back().upper = floor.terminus.bits;
    return pull_through(floor.origin, merged, tol);
}

RateSchedule pull_above_floor(const FloorSpec& floor) { return pull_path_above_floor(floor).schedule(); }

RateSchedule pull_in_tunnel(const Tunnel& tunnel) { return pull_path_in_tunnel(tunnel).schedule(); }

Tunnel buffer_tunnel(const FloorSpec& floor, double buffer) {
    if (!(buffer > 0.0)) throw Error(ErrorCode::InfeasibleBuffer, "buffer must be positive");
    Tunnel tunnel{floor, {}};
    double before = floor.origin.bits;
    for (const Point& p : floor.breakpoints) {
        if (p.bits - before > buffer) {
            throw Error(ErrorCode::InfeasibleBuffer, "a single demand exceeds the buffer");
        }
        tunnel.ceiling.push_back({p.time, before + buffer});
        before = p.bits;
    }
    if (floor.terminus.bits - before > buffer) {
        throw Error(ErrorCode::InfeasibleBuffer, "a single demand exceeds the buffer");
    }
    tunnel.ceiling.push_back({floor.terminus.time, before + buffer});
    return tunnel;
}

RateSchedule pull_with_buffer(const FloorSpec& floor, double buffer) {
    if (std::isinf(buffer) && buffer > 0.0) return pull_above_floor(floor);
    return pull_in_tunnel(buffer_tunnel(floor, buffer));
}

} // namespace cosched
