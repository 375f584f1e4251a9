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

#include "cosched/height.hpp"

#include "cosched/errors.hpp"
#include "cosched/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cosched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxBisection = 200;

const BusyInterval& require_busy(const Scenario& s) {
    if (!s.busy()) throw Error(ErrorCode::NoBusyInterval, "scenario has no busy interval");
    return *s.busy();
}

double slope(const Point& a, const Point& b) { return (b.bits - a.bits) / (b.time - a.time); }

double same_time(const Scenario& s) { return 1e-12 * s.horizon(); }

double slope_tol(const Scenario& s) { return kSlopeEps * s.total_data() / s.horizon(); }

// Cumulative floor points of tasks whose deadline satisfies keep(t).
template <typename Pred> std::vector<Point> floor_points(const Scenario& s, Pred keep) {
    std::vector<Point> pts;
    double acc = 0.0;
    for (const Task& t : s.tasks()) {
        acc += t.data;
        if (keep(t.deadline)) pts.push_back({t.deadline, acc});
    }
    return pts;
}

FloorSpec full_floor(const Scenario& s) {
    FloorSpec f;
    f.breakpoints = floor_points(s, [&](double t) { return t < s.horizon(); });
    f.origin = {0.0, 0.0};
    f.terminus = {s.horizon(), s.total_data()};
    return f;
}

} // namespace

const char* to_string(CurveSide side) noexcept {
    switch (side) {
    case CurveSide::PreBusySensing: return "pre-busy-sensing";
    case CurveSide::PreBusyTransmission: return "pre-busy-transmission";
    case CurveSide::PostBusy: return "post-busy";
    case CurveSide::PostBusySensing: return "post-busy-sensing";
    case CurveSide::PostBusyTransmission: return "post-busy-transmission";
    }
    return "unknown";
}

double adjacent_rate_gap(const Scenario& s, double h) {
    const BusyInterval& b = require_busy(s);
    FloorSpec pre;
    pre.breakpoints = floor_points(s, [&](double t) { return t < b.start; });
    pre.origin = {0.0, 0.0};
    pre.terminus = {b.start, h};
    FloorSpec post;
    post.breakpoints = floor_points(s, [&](double t) { return t > b.end && t < s.horizon(); });
    post.origin = {b.end, h};
    post.terminus = {s.horizon(), s.total_data()};
    return pull_path_above_floor(pre).last_rate() - pull_path_above_floor(post).first_rate();
}

SearchBounds search_bounds(const Scenario& s, bool buffered) {
    const BusyInterval& b = require_busy(s);
    SearchBounds out;

    const FloorSpec floor = full_floor(s);
    if (buffered) {
        if (!s.buffer()) throw Error(ErrorCode::InfeasibleBuffer, "no buffer in scenario");
        out.upper = pull_path_in_tunnel(buffer_tunnel(floor, *s.buffer())).value_at(b.end);
    } else {
        out.upper = pull_path_above_floor(floor).value_at(b.end);
    }

    const double total = s.total_data();
    double lo = s.demand_before(b.start);
    double hi = total;
    // Single-segment balance point as the seed.
    const double seed = total * b.start / (b.start + s.horizon() - b.end);
    if (seed > lo && seed < hi) {
        (adjacent_rate_gap(s, seed) < 0.0 ? lo : hi) = seed;
    }
    for (int it = 0; it < kMaxBisection && hi - lo > 1e-10 * total; ++it) {
        const double mid = 0.5 * (lo + hi);
        (adjacent_rate_gap(s, mid) < 0.0 ? lo : hi) = mid;
    }
    out.balanced = 0.5 * (lo + hi);
    const double floor_at_end = s.demand_through(b.end);
    out.lower_clipped = out.balanced < floor_at_end;
    out.lower = std::max(out.balanced, floor_at_end);
    return out;
}

SearchBounds search_bounds(const Scenario& s) { return search_bounds(s, s.buffer().has_value()); }

namespace {

void finish(std::vector<CriticalHeight>& list, const Scenario& s, const SearchBounds& bounds) {
    const double tol = 1e-9 * s.total_data();
    std::erase_if(list, [&](const CriticalHeight& c) {
        return !(c.height > bounds.lower + tol && c.height < bounds.upper - tol);
    });
    std::stable_sort(list.begin(), list.end(),
                     [](const CriticalHeight& a, const CriticalHeight& b) { return a.height > b.height; });
    std::vector<CriticalHeight> out;
    for (const CriticalHeight& c : list) {
        if (out.empty() || out.back().height - c.height > tol) out.push_back(c);
    }
    list = std::move(out);
}

} // namespace

std::vector<CriticalHeight> critical_heights(const Scenario& s, const SearchBounds& bounds) {
    const BusyInterval& b = require_busy(s);
    const double tol = slope_tol(s);
    std::vector<CriticalHeight> out;

    auto forward = [&](const std::vector<Point>& pts, double edge, CurveSide side) {
        Point cur{0.0, 0.0};
        std::size_t i = 0;
        while (i < pts.size()) {
            double best = -kInf;
            std::size_t arg = i;
            for (std::size_t j = i; j < pts.size(); ++j) {
                const double r = slope(cur, pts[j]);
                if (r >= best - tol) {
                    best = std::max(best, r);
                    arg = j;
                }
            }
            out.push_back({cur.bits + best * (edge - cur.time), pts[arg], side, false, cur.time,
                           pts[arg].time});
            cur = pts[arg];
            i = arg + 1;
        }
    };
    forward(floor_points(s, [&](double t) { return t < b.start; }), b.start,
            CurveSide::PreBusySensing);
    forward(floor_points(s, [&](double t) { return t < b.end; }), b.end,
            CurveSide::PreBusyTransmission);

    const std::vector<Point> post =
        floor_points(s, [&](double t) { return t > b.end && t < s.horizon(); });
    Point cur{s.horizon(), s.total_data()};
    std::size_t end = post.size();
    while (end > 0) {
        double best = kInf;
        std::size_t arg = 0;
        for (std::size_t j = end; j-- > 0;) {
            const double r = slope(post[j], cur);
            if (r <= best + tol) {
                best = std::min(best, r);
                arg = j;
            }
        }
        out.push_back({cur.bits - best * (cur.time - b.end), post[arg], CurveSide::PostBusy, false,
                       post[arg].time, cur.time});
        cur = post[arg];
        end = arg;
    }
    finish(out, s, bounds);
    return out;
}

std::vector<SideState> side_states(const Scenario& s, double h, bool buffered) {
    const BusyInterval& b = require_busy(s);
    const HeightCurves curves = height_curves(s, h, buffered);
    const double eps = same_time(s);
    const double tol = slope_tol(s);
    (void)tol;

    auto fixed = [](VertexKind k) {
        return k == VertexKind::Origin || k == VertexKind::Floor || k == VertexKind::Terminus;
    };
    auto pre_chain = [&](const std::vector<Vertex>& verts) {
        std::size_t start = 0;
        for (std::size_t i = 0; i < verts.size(); ++i) {
            if (fixed(verts[i].kind)) start = i;
        }
        return std::vector<Vertex>(verts.begin() + static_cast<std::ptrdiff_t>(start), verts.end());
    };
    auto post_chain = [&](const std::vector<Vertex>& verts) {
        std::vector<Vertex> chain;
        for (const Vertex& v : verts) {
            chain.push_back(v);
            if (fixed(v.kind)) break;
        }
        return chain;
    };

    std::vector<SideState> out;

    std::vector<Vertex> verts = curves.sensing_pre.vertices;
    verts.pop_back();
    out.push_back({CurveSide::PreBusySensing, b.start, true, pre_chain(verts),
                   floor_points(s, [&](double t) { return t < b.start; })});

    verts.clear();
    for (const Vertex& v : curves.transmission.vertices) {
        if (v.at.time < b.end - eps) verts.push_back(v);
    }
    out.push_back({CurveSide::PreBusyTransmission, b.end, true, pre_chain(verts),
                   floor_points(s, [&](double t) { return t < b.end - eps; })});

    const std::vector<Point> post_floor =
        floor_points(s, [&](double t) { return t > b.end && t < s.horizon(); });
    verts.assign(curves.sensing_post.vertices.begin() + 1, curves.sensing_post.vertices.end());
    out.push_back({CurveSide::PostBusySensing, b.end, false, post_chain(verts), post_floor});

    verts.clear();
    for (const Vertex& v : curves.transmission.vertices) {
        if (v.at.time > b.end + eps) verts.push_back(v);
    }
    out.push_back({CurveSide::PostBusyTransmission, b.end, false, post_chain(verts), post_floor});
    return out;
}

std::optional<SideStep> try_next_critical_height(const SideState& st) {
    if (st.chain.empty()) return std::nullopt;
    // Tie band on slopes, scaled by the side's own data.
    double scale = 0.0;
    for (const Vertex& v : st.chain) scale = std::max(scale, std::abs(v.at.bits));
    for (const Point& p : st.floor) scale = std::max(scale, std::abs(p.bits));
    double span = 0.0;
    for (const Vertex& v : st.chain) span = std::max(span, std::abs(v.at.time - st.edge));
    const double tol = span > 0.0 ? kSlopeEps * scale / span : 0.0;

    std::optional<SideStep> best;
    auto offer = [&](double h, const Point& anchor, bool merge, double from, double to,
                     SideState next) {
        // Merges win ties so a coincident split is found on the next pass.
        if (!best || h > best->event.height || (merge && h >= best->event.height)) {
            best = SideStep{{h, anchor, st.side, merge, from, to}, std::move(next)};
        }
    };

    if (st.pre) {
        const Vertex& v = st.chain.back();
        double w = -kInf;
        std::optional<Point> hit;
        for (const Point& p : st.floor) {
            if (p.time <= v.at.time || p.time >= st.edge) continue;
            const double r = slope(v.at, p);
            if (r >= w - tol) {
                w = std::max(w, r);
                hit = p;
            }
        }
        if (hit) {
            SideState next = st;
            next.chain = {Vertex{*hit, VertexKind::Floor}};
            offer(v.at.bits + w * (st.edge - v.at.time), *hit, false, v.at.time, hit->time,
                  std::move(next));
        }
        if (v.kind == VertexKind::Ceiling && st.chain.size() >= 2) {
            const Vertex& u = st.chain[st.chain.size() - 2];
            const double r2 = slope(u.at, v.at);
            SideState next = st;
            next.chain.pop_back();
            offer(v.at.bits + r2 * (st.edge - v.at.time), v.at, true, u.at.time, v.at.time,
                  std::move(next));
        }
    } else {
        const Vertex& v = st.chain.front();
        double w = kInf;
        std::optional<Point> hit;
        for (auto it = st.floor.rbegin(); it != st.floor.rend(); ++it) {
            const Point& p = *it;
            if (p.time >= v.at.time || p.time <= st.edge) continue;
            const double r = slope(p, v.at);
            if (r <= w + tol) {
                w = std::min(w, r);
                hit = p;
            }
        }
        if (hit) {
            SideState next = st;
            next.chain = {Vertex{*hit, VertexKind::Floor}};
            offer(v.at.bits - w * (v.at.time - st.edge), *hit, false, hit->time, v.at.time,
                  std::move(next));
        }
        if (v.kind == VertexKind::Ceiling && st.chain.size() >= 2) {
            const Vertex& u = st.chain[1];
            const double r2 = slope(v.at, u.at);
            SideState next = st;
            next.chain.erase(next.chain.begin());
            offer(v.at.bits - r2 * (v.at.time - st.edge), v.at, true, v.at.time, u.at.time,
                  std::move(next));
        }
    }
    return best;
}

SideStep next_critical_height(const SideState& state, double h, double lower) {
    (void)h;
    std::optional<SideStep> step = try_next_critical_height(state);
    if (!step || !(step->event.height > lower)) {
        throw Error(ErrorCode::ExhaustedArea, "no structural change above the lower bound");
    }
    return *std::move(step);
}

std::vector<CriticalHeight> critical_heights_by_events(const Scenario& s, const SearchBounds& bounds,
                                                       bool buffered) {
    require_busy(s);
    const double tol = 1e-9 * s.total_data();
    std::vector<CriticalHeight> out;
    if (bounds.upper - bounds.lower <= tol) return out;

    std::vector<SideState> sides = side_states(s, bounds.upper, buffered);
    double h = bounds.upper;
    const std::size_t cap = 8 * (s.tasks().size() + 4) * sides.size();
    for (std::size_t iter = 0; iter < cap; ++iter) {
        std::vector<std::optional<SideStep>> steps;
        double top = -kInf;
        for (const SideState& st : sides) {
            steps.push_back(try_next_critical_height(st));
            if (steps.back()) top = std::max(top, steps.back()->event.height);
        }
        if (!(top > bounds.lower + tol)) break;
        if (top < h - tol) {
            h = top;
            for (const auto& step : steps) {
                if (step && step->event.height >= top - tol) {
                    out.push_back(step->event);
                    break;
                }
            }
        }
        for (std::size_t i = 0; i < sides.size(); ++i) {
            if (steps[i] && steps[i]->event.height >= top - tol) sides[i] = steps[i]->next;
        }
    }
    finish(out, s, bounds);
    return out;
}

std::vector<CriticalHeight> critical_heights_buffered(const Scenario& s, const SearchBounds& bounds) {
    if (!s.buffer()) throw Error(ErrorCode::InfeasibleBuffer, "no buffer in scenario");
    return critical_heights_by_events(s, bounds, true);
}

double SubArea::energy(const PhysicalParams& p, double h) const {
    const double a = p.sensing_coeff();
    const double c = p.tx_coeff();
    const double bw = p.bandwidth;
    double e = constant;
    if (sensing_pre) {
        const double d = h - sensing_pre->at.bits;
        e += a * d * d / sensing_pre->span;
    }
    if (sensing_post) {
        const double d = sensing_post->at.bits - h;
        e += a * d * d / sensing_post->span;
    }
    if (transmission_pre) {
        const double T = transmission_pre->span;
        e += c * T * std::expm1((h - transmission_pre->at.bits) / (T * bw));
    }
    if (transmission_post) {
        const double T = transmission_post->span;
        e += c * T * std::expm1((transmission_post->at.bits - h) / (T * bw));
    }
    return e;
}

double SubArea::slope(const PhysicalParams& p, double h) const {
    double ds = 0.0;
    if (sensing_pre) ds += (h - sensing_pre->at.bits) / sensing_pre->span;
    if (sensing_post) ds -= (sensing_post->at.bits - h) / sensing_post->span;
    double dt = 0.0;
    if (transmission_pre) {
        dt += std::expm1((h - transmission_pre->at.bits) / (transmission_pre->span * p.bandwidth));
    }
    if (transmission_post) {
        dt -= std::expm1((transmission_post->at.bits - h) / (transmission_post->span * p.bandwidth));
    }
    return 2.0 * p.sensing_coeff() * ds + p.tx_coeff() / p.bandwidth * dt;
}

SubArea make_sub_area(const Scenario& s, double hi, double lo, bool buffered) {
    const BusyInterval& b = require_busy(s);
    SubArea area;
    area.hi = hi;
    area.lo = lo;
    const double mid = 0.5 * (hi + lo);
    const HeightCurves curves = height_curves(s, mid, buffered);
    const double eps = same_time(s);

    const auto& pre = curves.sensing_pre.vertices;
    const Point a1 = pre[pre.size() - 2].at;
    area.sensing_pre = Anchor{a1, b.start - a1.time};
    const Point a2 = curves.sensing_post.vertices[1].at;
    area.sensing_post = Anchor{a2, a2.time - b.end};

    const StringPath& tx = curves.transmission;
    if (std::abs(tx.value_at(b.end) - mid) <= 1e-9 * s.total_data()) {
        std::optional<Point> before;
        std::optional<Point> after;
        for (const Vertex& v : tx.vertices) {
            if (v.at.time < b.end - eps) before = v.at;
            if (v.at.time > b.end + eps && !after) after = v.at;
        }
        area.transmission_pre = Anchor{*before, b.end - before->time};
        area.transmission_post = Anchor{*after, after->time - b.end};
    }

    const EnergySplit e = energy_of(curves.schedules(s), s.params());
    area.constant = 0.0;
    area.constant = e.total() - area.energy(s.params(), mid);
    return area;
}

LocalOptimum local_optimum(const SubArea& area, const Scenario& s) {
    const PhysicalParams& p = s.params();
    double lo = std::min(area.lo, area.hi);
    double hi = std::max(area.lo, area.hi);
    if (area.slope(p, lo) >= 0.0) return {lo, area.energy(p, lo)};
    if (area.slope(p, hi) <= 0.0) return {hi, area.energy(p, hi)};
    const double tol = 1e-10 * s.total_data();
    for (int it = 0; it < kMaxBisection && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        (area.slope(p, mid) < 0.0 ? lo : hi) = mid;
    }
    const double h = 0.5 * (lo + hi);
    return {h, area.energy(p, h)};
}

} // namespace cosched
