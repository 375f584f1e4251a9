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

#include "cosched/solve.hpp"

#include "cosched/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace cosched {

namespace {

std::vector<Point> cumulative_points(const Scenario& s, double from, double to, bool include_from) {
    std::vector<Point> pts;
    double acc = 0.0;
    for (const Task& t : s.tasks()) {
        acc += t.data;
        const bool after = include_from ? t.deadline >= from : t.deadline > from;
        if (after && t.deadline < to) pts.push_back({t.deadline, acc});
    }
    return pts;
}

double rate_tol(const Scenario& s) { return kSlopeEps * s.total_data() / s.horizon(); }

} // namespace

SchedulePair HeightCurves::schedules(const Scenario& s) const {
    const RateSchedule tx = transmission.schedule();
    if (!s.busy()) return {tx, tx};
    const BusyInterval& b = *s.busy();
    const RateSchedule idle(std::vector<Segment>{{b.start, b.end, 0.0}});
    const RateSchedule sensing =
        sensing_pre.schedule().then(idle).then(sensing_post.schedule()).merged(rate_tol(s));
    return {sensing, tx};
}

HeightCurves height_curves(const Scenario& s, double h, bool buffered) {
    const double total = s.total_data();
    FloorSpec all;
    all.breakpoints = cumulative_points(s, 0.0, s.horizon(), true);
    all.origin = {0.0, 0.0};
    all.terminus = {s.horizon(), total};
    if (buffered && !s.buffer()) throw Error(ErrorCode::InfeasibleBuffer, "no buffer in scenario");

    HeightCurves out;
    if (!s.busy()) {
        out.transmission = buffered ? pull_path_in_tunnel(buffer_tunnel(all, *s.buffer()))
                                    : pull_path_above_floor(all);
        return out;
    }
    const BusyInterval& b = *s.busy();
    const double tol = 1e-12 * total;
    const double need = s.demand_through(b.end);
    if (!std::isfinite(h) || h < need - tol || h > total + tol) {
        throw Error(ErrorCode::InfeasibleHeight, "height outside [demand at busy end, total data]");
    }
    h = std::clamp(h, need, total);

    // Data due inside the blackout must be sensed before it, hence the terminus.
    FloorSpec pre;
    pre.breakpoints = cumulative_points(s, 0.0, b.start, true);
    pre.origin = {0.0, 0.0};
    pre.terminus = {b.start, h};
    out.sensing_pre = pull_path_above_floor(pre);

    FloorSpec post;
    post.breakpoints = cumulative_points(s, b.end, s.horizon(), false);
    post.origin = {b.end, h};
    post.terminus = {s.horizon(), total};
    out.sensing_post = pull_path_above_floor(post);

    Tunnel tunnel;
    if (buffered) {
        tunnel = buffer_tunnel(all, *s.buffer());
        const double buf = *s.buffer();
        tunnel.ceiling.push_back({b.start, std::min(h, s.demand_before(b.start) + buf)});
        tunnel.ceiling.push_back({b.end, std::min(h, s.demand_before(b.end) + buf)});
    } else {
        tunnel.floor = all;
        tunnel.ceiling = {{b.start, h}, {b.end, h}};
    }
    out.transmission = pull_path_in_tunnel(tunnel);
    return out;
}

SchedulePair rates_for_height(const Scenario& s, double h) {
    return height_curves(s, h, false).schedules(s);
}

SchedulePair rates_for_height_buffered(const Scenario& s, double h) {
    if (!s.buffer()) throw Error(ErrorCode::InfeasibleBuffer, "no buffer in scenario");
    return height_curves(s, h, true).schedules(s);
}

EnergySplit energy_of(const SchedulePair& pair, const PhysicalParams& params) {
    return {sensing_energy(pair.sensing, params), transmission_energy(pair.transmission, params)};
}

EnergySplit energy_at_height(const Scenario& s, double h, bool buffered) {
    return energy_of(height_curves(s, h, buffered).schedules(s), s.params());
}

const char* to_string(Scheme scheme) noexcept {
    switch (scheme) {
    case Scheme::JSTRC: return "JSTRC";
    case Scheme::UB: return "UB";
    case Scheme::LB: return "LB";
    case Scheme::RH: return "RH";
    }
    return "unknown";
}

std::optional<Scheme> parse_scheme(const std::string& name) {
    for (Scheme s : {Scheme::JSTRC, Scheme::UB, Scheme::LB, Scheme::RH}) {
        if (name == to_string(s)) return s;
    }
    return std::nullopt;
}

namespace {

Solution assemble(const Scenario& s, SchedulePair pair, Scheme scheme, bool buffered) {
    const FeasibilityReport rep = check_feasibility(s, pair.sensing, pair.transmission);
    // Infinite-buffer schedules are not held to a buffer the scenario may carry.
    const bool ok = rep.well_formed && rep.sensing_demand.ok && rep.transmission_demand.ok &&
                    rep.causality.ok && rep.busy_sensing.ok && (!buffered || rep.buffer.ok);
    if (!ok) throw std::logic_error("solver produced an infeasible schedule:\n" + rep.describe());
    Solution sol;
    sol.scheme = scheme;
    sol.buffered = buffered;
    const EnergySplit e = energy_of(pair, s.params());
    sol.sensing = std::move(pair.sensing);
    sol.transmission = std::move(pair.transmission);
    sol.sensing_energy = e.sensing;
    sol.transmission_energy = e.transmission;
    sol.total_energy = e.total();
    return sol;
}

Solution no_busy_solution(const Scenario& s, bool buffered) {
    return assemble(s, height_curves(s, 0.0, buffered).schedules(s), Scheme::JSTRC, buffered);
}

Solution search(const Scenario& s, bool buffered) {
    if (!s.busy()) return no_busy_solution(s, buffered);
    const SearchBounds bounds = search_bounds(s, buffered);
    const double tol = 1e-9 * s.total_data();

    std::vector<CriticalHeight> crit;
    std::vector<AreaOptimum> areas;
    std::vector<double> candidates;
    if (buffered && bounds.lower >= bounds.upper - tol) {
        // Lower bound dominates: the optimum sits exactly on it.
        candidates.push_back(bounds.lower);
    } else {
        crit = buffered ? critical_heights_buffered(s, bounds) : critical_heights(s, bounds);
        std::vector<double> edges{bounds.upper};
        for (const CriticalHeight& c : crit) edges.push_back(c.height);
        edges.push_back(bounds.lower);
        candidates = edges;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            if (edges[i] - edges[i + 1] <= 0.0) continue;
            const SubArea area = make_sub_area(s, edges[i], edges[i + 1], buffered);
            const LocalOptimum opt = local_optimum(area, s);
            candidates.push_back(opt.height);
            areas.push_back({edges[i], edges[i + 1], opt.height,
                             energy_at_height(s, opt.height, buffered).total()});
        }
    }

    double best_h = candidates.front();
    double best_e = energy_at_height(s, best_h, buffered).total();
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double h = candidates[i];
        const double e = energy_at_height(s, h, buffered).total();
        const double band = 1e-12 * std::max(std::abs(e), std::abs(best_e));
        if (e < best_e - band || (std::abs(e - best_e) <= band && h > best_h)) {
            best_h = h;
            best_e = e;
        }
    }

    Solution sol = assemble(s, height_curves(s, best_h, buffered).schedules(s), Scheme::JSTRC, buffered);
    sol.height = best_h;
    sol.bounds = bounds;
    sol.critical_heights = std::move(crit);
    sol.areas = std::move(areas);
    return sol;
}

} // namespace

Solution optimize(const Scenario& s) { return search(s, false); }

Solution optimize_buffered(const Scenario& s) {
    if (!s.buffer()) throw Error(ErrorCode::InfeasibleBuffer, "no buffer in scenario");
    return search(s, true);
}

Solution solve(const Scenario& s) { return s.buffer() ? optimize_buffered(s) : optimize(s); }

Solution solution_at_height(const Scenario& s, const SearchBounds& bounds, double h, Scheme scheme) {
    const bool buffered = s.buffer().has_value();
    Solution sol = assemble(s, height_curves(s, h, buffered).schedules(s), scheme, buffered);
    sol.height = h;
    sol.bounds = bounds;
    return sol;
}

double random_height(const SearchBounds& bounds, const Scenario& s, double u) {
    const double floor_at_end = s.busy() ? s.demand_through(s.busy()->end) : 0.0;
    const double lo = std::max(std::min(bounds.lower, bounds.upper), floor_at_end);
    const double hi = std::max(bounds.lower, bounds.upper);
    return lo + u * (hi - lo);
}

Solution baseline(const Scenario& s, Scheme scheme, std::uint64_t seed) {
    if (!s.busy()) throw Error(ErrorCode::NoBusyInterval, "baselines need a busy interval");
    const SearchBounds bounds = search_bounds(s);
    const double floor_at_end = s.demand_through(s.busy()->end);
    double h = 0.0;
    switch (scheme) {
    case Scheme::UB: h = std::max(bounds.upper, floor_at_end); break;
    case Scheme::LB: h = bounds.lower; break;
    case Scheme::RH: {
        std::mt19937_64 rng(seed);
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        h = random_height(bounds, s, u);
        break;
    }
    case Scheme::JSTRC: return solve(s);
    }
    return solution_at_height(s, bounds, h, scheme);
}

} // namespace cosched
