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

#include "cosched/model.hpp"

#include "cosched/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cosched {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

// Neumaier summation, used wherever cumulative curves are accumulated.
class CompensatedSum {
  public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace

Scenario::Scenario(std::vector<Task> tasks, std::optional<BusyInterval> busy, PhysicalParams params,
                   std::optional<double> buffer)
    : tasks_(std::move(tasks)), busy_(busy), params_(params), buffer_(buffer) {
    if (tasks_.empty()) {
        throw Error(ErrorCode::InvalidScenario, "scenario needs at least one task");
    }
    CompensatedSum total;
    double prev = 0.0;
    for (const Task& task : tasks_) {
        if (!std::isfinite(task.deadline) || task.deadline <= prev) {
            throw Error(ErrorCode::InvalidScenario,
                        "deadlines must be positive, finite and strictly increasing");
        }
        if (!finite_nonneg(task.data)) {
            throw Error(ErrorCode::InvalidScenario, "task data must be finite and non-negative");
        }
        prev = task.deadline;
        total.add(task.data);
    }
    total_ = total.value();
    if (!(total_ > 0.0)) {
        throw Error(ErrorCode::InvalidScenario, "total data must be positive");
    }
    if (busy_) {
        const BusyInterval& b = *busy_;
        if (!std::isfinite(b.start) || !std::isfinite(b.end) || !(b.start > 0.0) ||
            !(b.start < b.end) || !(b.end < horizon())) {
            throw Error(ErrorCode::InvalidScenario,
                        "busy interval must satisfy 0 < start < end < last deadline");
        }
    }
    const double p[] = {params_.alpha, params_.cycles_per_bit, params_.noise_power,
                        params_.channel_gain, params_.bandwidth};
    for (double v : p) {
        if (!std::isfinite(v) || !(v > 0.0)) {
            throw Error(ErrorCode::InvalidScenario, "physical parameters must be positive");
        }
    }
    if (buffer_) {
        if (!std::isfinite(*buffer_) || !(*buffer_ > 0.0)) {
            throw Error(ErrorCode::InvalidScenario, "buffer must be positive and finite");
        }
        if (*buffer_ < max_task_data()) {
            throw Error(ErrorCode::InfeasibleBuffer,
                        "largest task (" + std::to_string(max_task_data()) +
                            " bits) does not fit the buffer (" + std::to_string(*buffer_) + " bits)");
        }
    }
}

double Scenario::max_task_data() const {
    double m = 0.0;
    for (const Task& t : tasks_) m = std::max(m, t.data);
    return m;
}

double Scenario::demand_through(double t) const {
    CompensatedSum s;
    for (const Task& task : tasks_) {
        if (task.deadline > t) break;
        s.add(task.data);
    }
    return s.value();
}

double Scenario::demand_before(double t) const {
    CompensatedSum s;
    for (const Task& task : tasks_) {
        if (task.deadline >= t) break;
        s.add(task.data);
    }
    return s.value();
}

Scenario Scenario::with_buffer(std::optional<double> buffer) const {
    return Scenario(tasks_, busy_, params_, buffer);
}

Scenario Scenario::with_params(const PhysicalParams& params) const {
    return Scenario(tasks_, busy_, params, buffer_);
}

Scenario Scenario::with_data_scale(double factor) const {
    std::vector<Task> tasks = tasks_;
    for (Task& t : tasks) t.data *= factor;
    return Scenario(std::move(tasks), busy_, params_, buffer_);
}

Scenario Scenario::with_time_scale(double factor) const {
    std::vector<Task> tasks = tasks_;
    for (Task& t : tasks) t.deadline *= factor;
    std::optional<BusyInterval> busy = busy_;
    if (busy) {
        busy->start *= factor;
        busy->end *= factor;
    }
    return Scenario(std::move(tasks), busy, params_, buffer_);
}

RateSchedule::RateSchedule(std::vector<Segment> segments) : segments_(std::move(segments)) {
    prefix_.reserve(segments_.size() + 1);
    CompensatedSum acc;
    prefix_.push_back(0.0);
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        if (!std::isfinite(s.start) || !std::isfinite(s.end) || !(s.end > s.start)) {
            throw std::invalid_argument("segment with non-positive span");
        }
        if (!std::isfinite(s.rate) || s.rate < 0.0) {
            throw std::invalid_argument("segment with negative or non-finite rate");
        }
        if (i > 0 && s.start != segments_[i - 1].end) {
            throw std::invalid_argument("segments are not contiguous");
        }
        acc.add(s.rate * s.duration());
        prefix_.push_back(acc.value());
    }
}

double RateSchedule::start_time() const { return segments_.empty() ? 0.0 : segments_.front().start; }

double RateSchedule::end_time() const { return segments_.empty() ? 0.0 : segments_.back().end; }

double RateSchedule::cumulative(double t) const {
    if (segments_.empty() || t <= segments_.front().start) return 0.0;
    if (t >= segments_.back().end) return prefix_.back();
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& s) { return v < s.end; });
    const std::size_t i = static_cast<std::size_t>(it - segments_.begin());
    const Segment& s = segments_[i];
    if (t == s.end) return prefix_[i + 1];
    return prefix_[i] + s.rate * (t - s.start);
}

double RateSchedule::rate_at(double t) const {
    if (segments_.empty()) return 0.0;
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& s) { return v < s.end; });
    if (it == segments_.end()) return segments_.back().rate;
    return it->rate;
}

std::vector<double> RateSchedule::breakpoints() const {
    std::vector<double> out;
    if (segments_.empty()) return out;
    out.reserve(segments_.size() + 1);
    out.push_back(segments_.front().start);
    for (const Segment& s : segments_) out.push_back(s.end);
    return out;
}

RateSchedule RateSchedule::merged(double tol) const {
    std::vector<Segment> out;
    for (const Segment& s : segments_) {
        if (!out.empty() && std::abs(out.back().rate - s.rate) <= tol) {
            Segment& last = out.back();
            // Keep the area exact.
            const double area = last.rate * last.duration() + s.rate * s.duration();
            last.end = s.end;
            last.rate = area / last.duration();
        } else {
            out.push_back(s);
        }
    }
    return RateSchedule(std::move(out));
}

RateSchedule RateSchedule::then(const RateSchedule& next) const {
    if (segments_.empty()) return next;
    if (next.segments_.empty()) return *this;
    std::vector<Segment> out = segments_;
    out.insert(out.end(), next.segments_.begin(), next.segments_.end());
    return RateSchedule(std::move(out));
}

double sensing_energy(const RateSchedule& schedule, const PhysicalParams& params) {
    CompensatedSum e;
    for (const Segment& s : schedule.segments()) e.add(s.rate * s.rate * s.duration());
    return params.sensing_coeff() * e.value();
}

double transmission_energy(const RateSchedule& schedule, const PhysicalParams& params) {
    CompensatedSum e;
    for (const Segment& s : schedule.segments()) {
        e.add(std::expm1(s.rate / params.bandwidth) * s.duration());
    }
    return params.tx_coeff() * e.value();
}

EpochGrid build_epoch_grid(const Scenario& scenario) {
    std::vector<std::pair<double, double>> marks;
    for (const Task& t : scenario.tasks()) marks.emplace_back(t.deadline, t.data);
    if (scenario.busy()) {
        marks.emplace_back(scenario.busy()->start, 0.0);
        marks.emplace_back(scenario.busy()->end, 0.0);
    }
    std::sort(marks.begin(), marks.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    EpochGrid grid;
    for (const auto& [t, d] : marks) {
        if (!grid.instants.empty() && grid.instants.back() == t) {
            grid.demands.back() += d;
            continue;
        }
        const double prev = grid.instants.empty() ? 0.0 : grid.instants.back();
        grid.instants.push_back(t);
        grid.durations.push_back(t - prev);
        grid.demands.push_back(d);
    }
    return grid;
}

bool FeasibilityReport::feasible() const {
    return well_formed && sensing_demand.ok && transmission_demand.ok && causality.ok &&
           busy_sensing.ok && buffer.ok;
}

std::string FeasibilityReport::describe() const {
    std::ostringstream os;
    if (!well_formed) os << "shape: " << shape_error << "\n";
    auto line = [&os](const char* name, const ConstraintCheck& c) {
        os << name << ": ";
        if (c.ok) {
            os << "ok\n";
        } else {
            os << "violated at t=" << c.where << " by " << c.amount << "\n";
        }
    };
    line("sensing demand", sensing_demand);
    line("transmission demand", transmission_demand);
    line("causality", causality);
    line("busy sensing", busy_sensing);
    line("buffer", buffer);
    return os.str();
}

namespace {

void record(ConstraintCheck& c, double where, double amount) {
    if (c.ok) {
        c.ok = false;
        c.where = where;
        c.amount = amount;
    }
}

bool spans(const RateSchedule& s, double horizon, double tol) {
    return !s.empty() && std::abs(s.start_time()) <= tol && std::abs(s.end_time() - horizon) <= tol;
}

} // namespace

FeasibilityReport check_feasibility(const Scenario& scenario, const RateSchedule& sensing,
                                    const RateSchedule& transmission, double tol) {
    FeasibilityReport rep;
    const double horizon = scenario.horizon();
    const double time_tol = 1e-12 * horizon;
    if (!spans(sensing, horizon, time_tol) || !spans(transmission, horizon, time_tol)) {
        rep.well_formed = false;
        rep.shape_error = "schedules must span [0, last deadline]";
        return rep;
    }
    const double bits_tol = tol * scenario.total_data();
    const double rate_tol = bits_tol / horizon;

    for (const Task& task : scenario.tasks()) {
        const double need = scenario.demand_through(task.deadline);
        const double s = sensing.cumulative(task.deadline);
        const double r = transmission.cumulative(task.deadline);
        if (s < need - bits_tol) record(rep.sensing_demand, task.deadline, need - s);
        if (r < need - bits_tol) record(rep.transmission_demand, task.deadline, need - r);
    }

    std::vector<double> times = sensing.breakpoints();
    const std::vector<double> tb = transmission.breakpoints();
    times.insert(times.end(), tb.begin(), tb.end());
    for (const Task& task : scenario.tasks()) times.push_back(task.deadline);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    for (double t : times) {
        const double gap = transmission.cumulative(t) - sensing.cumulative(t);
        if (gap > bits_tol) record(rep.causality, t, gap);
    }

    if (scenario.busy()) {
        const BusyInterval b = *scenario.busy();
        for (const Segment& s : sensing.segments()) {
            const double lo = std::max(s.start, b.start);
            const double hi = std::min(s.end, b.end);
            if (hi - lo > time_tol && s.rate > rate_tol) {
                record(rep.busy_sensing, lo, s.rate);
            }
        }
    }

    if (scenario.buffer()) {
        const EpochGrid grid = build_epoch_grid(scenario);
        double consumed = 0.0; // demand of instants strictly before the current one
        for (std::size_t j = 0; j < grid.instants.size(); ++j) {
            const double t = grid.instants[j];
            const double held = transmission.cumulative(t) - consumed;
            if (held > *scenario.buffer() + bits_tol) {
                record(rep.buffer, t, held - *scenario.buffer());
            }
            consumed += grid.demands[j];
        }
    }
    return rep;
}

} // namespace cosched
