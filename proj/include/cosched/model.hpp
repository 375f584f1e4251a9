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

#include <optional>
#include <string>
#include <vector>

namespace cosched {

// Relative tie band for slope comparisons.
inline constexpr double kSlopeEps = 1e-9;

struct Task {
    double deadline = 0.0; // seconds
    double data = 0.0;     // bits
};

struct BusyInterval {
    double start = 0.0;
    double end = 0.0;

    double length() const { return end - start; }
};

struct PhysicalParams {
    double alpha = 1e-28;
    double cycles_per_bit = 500.0;
    double noise_power = 0.0; // watts
    double channel_gain = 1e-3;
    double bandwidth = 10e6;

    // alpha * C^2, the sensing power per (bit/s)^2.
    double sensing_coeff() const { return alpha * cycles_per_bit * cycles_per_bit; }
    // sigma^2 / g
    double tx_coeff() const { return noise_power / channel_gain; }
};

/// Immutable problem instance. Construction validates every invariant and
/// throws Error(InvalidScenario) or Error(InfeasibleBuffer).
class Scenario {
  public:
    Scenario(std::vector<Task> tasks, std::optional<BusyInterval> busy, PhysicalParams params,
             std::optional<double> buffer = std::nullopt);

    const std::vector<Task>& tasks() const { return tasks_; }
    const std::optional<BusyInterval>& busy() const { return busy_; }
    const PhysicalParams& params() const { return params_; }
    const std::optional<double>& buffer() const { return buffer_; }

    double horizon() const { return tasks_.back().deadline; }
    double total_data() const { return total_; }
    double max_task_data() const;

    // Cumulative demand of tasks with deadline <= t.
    double demand_through(double t) const;
    // Cumulative demand of tasks with deadline < t.
    double demand_before(double t) const;

    Scenario with_buffer(std::optional<double> buffer) const;
    Scenario with_params(const PhysicalParams& params) const;
    Scenario with_data_scale(double factor) const;
    // Scales deadlines and the busy interval.
    Scenario with_time_scale(double factor) const;

  private:
    std::vector<Task> tasks_;
    std::optional<BusyInterval> busy_;
    PhysicalParams params_;
    std::optional<double> buffer_;
    double total_ = 0.0;
};

struct Segment {
    double start = 0.0;
    double end = 0.0;
    double rate = 0.0;

    double duration() const { return end - start; }
};

/// Piecewise-constant rate function with its running integral.
class RateSchedule {
  public:
    RateSchedule() = default;
    // Throws std::invalid_argument on gaps, non-positive spans or negative rates.
    explicit RateSchedule(std::vector<Segment> segments);

    const std::vector<Segment>& segments() const { return segments_; }
    bool empty() const { return segments_.empty(); }
    std::size_t size() const { return segments_.size(); }
    double start_time() const;
    double end_time() const;

    // Integral of the rate from start_time() to t; t is clamped to the span.
    double cumulative(double t) const;
    // Rate on the segment containing t (right-continuous; last segment at the end).
    double rate_at(double t) const;
    // Segment boundaries including both ends.
    std::vector<double> breakpoints() const;

    // Merges neighbours whose rates agree within tol (absolute).
    RateSchedule merged(double tol) const;
    RateSchedule then(const RateSchedule& next) const;

  private:
    std::vector<Segment> segments_;
    std::vector<double> prefix_; // cumulative at each segment start, size()+1 entries
};

double sensing_energy(const RateSchedule& schedule, const PhysicalParams& params);
double transmission_energy(const RateSchedule& schedule, const PhysicalParams& params);

struct EpochGrid {
    std::vector<double> instants;
    std::vector<double> durations;
    std::vector<double> demands;
};

EpochGrid build_epoch_grid(const Scenario& scenario);

struct ConstraintCheck {
    bool ok = true;
    double where = 0.0;  // first violating time
    double amount = 0.0; // size of the violation in bits (or bits/s for busy sensing)
};

struct FeasibilityReport {
    bool well_formed = true;
    std::string shape_error;
    ConstraintCheck sensing_demand;
    ConstraintCheck transmission_demand;
    ConstraintCheck causality;
    ConstraintCheck busy_sensing;
    ConstraintCheck buffer;

    bool feasible() const;
    std::string describe() const;
};

// tol is relative to total data.
FeasibilityReport check_feasibility(const Scenario& scenario, const RateSchedule& sensing,
                                    const RateSchedule& transmission, double tol = 1e-9);

} // namespace cosched
