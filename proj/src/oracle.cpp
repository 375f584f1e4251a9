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

#include "cosched/oracle.hpp"

#include "cosched/errors.hpp"
#include "cosched/height.hpp"
#include "cosched/solve.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace cosched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> instant_list(const Scenario& s) {
    std::vector<double> t{0.0};
    for (const Task& task : s.tasks()) t.push_back(task.deadline);
    if (s.busy()) {
        t.push_back(s.busy()->start);
        t.push_back(s.busy()->end);
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

} // namespace

DiscretizedProblem discretize(const Scenario& s, int slots) {
    const std::vector<double> marks = instant_list(s);
    const std::size_t gaps = marks.size() - 1;
    if (slots < static_cast<int>(gaps)) {
        throw std::invalid_argument("fewer slots than epochs");
    }
    std::vector<int> count(gaps, 1);
    // Longest current piece first; lower index on ties.
    auto longer = [&](std::size_t a, std::size_t b) {
        const double la = (marks[a + 1] - marks[a]) / count[a];
        const double lb = (marks[b + 1] - marks[b]) / count[b];
        return la < lb || (la == lb && a > b);
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(longer)> heap(longer);
    for (std::size_t g = 0; g < gaps; ++g) heap.push(g);
    for (int extra = slots - static_cast<int>(gaps); extra > 0; --extra) {
        const std::size_t g = heap.top();
        heap.pop();
        ++count[g];
        heap.push(g);
    }

    DiscretizedProblem p;
    p.slot_count = slots;
    p.boundaries.push_back(0.0);
    p.instant_boundary.push_back(true);
    for (std::size_t g = 0; g < gaps; ++g) {
        const double a = marks[g];
        const double b = marks[g + 1];
        for (int i = 1; i <= count[g]; ++i) {
            p.boundaries.push_back(i == count[g] ? b : a + (b - a) * i / count[g]);
            p.instant_boundary.push_back(i == count[g]);
        }
    }
    for (int k = 0; k < slots; ++k) {
        const double mid = 0.5 * (p.boundaries[k] + p.boundaries[k + 1]);
        p.busy_slot.push_back(s.busy() && mid > s.busy()->start && mid < s.busy()->end);
    }
    return p;
}

namespace {

RateSchedule slot_schedule(const std::vector<double>& bounds, const std::vector<double>& rates) {
    std::vector<Segment> segs;
    for (std::size_t k = 0; k < rates.size(); ++k) {
        segs.push_back({bounds[k], bounds[k + 1], std::max(0.0, rates[k])});
    }
    return RateSchedule(std::move(segs));
}

// g(x) = c0 * x[i0] + c1 * x[i1] + d >= 0; an index of -1 drops the term.
struct Row {
    int i0;
    double c0;
    int i1;
    double c1;
    double d;

    double eval(const Eigen::VectorXd& x) const {
        double v = d;
        if (i0 >= 0) v += c0 * x[i0];
        if (i1 >= 0) v += c1 * x[i1];
        return v;
    }
};

struct CostTerm {
    int prev; // -1 for the fixed zero at time 0
    int cur;
    double dt;
    bool sensing;
};

class BarrierProblem {
  public:
    BarrierProblem(const Scenario& s, const DiscretizedProblem& grid) : s_(s), grid_(grid) {
        const int M = grid.slot_count;
        rid_.assign(M + 1, -1);
        sid_.assign(M + 1, -1);
        int n = 0;
        for (int k = 1; k <= M; ++k) rid_[k] = n++;
        for (int k = 1; k <= M; ++k) sid_[k] = grid.busy_slot[k - 1] ? sid_[k - 1] : n++;
        n_ = n;

        for (int k = 1; k <= M; ++k) {
            const double dt = grid.boundaries[k] - grid.boundaries[k - 1];
            terms_.push_back({rid_[k - 1], rid_[k], dt, false});
            rows_.push_back({rid_[k], 1.0, rid_[k - 1], -1.0, 0.0});
            if (!grid.busy_slot[k - 1]) {
                terms_.push_back({sid_[k - 1], sid_[k], dt, true});
                rows_.push_back({sid_[k], 1.0, sid_[k - 1], -1.0, 0.0});
            }
            // Causality inside a busy run follows from its last boundary.
            const bool inner_busy = k < M && grid.busy_slot[k - 1] && grid.busy_slot[k];
            if (!inner_busy) rows_.push_back({sid_[k], 1.0, rid_[k], -1.0, 0.0});
        }
        double acc = 0.0;
        std::size_t next_task = 0;
        for (int k = 1; k <= M; ++k) {
            if (!grid.instant_boundary[k]) continue;
            const double t = grid.boundaries[k];
            const double before = acc;
            bool deadline = false;
            while (next_task < s.tasks().size() && s.tasks()[next_task].deadline <= t) {
                acc += s.tasks()[next_task].data;
                deadline = true;
                ++next_task;
            }
            if (deadline && acc > 0.0) {
                rows_.push_back({rid_[k], 1.0, -1, 0.0, -acc});
                rows_.push_back({sid_[k], 1.0, -1, 0.0, -acc});
            }
            if (s.buffer()) rows_.push_back({rid_[k], -1.0, -1, 0.0, before + *s.buffer()});
        }
        build_pattern();
    }

    int size() const { return n_; }
    std::size_t rows() const { return rows_.size(); }

    Eigen::VectorXd start() const {
        const auto& tasks = s_.tasks();
        const std::size_t N = tasks.size();
        const double D = s_.total_data();
        std::vector<double> at{0.0};
        std::vector<double> val{0.0};
        double F = 0.0;
        if (s_.buffer()) {
            const double buf = *s_.buffer();
            double slack = kInf;
            for (const Task& t : tasks) slack = std::min(slack, buf - t.data);
            if (!(slack > 0.0)) {
                throw Error(ErrorCode::NotConverged,
                            "buffer equals a task size; no strictly feasible point exists");
            }
            const double eps = 0.25 * slack / static_cast<double>(N);
            for (std::size_t n = 0; n < N; ++n) {
                F += tasks[n].data;
                at.push_back(tasks[n].deadline);
                val.push_back(F + 0.5 * (buf - tasks[n].data) + eps * static_cast<double>(n + 1));
            }
        } else {
            const double eps = 0.01 * D / static_cast<double>(N);
            for (std::size_t n = 0; n < N; ++n) {
                F += tasks[n].data;
                at.push_back(tasks[n].deadline);
                val.push_back(F + eps * static_cast<double>(n + 1));
            }
        }
        Eigen::VectorXd x(n_);
        const int M = grid_.slot_count;
        std::size_t seg = 0;
        for (int k = 1; k <= M; ++k) {
            const double t = grid_.boundaries[k];
            while (seg + 2 < at.size() && at[seg + 1] < t) ++seg;
            const double w = (t - at[seg]) / (at[seg + 1] - at[seg]);
            x[rid_[k]] = val[seg] + w * (val[seg + 1] - val[seg]);
        }
        const double cap = val.back() + 0.01 * D;
        const double creep = 0.01 * D / s_.horizon();
        double idle = 0.0;
        for (int k = 1; k <= M; ++k) {
            if (grid_.busy_slot[k - 1]) continue;
            idle += grid_.boundaries[k] - grid_.boundaries[k - 1];
            x[sid_[k]] = cap + creep * idle;
        }
        return x;
    }

    double cost(const Eigen::VectorXd& x) const {
        double f = 0.0;
        for (const CostTerm& c : terms_) f += term_value(c, diff(c, x));
        return f;
    }

    bool strictly_feasible(const Eigen::VectorXd& x) const {
        for (const Row& r : rows_) {
            if (!(r.eval(x) > 0.0)) return false;
        }
        return true;
    }

    struct Centering {
        int steps = 0;
        double decrement = 0.0; // half the squared Newton decrement at exit
    };

    // Minimizes t * cost / scale - sum log g from x.
    Centering center(Eigen::VectorXd& x, double t, double scale) {
        const double w = t / scale;
        Centering out;
        for (; out.steps < 200; ++out.steps) {
            std::fill(values_.begin(), values_.end(), 0.0);
            Eigen::VectorXd grad = Eigen::VectorXd::Zero(n_);
            std::size_t slot = 0;
            for (const CostTerm& c : terms_) {
                const double u = diff(c, x);
                double d1;
                double d2;
                term_derivs(c, u, d1, d2);
                d1 *= w;
                d2 *= w;
                if (c.prev >= 0) grad[c.prev] -= d1;
                grad[c.cur] += d1;
                add_pair(slot, c.prev, -1.0, c.cur, 1.0, d2);
            }
            std::vector<double> g(rows_.size());
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                const Row& r = rows_[i];
                g[i] = r.eval(x);
                const double inv = 1.0 / g[i];
                if (r.i0 >= 0) grad[r.i0] -= r.c0 * inv;
                if (r.i1 >= 0) grad[r.i1] -= r.c1 * inv;
                add_pair(slot, r.i0, r.c0, r.i1, r.c1, inv * inv);
            }
            for (std::size_t i = 0; i < slots_.size(); ++i) hessian_.valuePtr()[slots_[i]] += values_[i];
            if (!analyzed_) {
                ldlt_.analyzePattern(hessian_);
                analyzed_ = true;
            }
            ldlt_.factorize(hessian_);
            std::fill(hessian_.valuePtr(), hessian_.valuePtr() + hessian_.nonZeros(), 0.0);
            if (ldlt_.info() != Eigen::Success) {
                throw Error(ErrorCode::NotConverged, "Newton system is not positive definite");
            }
            const Eigen::VectorXd dx = -ldlt_.solve(grad);
            const double slope = grad.dot(dx);
            out.decrement = -slope / 2.0;
            if (out.decrement <= 1e-9) break;

            double alpha = 1.0;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                const Row& r = rows_[i];
                double dg = 0.0;
                if (r.i0 >= 0) dg += r.c0 * dx[r.i0];
                if (r.i1 >= 0) dg += r.c1 * dx[r.i1];
                if (dg < 0.0) alpha = std::min(alpha, -0.99 * g[i] / dg);
            }
            bool moved = false;
            for (int back = 0; back < 80; ++back) {
                if (phi_change(x, dx, alpha, w, g) <= 0.25 * alpha * slope) {
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!moved) break;
            x += alpha * dx;
        }
        return out;
    }

  private:
    static double diff(const CostTerm& c, const Eigen::VectorXd& x) {
        return x[c.cur] - (c.prev >= 0 ? x[c.prev] : 0.0);
    }

    double term_value(const CostTerm& c, double u) const {
        const PhysicalParams& p = s_.params();
        if (c.sensing) return p.sensing_coeff() * u * u / c.dt;
        return p.tx_coeff() * c.dt * std::expm1(u / (c.dt * p.bandwidth));
    }

    void term_derivs(const CostTerm& c, double u, double& d1, double& d2) const {
        const PhysicalParams& p = s_.params();
        if (c.sensing) {
            d1 = 2.0 * p.sensing_coeff() * u / c.dt;
            d2 = 2.0 * p.sensing_coeff() / c.dt;
        } else {
            const double e = std::exp(u / (c.dt * p.bandwidth));
            d1 = p.tx_coeff() * e / p.bandwidth;
            d2 = p.tx_coeff() * e / (p.bandwidth * p.bandwidth * c.dt);
        }
    }

    // Barrier objective change along dx, summed term by term to avoid cancellation.
    double phi_change(const Eigen::VectorXd& x, const Eigen::VectorXd& dx, double a, double w,
                      const std::vector<double>& g) const {
        const PhysicalParams& p = s_.params();
        double f = 0.0;
        for (const CostTerm& c : terms_) {
            const double u = diff(c, x);
            const double du = a * diff(c, dx);
            if (c.sensing) {
                f += p.sensing_coeff() * du * (2.0 * u + du) / c.dt;
            } else {
                const double z = c.dt * p.bandwidth;
                f += p.tx_coeff() * c.dt * std::exp(u / z) * std::expm1(du / z);
            }
        }
        double barrier = 0.0;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Row& r = rows_[i];
            double dg = 0.0;
            if (r.i0 >= 0) dg += r.c0 * dx[r.i0];
            if (r.i1 >= 0) dg += r.c1 * dx[r.i1];
            const double ratio = a * dg / g[i];
            if (!(ratio > -1.0)) return kInf;
            barrier -= std::log1p(ratio);
        }
        return w * f + barrier;
    }

    // Rank-one contribution scale * (c0 e_i0 + c1 e_i1)(...)^T in walk order.
    void add_pair(std::size_t& slot, int i0, double c0, int i1, double c1, double scale) {
        if (i0 >= 0) values_[slot++] += scale * c0 * c0;
        if (i1 >= 0) values_[slot++] += scale * c1 * c1;
        if (i0 >= 0 && i1 >= 0) values_[slot++] += scale * c0 * c1;
    }

    void build_pattern() {
        std::vector<Eigen::Triplet<double>> trip;
        std::vector<std::pair<int, int>> where;
        auto push = [&](int i0, int i1) {
            if (i0 >= 0) where.emplace_back(i0, i0);
            if (i1 >= 0) where.emplace_back(i1, i1);
            if (i0 >= 0 && i1 >= 0) where.emplace_back(std::max(i0, i1), std::min(i0, i1));
        };
        for (const CostTerm& c : terms_) push(c.prev, c.cur);
        for (const Row& r : rows_) push(r.i0, r.i1);
        for (const auto& [i, j] : where) trip.emplace_back(i, j, 1.0);
        hessian_.resize(n_, n_);
        hessian_.setFromTriplets(trip.begin(), trip.end());
        hessian_.makeCompressed();
        slots_.clear();
        for (const auto& [i, j] : where) {
            slots_.push_back(static_cast<std::size_t>(&hessian_.coeffRef(i, j) - hessian_.valuePtr()));
        }
        values_.assign(slots_.size(), 0.0);
        std::fill(hessian_.valuePtr(), hessian_.valuePtr() + hessian_.nonZeros(), 0.0);
    }

    const Scenario& s_;
    const DiscretizedProblem& grid_;
    int n_ = 0;
    std::vector<int> rid_;
    std::vector<int> sid_;
    std::vector<CostTerm> terms_;
    std::vector<Row> rows_;

    Eigen::SparseMatrix<double> hessian_; // lower triangle
    std::vector<std::size_t> slots_;
    std::vector<double> values_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
    bool analyzed_ = false;

  public:
    std::vector<double> rates(const Eigen::VectorXd& x, bool sensing) const {
        std::vector<double> out;
        const std::vector<int>& id = sensing ? sid_ : rid_;
        for (int k = 1; k <= grid_.slot_count; ++k) {
            const double dt = grid_.boundaries[k] - grid_.boundaries[k - 1];
            const double prev = id[k - 1] >= 0 ? x[id[k - 1]] : 0.0;
            out.push_back((x[id[k]] - prev) / dt);
        }
        return out;
    }
};

} // namespace

RateSchedule DiscretizedSolution::sensing() const { return slot_schedule(boundaries, sensing_rates); }

RateSchedule DiscretizedSolution::transmission() const {
    return slot_schedule(boundaries, transmission_rates);
}

DiscretizedSolution solve_discretized(const Scenario& s, int slots, double tol) {
    const std::size_t instants = build_epoch_grid(s).instants.size();
    if (slots < static_cast<int>(10 * instants)) {
        throw std::invalid_argument("slot count must be at least ten times the number of instants");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const DiscretizedProblem grid = discretize(s, slots);
    BarrierProblem prob(s, grid);
    Eigen::VectorXd x = prob.start();
    if (!prob.strictly_feasible(x)) {
        throw Error(ErrorCode::NotConverged, "start point is not strictly feasible");
    }
    const double scale = prob.cost(x);
    const double m = static_cast<double>(prob.rows());
    double t = m;
    const double mu = 20.0;
    int steps = 0;
    bool certified = false;
    double stalled = 0.0;
    for (int outer = 0; outer < 40; ++outer) {
        const auto c = prob.center(x, t, scale);
        steps += c.steps;
        // m/t bounds the scaled gap only near the central path.
        if (c.decrement > 1e-6) {
            stalled = c.decrement;
            break;
        }
        if (m / t <= tol * prob.cost(x) / scale) {
            certified = true;
            break;
        }
        t *= mu;
    }
    if (!certified || !prob.strictly_feasible(x)) {
        std::ostringstream msg;
        msg << "barrier gap " << m / t * scale << " J not certified below " << tol << " relative";
        if (stalled > 0.0) msg << " (centering stalled, decrement " << stalled << ")";
        throw Error(ErrorCode::NotConverged, msg.str());
    }

    DiscretizedSolution out;
    out.boundaries = grid.boundaries;
    out.sensing_rates = prob.rates(x, true);
    out.transmission_rates = prob.rates(x, false);
    for (double& r : out.sensing_rates) r = r < 1e-12 ? 0.0 : r;
    for (double& r : out.transmission_rates) r = r < 1e-12 ? 0.0 : r;
    out.energy = sensing_energy(out.sensing(), s.params()) +
                 transmission_energy(out.transmission(), s.params());
    out.duality_gap = m / t * scale;
    out.newton_steps = steps;
    return out;
}

namespace {

struct TinyGrid {
    int slots;
    int levels;
    double dt;
    double unit;  // bits per level per slot
    std::vector<bool> busy;
    std::vector<double> need;  // demand through boundary k (k = 1..slots), NaN if no deadline
    std::vector<double> limit; // buffer limit at instant boundaries, +inf otherwise
    std::vector<double> e_sense;
    std::vector<double> e_tx;
};

TinyGrid tiny_grid(const Scenario& s, int slots, int levels) {
    if (slots < 1 || slots > 6 || levels < 1 || levels > 12) {
        throw std::invalid_argument("brute force supports at most 6 slots and 12 rate levels");
    }
    TinyGrid g;
    g.slots = slots;
    g.levels = levels;
    g.dt = s.horizon() / slots;
    const double rate_unit = 2.0 * s.total_data() / (s.horizon() * levels);
    g.unit = rate_unit * g.dt;
    const double snap = 1e-9 * s.horizon();
    std::vector<double> marks;
    for (const Task& t : s.tasks()) marks.push_back(t.deadline);
    if (s.busy()) {
        marks.push_back(s.busy()->start);
        marks.push_back(s.busy()->end);
    }
    for (double m : marks) {
        const double k = std::round(m / g.dt);
        if (std::abs(k * g.dt - m) > snap) {
            throw std::invalid_argument("instants must lie on brute-force slot boundaries");
        }
    }
    g.need.assign(slots + 1, std::numeric_limits<double>::quiet_NaN());
    g.limit.assign(slots + 1, kInf);
    for (int k = 0; k < slots; ++k) {
        const double mid = (k + 0.5) * g.dt;
        g.busy.push_back(s.busy() && mid > s.busy()->start && mid < s.busy()->end);
    }
    for (int k = 1; k <= slots; ++k) {
        const double t = k * g.dt;
        bool instant = false;
        for (double m : marks) instant = instant || std::abs(m - t) <= snap;
        bool deadline = false;
        for (const Task& task : s.tasks()) deadline = deadline || std::abs(task.deadline - t) <= snap;
        if (deadline) g.need[k] = s.demand_through(t + snap);
        if (instant && s.buffer()) g.limit[k] = s.demand_before(t - snap) + *s.buffer();
    }
    const PhysicalParams& p = s.params();
    for (int j = 0; j <= levels; ++j) {
        const double r = j * rate_unit;
        g.e_sense.push_back(p.sensing_coeff() * r * r * g.dt);
        g.e_tx.push_back(p.tx_coeff() * std::expm1(r / p.bandwidth) * g.dt);
    }
    return g;
}

bool boundary_ok(const TinyGrid& g, const Scenario& s, int k, long S, long R) {
    if (R > S) return false;
    const double tol = 1e-9 * s.total_data();
    if (!std::isnan(g.need[k])) {
        if (static_cast<double>(S) * g.unit < g.need[k] - tol) return false;
        if (static_cast<double>(R) * g.unit < g.need[k] - tol) return false;
    }
    return static_cast<double>(R) * g.unit <= g.limit[k] + tol;
}

} // namespace

double brute_force_tiny(const Scenario& s, int slots, int levels) {
    const TinyGrid g = tiny_grid(s, slots, levels);
    const PhysicalParams& p = s.params();
    const double D = s.total_data();
    double best = kInf;

    // Try levels near the average rate first so good incumbents come early.
    std::vector<int> order(levels + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(2 * a - levels) < std::abs(2 * b - levels);
    });

    std::vector<double> idle_after(slots + 1, 0.0);
    for (int k = slots - 1; k >= 0; --k) idle_after[k] = idle_after[k + 1] + (g.busy[k] ? 0.0 : g.dt);

    auto bound = [&](int k, long S, long R) {
        // Jensen: constant rates over what is left are a lower bound.
        const double rest = (slots - k) * g.dt;
        const double r_need = std::max(0.0, D - static_cast<double>(R) * g.unit);
        const double s_need = std::max(0.0, D - static_cast<double>(S) * g.unit);
        double lb = rest > 0.0 ? p.tx_coeff() * rest * std::expm1(r_need / (rest * p.bandwidth)) : 0.0;
        if (s_need > 1e-9 * D) {
            if (idle_after[k] <= 0.0) return kInf;
            lb += p.sensing_coeff() * s_need * s_need / idle_after[k];
        }
        return lb;
    };

    auto dfs = [&](auto&& self, int k, long S, long R, double E) -> void {
        if (k == slots) {
            best = std::min(best, E);
            return;
        }
        if (E + bound(k, S, R) >= best) return;
        for (int js : order) {
            if (g.busy[k] && js != 0) continue;
            for (int jr : order) {
                const long S2 = S + js;
                const long R2 = R + jr;
                if (!boundary_ok(g, s, k + 1, S2, R2)) continue;
                const double E2 = E + g.e_sense[js] + g.e_tx[jr];
                if (E2 >= best) continue;
                self(self, k + 1, S2, R2, E2);
            }
        }
    };
    dfs(dfs, 0, 0, 0, 0.0);
    if (!std::isfinite(best)) {
        throw Error(ErrorCode::NoFeasiblePoint, "rate grid misses every feasible point");
    }
    return best;
}

double brute_force_rounding_bound(const Scenario& s, int slots, int levels, const RateSchedule& sensing,
                                  const RateSchedule& transmission) {
    const TinyGrid g = tiny_grid(s, slots, levels);
    long S_prev = 0;
    long R_prev = 0;
    double E = 0.0;
    for (int k = 1; k <= slots; ++k) {
        const double t = k * g.dt;
        const long S = static_cast<long>(std::ceil(sensing.cumulative(t) / g.unit - 1e-9));
        const long R = static_cast<long>(std::ceil(transmission.cumulative(t) / g.unit - 1e-9));
        const long js = S - S_prev;
        const long jr = R - R_prev;
        if (js < 0 || jr < 0 || js > levels || jr > levels) return kInf;
        if (g.busy[k - 1] && js != 0) return kInf;
        if (!boundary_ok(g, s, k, S, R)) return kInf;
        E += g.e_sense[js] + g.e_tx[jr];
        S_prev = S;
        R_prev = R;
    }
    return E;
}

std::vector<SweepPoint> height_sweep(const Scenario& s, int points) {
    if (points < 1) throw std::invalid_argument("sweep needs at least one point");
    const bool buffered = s.buffer().has_value();
    const SearchBounds b = search_bounds(s, buffered);
    const double lo = std::min(b.lower, b.upper);
    const double hi = std::max(b.lower, b.upper);
    std::vector<SweepPoint> out;
    out.reserve(points);
    for (int i = 0; i < points; ++i) {
        const double h = points == 1 ? lo : (i + 1 == points ? hi : lo + (hi - lo) * i / (points - 1));
        SweepPoint pt;
        pt.height = h;
        try {
            const EnergySplit e = energy_at_height(s, h, buffered);
            pt.sensing = e.sensing;
            pt.transmission = e.transmission;
        } catch (const Error& err) {
            if (err.code() != ErrorCode::InfeasibleHeight) throw;
            pt.feasible = false;
        }
        out.push_back(pt);
    }
    return out;
}

} // namespace cosched
