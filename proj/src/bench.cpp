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

#include "cosched/bench.hpp"

#include "cosched/errors.hpp"
#include "cosched/height.hpp"

#include "json.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace cosched {

using nlohmann::json;

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Draw {
    double gain;
    double u; // random-height position
};

// Welford running mean and squared deviations.
struct Accumulator {
    double mean = 0.0;
    double m2 = 0.0;
    int n = 0;
    int failed = 0;

    void add(double v) {
        ++n;
        const double d = v - mean;
        mean += d / n;
        m2 += d * (v - mean);
    }
};

} // namespace

const char* to_string(BenchAxis axis) noexcept {
    switch (axis) {
    case BenchAxis::TotalData: return "total_data";
    case BenchAxis::Horizon: return "horizon";
    case BenchAxis::Buffer: return "buffer";
    }
    return "unknown";
}

BenchConfig parse_bench_config(const std::string& text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("bench config must be a JSON object");
    BenchConfig cfg(load_scenario(base_dir / doc.value("scenario", std::string())));
    try {
        cfg.realizations = doc.value("realizations", 100);
        const std::string axis = doc.at("axis").get<std::string>();
        if (axis == "total_data") {
            cfg.axis = BenchAxis::TotalData;
        } else if (axis == "horizon") {
            cfg.axis = BenchAxis::Horizon;
        } else if (axis == "buffer") {
            cfg.axis = BenchAxis::Buffer;
        } else {
            throw ParseError("axis must be total_data, horizon or buffer");
        }
        cfg.values = doc.at("values").get<std::vector<double>>();
        for (const std::string& name : doc.value("baselines", std::vector<std::string>{})) {
            const auto s = parse_scheme(name);
            if (!s || *s == Scheme::JSTRC) throw ParseError("unknown baseline '" + name + "'");
            cfg.schemes.push_back(*s);
        }
        if (doc.contains("output") && !doc["output"].is_null()) {
            cfg.output = base_dir / doc["output"].get<std::string>();
        }
        cfg.seed = doc.contains("seed") ? doc["seed"].get<std::uint64_t>() : cfg.base.seed;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad bench config: ") + e.what());
    }
    if (cfg.realizations < 1) throw ParseError("realizations must be at least 1");
    if (cfg.values.empty()) throw ParseError("axis values must not be empty");
    for (std::size_t i = 0; i < cfg.values.size(); ++i) {
        if (!(cfg.values[i] > 0.0) || !std::isfinite(cfg.values[i]) ||
            (i > 0 && !(cfg.values[i] > cfg.values[i - 1]))) {
            throw ParseError("axis values must be positive and increasing");
        }
    }
    return cfg;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
    return parse_bench_config(read_text(path), path.parent_path());
}

Scenario bench_scenario(const BenchConfig& cfg, double value) {
    const Scenario& base = cfg.base.scenario;
    switch (cfg.axis) {
    case BenchAxis::TotalData: return base.with_data_scale(value / base.total_data());
    case BenchAxis::Horizon: return base.with_time_scale(value);
    case BenchAxis::Buffer:
        return base.with_buffer(std::isinf(value) ? std::nullopt : std::optional<double>(value));
    }
    return base;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::vector<Draw> draws;
    for (int i = 0; i < cfg.realizations; ++i) {
        const double g = -cfg.base.mean_gain * std::log1p(-unit_uniform(rng));
        draws.push_back({g, unit_uniform(rng)});
    }

    std::vector<double> values = cfg.values;
    if (cfg.axis == BenchAxis::Buffer) values.push_back(std::numeric_limits<double>::infinity());

    std::vector<BenchRow> rows;
    for (double value : values) {
        const Scenario shaped = bench_scenario(cfg, value);
        std::vector<Accumulator> acc(cfg.schemes.size());
        for (const Draw& d : draws) {
            PhysicalParams p = shaped.params();
            p.channel_gain = d.gain;
            const Scenario s = shaped.with_params(p);
            std::optional<Solution> best;
            for (std::size_t k = 0; k < cfg.schemes.size(); ++k) {
                try {
                    if (cfg.schemes[k] == Scheme::JSTRC) {
                        best = solve(s);
                        acc[k].add(best->total_energy);
                        continue;
                    }
                    if (!s.busy()) throw Error(ErrorCode::NoBusyInterval, "baselines need a busy interval");
                    const SearchBounds bounds = best && best->bounds ? *best->bounds : search_bounds(s);
                    double h = 0.0;
                    switch (cfg.schemes[k]) {
                    case Scheme::UB:
                        h = std::max(bounds.upper, s.demand_through(s.busy()->end));
                        break;
                    case Scheme::LB: h = bounds.lower; break;
                    default: h = random_height(bounds, s, d.u); break;
                    }
                    acc[k].add(solution_at_height(s, bounds, h, cfg.schemes[k]).total_energy);
                } catch (const Error&) {
                    ++acc[k].failed;
                } catch (const std::logic_error&) {
                    ++acc[k].failed;
                }
            }
        }
        for (std::size_t k = 0; k < cfg.schemes.size(); ++k) {
            BenchRow row;
            row.axis = std::isinf(value) ? "inf" : format_number(value);
            row.axis_value = value;
            row.scheme = cfg.schemes[k];
            row.n = acc[k].n;
            row.failed = acc[k].failed;
            row.mean = acc[k].mean;
            row.stddev = row.n > 1 ? std::sqrt(acc[k].m2 / (row.n - 1)) : 0.0;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "axis,scheme,mean_energy_j,std_energy_j,n\n";
    for (const BenchRow& r : rows) {
        out += r.axis + "," + to_string(r.scheme) + "," + format_number(r.mean) + "," +
               format_number(r.stddev) + "," + std::to_string(r.n) + "\n";
    }
    return out;
}

} // namespace cosched
