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

#include "cosched/scenario_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cosched {

using nlohmann::json;

namespace {

double number(const json& obj, const char* key) {
    if (!obj.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError(std::string("field '") + key + "' must be finite");
    return d;
}

const json& object(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_object()) {
        throw ParseError(std::string("field '") + key + "' must be an object");
    }
    return obj.at(key);
}

json schedule_json(const RateSchedule& s) {
    json arr = json::array();
    for (const Segment& seg : s.segments()) {
        arr.push_back({{"t_start_s", seg.start}, {"t_end_s", seg.end}, {"rate_bps", seg.rate}});
    }
    return arr;
}

RateSchedule schedule_from(const json& arr) {
    if (!arr.is_array()) throw ParseError("schedule must be an array");
    std::vector<Segment> segs;
    for (const json& seg : arr) {
        segs.push_back({number(seg, "t_start_s"), number(seg, "t_end_s"), number(seg, "rate_bps")});
    }
    try {
        return RateSchedule(std::move(segs));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("bad schedule: ") + e.what());
    }
}

} // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

ScenarioFile parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("scenario must be a JSON object");
    if (doc.contains("schema") && doc["schema"] != 1) throw ParseError("unsupported schema version");
    if (!doc.contains("tasks") || !doc["tasks"].is_array() || doc["tasks"].empty()) {
        throw ParseError("field 'tasks' must be a non-empty array");
    }
    std::vector<Task> tasks;
    for (const json& t : doc["tasks"]) {
        if (!t.is_object()) throw ParseError("each task must be an object");
        tasks.push_back({number(t, "deadline_s"), number(t, "data_bits")});
    }
    std::optional<BusyInterval> busy;
    if (doc.contains("busy") && !doc["busy"].is_null()) {
        const json& b = object(doc, "busy");
        busy = BusyInterval{number(b, "start_s"), number(b, "end_s")};
    }
    std::optional<double> buffer;
    if (doc.contains("buffer_bits") && !doc["buffer_bits"].is_null()) {
        buffer = number(doc, "buffer_bits");
    }
    const json& p = object(doc, "params");
    ScenarioFile out{Scenario(std::move(tasks), busy,
                              PhysicalParams{number(p, "alpha"), number(p, "cycles_per_bit"),
                                             dbm_to_watts(number(p, "noise_dbm")),
                                             number(p, "mean_gain"), number(p, "bandwidth_hz")},
                              buffer)};
    out.noise_dbm = number(p, "noise_dbm");
    out.mean_gain = number(p, "mean_gain");
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) throw ParseError("field 'seed' must be a non-negative integer");
        out.seed = doc["seed"].get<std::uint64_t>();
    }
    return out;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

ScenarioFile load_scenario(const std::filesystem::path& path) { return parse_scenario(read_text(path)); }

std::string solution_to_json(const Solution& sol) {
    json doc;
    doc["schema"] = 1;
    doc["scheme"] = to_string(sol.scheme);
    doc["buffered"] = sol.buffered;
    doc["height_bits"] = sol.height ? json(*sol.height) : json(nullptr);
    doc["energy_j"] = {{"sensing", sol.sensing_energy},
                       {"transmission", sol.transmission_energy},
                       {"total", sol.total_energy}};
    if (sol.bounds) {
        doc["bounds"] = {{"lower", sol.bounds->lower},
                         {"upper", sol.bounds->upper},
                         {"lower_clipped", sol.bounds->lower_clipped},
                         {"balanced", sol.bounds->balanced}};
    } else {
        doc["bounds"] = nullptr;
    }
    json crit = json::array();
    for (const CriticalHeight& c : sol.critical_heights) {
        crit.push_back({{"height_bits", c.height},
                        {"anchor", {{"time_s", c.anchor.time}, {"bits", c.anchor.bits}}},
                        {"side", to_string(c.side)},
                        {"merge", c.merge},
                        {"unchanged_s", {c.unchanged_from, c.unchanged_to}}});
    }
    doc["critical_heights"] = crit;
    json areas = json::array();
    for (const AreaOptimum& a : sol.areas) {
        areas.push_back({{"hi", a.hi}, {"lo", a.lo}, {"height_bits", a.height}, {"energy_j", a.energy}});
    }
    doc["areas"] = areas;
    doc["sensing"] = schedule_json(sol.sensing);
    doc["transmission"] = schedule_json(sol.transmission);
    return doc.dump(2) + "\n";
}

Solution solution_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("solution must be a JSON object");
    Solution sol;
    try {
        const auto scheme = parse_scheme(doc.at("scheme").get<std::string>());
        if (!scheme) throw ParseError("unknown scheme");
        sol.scheme = *scheme;
        sol.buffered = doc.at("buffered").get<bool>();
        if (!doc.at("height_bits").is_null()) sol.height = number(doc, "height_bits");
        const json& e = object(doc, "energy_j");
        sol.sensing_energy = number(e, "sensing");
        sol.transmission_energy = number(e, "transmission");
        sol.total_energy = number(e, "total");
        if (doc.contains("bounds") && !doc["bounds"].is_null()) {
            const json& b = doc["bounds"];
            sol.bounds = SearchBounds{number(b, "lower"), number(b, "upper"),
                                      b.at("lower_clipped").get<bool>(), number(b, "balanced")};
        }
        sol.sensing = schedule_from(doc.at("sensing"));
        sol.transmission = schedule_from(doc.at("transmission"));
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad solution: ") + e.what());
    }
    return sol;
}

std::string format_number(double v, int digits) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, digits);
    return std::string(buf.data(), res.ptr);
}

std::string schedule_csv(const Solution& sol) {
    std::vector<double> cuts = sol.sensing.breakpoints();
    const std::vector<double> more = sol.transmission.breakpoints();
    cuts.insert(cuts.end(), more.begin(), more.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::string out = "t_start_s,t_end_s,sense_rate_bps,tx_rate_bps\n";
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        const double mid = 0.5 * (a + b);
        out += format_number(a) + "," + format_number(b) + "," + format_number(sol.sensing.rate_at(mid)) +
               "," + format_number(sol.transmission.rate_at(mid)) + "\n";
    }
    return out;
}

} // namespace cosched
