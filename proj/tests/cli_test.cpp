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

#include "cosched/cli.hpp"
#include "cosched/scenario_io.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cosched {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kScenarios{COSCHED_SCENARIO_DIR};
const fs::path kBench{COSCHED_BENCH_DIR};

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "cosched");
    std::ostringstream out;
    std::ostringstream err;
    CliRun r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("cosched_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-'))
            continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

TEST_F(CliTest, SolveWritesSolutionJson) {
    const CliRun r = run({"solve", (kScenarios / "five_task.json").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const Solution sol = solution_from_json(r.out);
    ASSERT_TRUE(sol.height.has_value());
    EXPECT_NEAR(*sol.height, 2093.645, 1e-3);
    EXPECT_EQ(sol.scheme, Scheme::JSTRC);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_TRUE(j.contains("bounds"));
    EXPECT_TRUE(j.contains("critical_heights"));
}

TEST_F(CliTest, SolveCsvPinsHeightAcrossBusy) {
    const CliRun r = run({"solve", (kScenarios / "five_task.json").string(), "--csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t_start_s,t_end_s,sense_rate_bps,tx_rate_bps");
    const auto rows = csv_rows(r.out);
    ASSERT_FALSE(rows.empty());
    double sensed = 0.0;
    double sent = 0.0;
    for (const auto& row : rows) {
        ASSERT_EQ(row.size(), 4u);
        const double dt = row[1] - row[0];
        if (row[0] >= 55.0 && row[1] <= 85.0) EXPECT_EQ(row[2], 0.0);
        sensed += row[2] * dt;
        sent += row[3] * dt;
        if (std::abs(row[1] - 55.0) < 1e-9) EXPECT_NEAR(sensed, 2093.645, 1e-2);
        // Both curves reach the height by the end of the blackout.
        if (std::abs(row[1] - 85.0) < 1e-9) {
            EXPECT_NEAR(sensed, 2093.645, 1e-2);
            EXPECT_NEAR(sent, 2093.645, 1e-2);
        }
    }
    EXPECT_NEAR(sensed, 2500.0, 1e-3);
    EXPECT_NEAR(sent, 2500.0, 1e-3);
}

TEST_F(CliTest, SolveWritesOutFile) {
    const std::string out = path("sol.json");
    const CliRun r = run({"solve", (kScenarios / "five_task.json").string(), "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_NO_THROW(solution_from_json(read_text(out)));
}

TEST_F(CliTest, EmptyTasksIsParseError) {
    const std::string f = write("empty.json", R"({"schema": 1, "tasks": [], "busy": null, "buffer_bits": null,
        "params": {"alpha": 1e-28, "cycles_per_bit": 500, "noise_dbm": -79.5, "mean_gain": 1e-3,
        "bandwidth_hz": 1e7}, "seed": 1})");
    const CliRun r = run({"solve", f});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("task"), std::string::npos) << r.err;
    EXPECT_EQ(run({"solve", path("missing.json")}).code, 2);
    EXPECT_EQ(run({"solve", write("bad.json", "{not json")}).code, 2);
}

TEST_F(CliTest, InfeasibleBufferExitsThree) {
    json j = json::parse(read_text(kScenarios / "five_task.json"));
    j["buffer_bits"] = 600;
    const CliRun r = run({"solve", write("tight.json", j.dump())});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("buffer"), std::string::npos) << r.err;
}

TEST_F(CliTest, BufferedFlagNeedsBuffer) {
    EXPECT_EQ(run({"solve", (kScenarios / "five_task.json").string(), "--buffered"}).code, 4);
    const CliRun r = run({"solve", (kScenarios / "five_task_buffer1000.json").string(), "--buffered"});
    ASSERT_EQ(r.code, 0) << r.err;
    const Solution sol = solution_from_json(r.out);
    EXPECT_TRUE(sol.buffered);
    EXPECT_NEAR(*sol.height, 2089.85, 1e-2);
}

TEST_F(CliTest, NoBusyColumnsMatch) {
    const CliRun r = run({"solve", (kScenarios / "five_task_no_busy.json").string(), "--csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& row : rows) EXPECT_EQ(row[2], row[3]);
    EXPECT_NEAR(rows[0][2], 50.0, 1e-6);
}

TEST_F(CliTest, VerifyRoundTrip) {
    for (const char* name : {"five_task.json", "five_task_buffer1000.json", "five_task_no_busy.json"}) {
        const std::string scenario = (kScenarios / name).string();
        const std::string sol = path("sol.json");
        ASSERT_EQ(run({"solve", scenario, "--out", sol}).code, 0);
        const CliRun v = run({"verify", scenario, sol});
        EXPECT_EQ(v.code, 0) << name << "\n" << v.out;
        EXPECT_EQ(v.out.find("FAIL"), std::string::npos) << v.out;
        EXPECT_NE(v.out.find("PASS feasibility"), std::string::npos);
    }
}

TEST_F(CliTest, VerifyCatchesTamperedHeight) {
    const std::string scenario = (kScenarios / "five_task.json").string();
    const std::string sol = path("sol.json");
    ASSERT_EQ(run({"solve", scenario, "--out", sol}).code, 0);
    json j = json::parse(read_text(sol));
    j["height_bits"] = j["height_bits"].get<double>() * 1.1;
    const CliRun v = run({"verify", scenario, write("tampered.json", j.dump())});
    EXPECT_EQ(v.code, 1);
    EXPECT_NE(v.out.find("FAIL sweep"), std::string::npos) << v.out;
}

TEST_F(CliTest, VerifyCatchesSensingDuringBusy) {
    const std::string scenario = (kScenarios / "five_task.json").string();
    const std::string sol = path("sol.json");
    ASSERT_EQ(run({"solve", scenario, "--out", sol}).code, 0);
    json j = json::parse(read_text(sol));
    bool edited = false;
    for (auto& seg : j["sensing"]) {
        if (seg["t_start_s"].get<double>() >= 55.0 && seg["t_end_s"].get<double>() <= 85.0) {
            seg["rate_bps"] = 0.1;
            edited = true;
        }
    }
    ASSERT_TRUE(edited);
    const CliRun v = run({"verify", scenario, write("busy.json", j.dump())});
    EXPECT_EQ(v.code, 1);
    EXPECT_NE(v.out.find("FAIL feasibility"), std::string::npos) << v.out;
    EXPECT_NE(v.out.find("[55,85]"), std::string::npos) << v.out;
}

TEST_F(CliTest, SweepFormat) {
    const CliRun r = run({"sweep", (kScenarios / "five_task.json").string(), "--points", "1000"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("# h_l=2050", 0), 0u) << r.out.substr(0, 80);
    EXPECT_NE(r.out.find("# h_u=2114.28571"), std::string::npos);
    EXPECT_NE(r.out.find("# criticals="), std::string::npos);
    EXPECT_NE(r.out.find("\nh,E_total,E_sense,E_tx\n"), std::string::npos);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 1000u);
    std::size_t best = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_NEAR(rows[i][1], rows[i][2] + rows[i][3], 1e-8 * rows[i][1]);
        if (rows[i][1] < rows[best][1]) best = i;
    }
    const double step = rows[1][0] - rows[0][0];
    EXPECT_LE(std::abs(rows[best][0] - 2093.645), step + 1e-3);
}

TEST_F(CliTest, SweepWithoutBusyIsInapplicable) {
    const CliRun r = run({"sweep", (kScenarios / "five_task_no_busy.json").string()});
    EXPECT_EQ(r.code, 4);
    EXPECT_NE(r.err.find("no height dimension"), std::string::npos);
}

TEST_F(CliTest, BenchIsDeterministic) {
    const std::string cfg = (kBench / "total_data.json").string();
    const CliRun a = run({"bench", cfg});
    const CliRun b = run({"bench", cfg});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "axis,scheme,mean_energy_j,std_energy_j,n");
    EXPECT_NE(run({"bench", cfg, "--seed", "7"}).out, a.out);
    const std::string out = path("bench.csv");
    ASSERT_EQ(run({"bench", cfg, "--out", out}).code, 0);
    EXPECT_EQ(read_text(out), a.out);
}

TEST_F(CliTest, BenchConfigErrors) {
    EXPECT_EQ(run({"bench", write("bad.json", R"({"axis": "nope"})")}).code, 2);
}

TEST_F(CliTest, BaselineScheme) {
    const CliRun r = run({"solve", (kScenarios / "five_task.json").string(), "--scheme", "UB"});
    ASSERT_EQ(r.code, 0) << r.err;
    const Solution sol = solution_from_json(r.out);
    EXPECT_EQ(sol.scheme, Scheme::UB);
    EXPECT_NEAR(*sol.height, 2114.2857, 1e-3);
    EXPECT_EQ(run({"solve", (kScenarios / "five_task.json").string(), "--scheme", "XX"}).code, 2);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
}

} // namespace
} // namespace cosched
