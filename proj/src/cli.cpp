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

#include "cosched/bench.hpp"
#include "cosched/errors.hpp"
#include "cosched/height.hpp"
#include "cosched/oracle.hpp"
#include "cosched/scenario_io.hpp"
#include "cosched/solve.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>

namespace cosched {

namespace {

struct Options {
    std::string scenario;
    std::string solution;
    std::string config;
    std::string out;
    std::string scheme = "JSTRC";
    bool buffered = false;
    bool json = false;
    bool csv = false;
    std::optional<std::uint64_t> seed;
    int points = 1000;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot write " + path);
    f << text;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
    const ScenarioFile file = load_scenario(o.scenario);
    const Scenario& s = file.scenario;
    if (o.buffered && !s.buffer()) {
        err << "--buffered given but the scenario has no buffer_bits\n";
        return kExitInapplicable;
    }
    const auto scheme = parse_scheme(o.scheme);
    if (!scheme) throw ParseError("unknown scheme '" + o.scheme + "'");
    const Solution sol =
        *scheme == Scheme::JSTRC ? solve(s) : baseline(s, *scheme, o.seed.value_or(file.seed));
    emit(o.csv ? schedule_csv(sol) : solution_to_json(sol), o.out, out);
    return kExitOk;
}

class Ledger {
  public:
    explicit Ledger(std::ostream& out) : out_(out) {}

    void check(const std::string& name, bool ok, const std::string& detail = {}) {
        out_ << (ok ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) out_ << ": " << detail;
        out_ << "\n";
        failed_ = failed_ || !ok;
    }
    void skip(const std::string& name, const std::string& why) { out_ << "SKIP " << name << ": " << why << "\n"; }
    bool failed() const { return failed_; }

  private:
    std::ostream& out_;
    bool failed_ = false;
};

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

int cmd_verify(const Options& o, std::ostream& out, std::ostream&) {
    const ScenarioFile file = load_scenario(o.scenario);
    const Solution sol = solution_from_json(read_text(o.solution));
    Ledger ledger(out);
    if (sol.buffered && !file.scenario.buffer()) {
        ledger.check("buffer", false, "solution is buffered but the scenario has no buffer");
        return kExitVerifyFailed;
    }
    const Scenario s = sol.buffered ? file.scenario : file.scenario.with_buffer(std::nullopt);
    const double D = s.total_data();

    const FeasibilityReport rep = check_feasibility(s, sol.sensing, sol.transmission);
    std::string detail;
    if (!rep.feasible()) {
        detail = rep.describe();
        std::replace(detail.begin(), detail.end(), '\n', ';');
    }
    if (!rep.busy_sensing.ok) {
        detail = "sensing during busy interval [" + format_number(s.busy()->start) + "," +
                 format_number(s.busy()->end) + "] at t=" + format_number(rep.busy_sensing.where) +
                 " rate " + format_number(rep.busy_sensing.amount) + "; " + detail;
    }
    ledger.check("feasibility", rep.feasible(), detail);

    const double es = sensing_energy(sol.sensing, s.params());
    const double et = transmission_energy(sol.transmission, s.params());
    ledger.check("energy", close(es, sol.sensing_energy, 1e-9) && close(et, sol.transmission_energy, 1e-9) &&
                               close(es + et, sol.total_energy, 1e-9),
                 "recomputed " + format_number(es + et) + " J, stored " + format_number(sol.total_energy) + " J");

    if (!s.busy()) {
        ledger.skip("height", "no busy interval");
        return ledger.failed() ? kExitVerifyFailed : kExitOk;
    }
    if (!sol.height) {
        ledger.check("height", false, "missing height for a busy scenario");
        return kExitVerifyFailed;
    }
    const double h = *sol.height;
    const double tol = 1e-9 * D;
    const SearchBounds b = search_bounds(s, sol.buffered);
    const double top = std::max(b.lower, b.upper);
    ledger.check("height within bounds", h >= b.lower - tol && h <= top + tol,
                 "h=" + format_number(h) + " in [" + format_number(b.lower) + "," + format_number(top) + "]");
    if (sol.bounds) {
        ledger.check("stored bounds",
                     std::abs(sol.bounds->lower - b.lower) <= tol && std::abs(sol.bounds->upper - b.upper) <= tol);
    }

    double at_h = std::numeric_limits<double>::quiet_NaN();
    try {
        at_h = energy_at_height(s, h, sol.buffered).total();
    } catch (const Error& e) {
        ledger.check("height schedule", false, e.what());
        return kExitVerifyFailed;
    }
    ledger.check("height schedule", close(at_h, sol.total_energy, 1e-9),
                 "fixed-height energy " + format_number(at_h) + " J");

    if (sol.scheme != Scheme::JSTRC) {
        ledger.skip("sweep", "baseline solutions make no optimality claim");
        return ledger.failed() ? kExitVerifyFailed : kExitOk;
    }
    const std::vector<SweepPoint> grid = height_sweep(s, 1000);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double arg = 0.0;
    for (const SweepPoint& p : grid) {
        if (!p.feasible) continue;
        if (p.total() < lo) {
            lo = p.total();
            arg = p.height;
        }
        hi = std::max(hi, p.total());
    }
    // Relative to the solution's energy and to the spread of E over the range.
    const double gain = at_h - lo;
    const bool ok = gain <= 1e-6 * std::abs(at_h) && gain <= 1e-6 * (hi - lo) + 1e-13 * std::abs(at_h);
    ledger.check("sweep", ok,
                 "best grid h=" + format_number(arg) + " E=" + format_number(lo) + " J vs " + format_number(at_h) +
                     " J");
    return ledger.failed() ? kExitVerifyFailed : kExitOk;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
    BenchConfig cfg = load_bench_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (!o.out.empty()) cfg.output = o.out;
    if (cfg.schemes.size() > 1 && !cfg.base.scenario.busy()) {
        err << "baselines need a busy interval\n";
        return kExitInapplicable;
    }
    const std::vector<BenchRow> rows = run_bench(cfg);
    for (const BenchRow& r : rows) {
        if (r.failed > 0) {
            err << "axis " << r.axis << " " << to_string(r.scheme) << ": " << r.failed
                << " infeasible realizations\n";
        }
    }
    emit(bench_csv(rows), cfg.output ? cfg.output->string() : std::string(), out);
    return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    const ScenarioFile file = load_scenario(o.scenario);
    const Scenario& s = file.scenario;
    if (!s.busy()) {
        err << "no height dimension: the scenario has no busy interval\n";
        return kExitInapplicable;
    }
    if (o.points < 2) throw ParseError("--points must be at least 2");
    const bool buffered = s.buffer().has_value();
    const SearchBounds b = search_bounds(s, buffered);
    const std::vector<CriticalHeight> crit =
        buffered ? (b.lower >= b.upper ? std::vector<CriticalHeight>{} : critical_heights_buffered(s, b))
                 : critical_heights(s, b);
    std::string text = "# h_l=" + format_number(b.lower) + "\n# h_u=" + format_number(b.upper) + "\n# criticals=";
    for (std::size_t i = 0; i < crit.size(); ++i) text += (i ? ";" : "") + format_number(crit[i].height);
    text += "\nh,E_total,E_sense,E_tx\n";
    for (const SweepPoint& p : height_sweep(s, o.points)) {
        if (!p.feasible) {
            text += "# infeasible h=" + format_number(p.height) + "\n";
            continue;
        }
        // E(h) moves in the eighth digit or later; nine digits would flatten the minimum.
        text += format_number(p.height) + "," + format_number(p.total(), 17) + "," + format_number(p.sensing, 17) +
                "," + format_number(p.transmission, 17) + "\n";
    }
    emit(text, o.out, out);
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Joint sensing and transmission rate scheduler"};
    app.require_subcommand(1);
    Options o;

    CLI::App* solve_cmd = app.add_subcommand("solve", "Solve a scenario file");
    solve_cmd->add_option("scenario", o.scenario, "Scenario JSON")->required();
    solve_cmd->add_flag("--buffered", o.buffered, "Require the finite-buffer solver");
    auto* json_flag = solve_cmd->add_flag("--json", o.json, "Write the solution JSON (default)");
    auto* csv_flag = solve_cmd->add_flag("--csv", o.csv, "Write the schedule CSV");
    json_flag->excludes(csv_flag);
    solve_cmd->add_option("--out", o.out, "Output path");
    solve_cmd->add_option("--scheme", o.scheme, "JSTRC, UB, LB or RH");
    solve_cmd->add_option("--seed", o.seed, "Seed for RH");

    CLI::App* verify_cmd = app.add_subcommand("verify", "Check a solution against its scenario");
    verify_cmd->add_option("scenario", o.scenario, "Scenario JSON")->required();
    verify_cmd->add_option("solution", o.solution, "Solution JSON")->required();

    CLI::App* bench_cmd = app.add_subcommand("bench", "Run a fading-channel benchmark");
    bench_cmd->add_option("config", o.config, "Bench config JSON")->required();
    bench_cmd->add_option("--out", o.out, "Output path");
    bench_cmd->add_option("--seed", o.seed, "Override the config seed");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Tabulate E(h) over the search range");
    sweep_cmd->add_option("scenario", o.scenario, "Scenario JSON")->required();
    sweep_cmd->add_option("--points", o.points, "Grid points");
    sweep_cmd->add_option("--out", o.out, "Output path");

    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitParse;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(o, out, err);
        if (verify_cmd->parsed()) return cmd_verify(o, out, err);
        if (bench_cmd->parsed()) return cmd_bench(o, out, err);
        return cmd_sweep(o, out, err);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const Error& e) {
        switch (e.code()) {
        case ErrorCode::InvalidScenario:
            err << "schema error: " << e.what() << "\n";
            return kExitParse;
        case ErrorCode::InfeasibleBuffer:
        case ErrorCode::InfeasibleTunnel:
        case ErrorCode::InfeasibleHeight:
            err << "infeasible scenario: " << e.what() << "\n";
            return kExitInfeasible;
        case ErrorCode::NoBusyInterval:
            err << e.what() << "\n";
            return kExitInapplicable;
        default:
            err << e.what() << "\n";
            return kExitVerifyFailed;
        }
    } catch (const std::logic_error& e) {
        err << "infeasible result: " << e.what() << "\n";
        return kExitInfeasible;
    }
}

} // namespace cosched
