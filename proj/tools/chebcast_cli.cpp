// chebcast command-line harness: schedule, simulate, bounds, sweep.
// Exit codes: 0 success, 1 assertion failure, 2 usage or config error.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chebcast/error.hpp"
#include "chebcast/experiment.hpp"
#include "chebcast/format.hpp"
#include "chebcast/schedule.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kAssertion = 1;
constexpr int kUsage = 2;

std::filesystem::path output_dir(const std::string& flag, const std::string& configured) {
    if (!flag.empty()) return flag;
    return chebcast::resolve_output_dir(configured);
}

int cmd_schedule(int n, int interval, int warmup, double alpha) {
    const auto s = chebcast::adaptive_schedule({n, interval, warmup, alpha});
    std::cout << chebcast::format_indices(s) << '\n'
              << "NFE=" << chebcast::nfe(s)
              << ", speedup=" << chebcast::format_double(chebcast::speedup_ratio(s)) << '\n';
    return kOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_flag) {
    const auto cfg = chebcast::load_config(config_path);
    const auto dir = output_dir(out_flag, cfg.output_dir);
    const auto result = chebcast::run_experiment(cfg);
    const auto paths = chebcast::write_simulation(result, dir);
    chebcast::append_run_log(dir, "simulate " + config_path + " wall_seconds=" +
                                      chebcast::format_double(result.wall_seconds));
    std::cout << "forecaster=" << cfg.forecaster.kind << " NFE=" << result.nfe
              << " mean_final_rmse=" << chebcast::format_double(result.mean_final_rmse) << '\n';
    for (const auto& p : paths) std::cout << "wrote " << p.string() << '\n';
    return kOk;
}

int cmd_bounds(const std::string& suite, const std::string& out_flag) {
    const auto report = chebcast::run_bounds_suite(suite);
    const auto dir = output_dir(out_flag, "out");
    const auto path = dir / ("bounds_" + suite + ".json");
    chebcast::write_text(path, report.json.dump(2) + "\n");
    chebcast::append_run_log(dir, "bounds " + suite);
    for (const auto& [name, checks] : report.json["suites"].items()) {
        int passed = 0;
        for (const auto& c : checks) passed += c["passed"].get<bool>() ? 1 : 0;
        std::cout << name << ": " << passed << "/" << checks.size() << " checks passed\n";
    }
    std::cout << (report.passed ? "PASS" : "FAIL") << " wrote " << path.string() << '\n';
    return report.passed ? kOk : kAssertion;
}

int cmd_sweep(const std::string& axis_name, const std::string& config_path,
              const std::vector<double>& values, const std::vector<int>& intervals, bool timing,
              const std::string& out_flag) {
    const auto axis = chebcast::parse_axis(axis_name);
    const auto cfg = chebcast::load_config(config_path);
    std::vector<chebcast::SweepPoint> points;
    if (values.empty()) {
        points = chebcast::default_sweep(axis);
    } else {
        if (!intervals.empty() && intervals.size() != values.size())
            throw chebcast::InvalidArgument("--intervals must pair one-to-one with --values");
        for (std::size_t i = 0; i < values.size(); ++i)
            points.push_back({values[i], intervals.empty() ? 0 : intervals[i]});
    }
    const auto rows = chebcast::sweep_report(axis, points, cfg);
    const auto dir = output_dir(out_flag, cfg.output_dir);
    const auto path = dir / ("sweep_" + axis_name + ".csv");
    chebcast::write_text(path, chebcast::sweep_csv(rows, timing));
    std::string log = "sweep " + axis_name + " " + config_path;
    for (const auto& r : rows)
        log += " " + chebcast::format_double(r.axis_value) + ":" + chebcast::format_double(r.wall_seconds);
    chebcast::append_run_log(dir, log);
    std::cout << chebcast::sweep_csv(rows, timing) << "wrote " << path.string() << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral feature forecasting sandbox"};
    app.require_subcommand(1);

    int n = 50, interval = 1, warmup = 1;
    double alpha = 0.0;
    auto* schedule = app.add_subcommand("schedule", "Print the full-pass indices, NFE and speedup");
    schedule->add_option("--n", n, "Total steps")->capture_default_str();
    schedule->add_option("--interval", interval, "First forecast interval")->capture_default_str();
    schedule->add_option("--warmup", warmup, "Warm-up full passes")->capture_default_str();
    schedule->add_option("--alpha", alpha, "Quadratic interval growth")->capture_default_str();

    std::string config_path, out_flag;
    auto* simulate = app.add_subcommand("simulate", "Run a sandbox experiment from a JSON config");
    simulate->add_option("config", config_path, "Config file")->required();
    simulate->add_option("--out", out_flag, "Output directory (overrides config and env)");

    std::string suite;
    auto* bounds = app.add_subcommand("bounds", "Verify the error bounds numerically");
    bounds->add_option("suite", suite, "taylor | chebyshev | spectrum | all")->required();
    bounds->add_option("--out", out_flag, "Output directory");

    std::string axis;
    std::vector<double> values;
    std::vector<int> intervals;
    bool timing = false;
    auto* sweep = app.add_subcommand("sweep", "Sweep one forecaster setting");
    sweep->add_option("--axis", axis, "lambda | degree | alpha")->required();
    sweep->add_option("--config", config_path, "Base config file")->required();
    sweep->add_option("--values", values, "Axis values (default per axis)")->delimiter(',');
    sweep->add_option("--intervals", intervals, "Paired intervals for the alpha axis")->delimiter(',');
    sweep->add_flag("--timing", timing, "Record wall seconds instead of nan");
    sweep->add_option("--out", out_flag, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*schedule) return cmd_schedule(n, interval, warmup, alpha);
        if (*simulate) return cmd_simulate(config_path, out_flag);
        if (*bounds) return cmd_bounds(suite, out_flag);
        if (*sweep) return cmd_sweep(axis, config_path, values, intervals, timing, out_flag);
    } catch (const chebcast::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const chebcast::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kAssertion;
    }
    return kUsage;
}
