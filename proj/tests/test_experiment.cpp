#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "chebcast/error.hpp"
#include "chebcast/experiment.hpp"
#include "chebcast/format.hpp"

using namespace chebcast;
using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config_error(const json& doc) {
    try {
        (void)parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("format_double is shortest round trip") {
    CHECK(format_double(1.0) == "1.0");
    CHECK(format_double(5.0) == "5.0");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(3.5714285714285716) == "3.5714285714285716");
    CHECK(format_double(-2.5e-300) == "-2.5e-300");
    CHECK(format_double(1e300) == "1e+300");
    CHECK(format_double(NAN) == "nan");
    CHECK(format_double(-INFINITY) == "-inf");
    for (double v : {0.1 + 0.2, 1.0 / 3.0, 123456.789, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
    const std::vector<double> vals{1.0, 0.25};
    CHECK(join_doubles(vals) == "1.0,0.25");
}

TEST_CASE("defaults parse from an empty object") {
    const auto cfg = parse_config(json::object());
    CHECK(cfg == ExperimentConfig{});
    CHECK(cfg.forecaster.lambda == 0.1);
    CHECK(cfg.forecaster.degree == 4);
}

TEST_CASE("config round trip") {
    ExperimentConfig cfg;
    cfg.denoiser.kind = "function_family";
    cfg.denoiser.channels = {{"sine", {1.0, 0.5, 0.1, 2.0}}, {"polynomial", {1.0, -0.25}}};
    cfg.denoiser.mixture = {{1.0, {0.5}, {0.2}}};
    cfg.schedule = {2, 5, 0.75};
    cfg.forecaster = {"taylor", 2, 6, 1e-3, 12};
    cfg.seeds = {7, 18446744073709551615ULL};
    cfg.checkpoints = {5, 25, 50};
    cfg.output_dir = "somewhere/else";
    const json doc = to_json(cfg);
    const auto back = parse_config(json::parse(doc.dump()));
    CHECK(back == cfg);
    CHECK(to_json(back).dump() == doc.dump());
}

TEST_CASE("strict parsing names the offending key") {
    CHECK(config_error({{"forecaster", {{"lamda", 0.1}}}}).find("\"lamda\"") != std::string::npos);
    CHECK(config_error({{"seedz", {1}}}).find("\"seedz\"") != std::string::npos);
    CHECK(config_error({{"denoiser", {{"blocks", {{"cnt", 2}}}}}}).find("\"cnt\"") != std::string::npos);
    CHECK(config_error({{"n_steps", 2.5}}).find("n_steps") != std::string::npos);
    CHECK(config_error({{"forecaster", {{"kind", "magic"}}}}).find("magic") != std::string::npos);
    CHECK(config_error({{"seeds", {-1}}}).find("seeds") != std::string::npos);
    CHECK(config_error({{"seeds", json::array()}}).find("seeds") != std::string::npos);
    CHECK(config_error({{"checkpoints", {60}}}).find("60") != std::string::npos);
    CHECK_FALSE(config_error({{"schedule", {{"warmup", 0}}}}).empty());
    CHECK_FALSE(config_error({{"forecaster", {{"lambda", -1.0}}}}).empty());
    CHECK_FALSE(config_error({{"denoiser", {{"var_min", 0.0}}}}).empty());
}

TEST_CASE("load_config reports parse locations") {
    const std::filesystem::path dir = CHEBCAST_TEST_TMP;
    std::filesystem::create_directories(dir);
    write_text(dir / "broken.json", "{\n  \"n_steps\": 50,\n  oops\n}\n");
    try {
        (void)load_config(dir / "broken.json");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
    CHECK_THROWS_AS((void)load_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("oracle config reports zero error") {
    ExperimentConfig cfg;
    cfg.forecaster.kind = "none";
    cfg.seeds = {1, 2};
    const auto r = run_experiment(cfg);
    CHECK(r.nfe == 50);
    for (const auto& s : r.seeds) {
        CHECK(s.final_rmse == 0.0);
        CHECK(same_trajectory(s.run, s.oracle));
    }
    const auto summary = summary_json(r);
    for (const auto& s : summary["seeds"]) CHECK(s["oracle_self_rmse"].get<double>() == 0.0);
    CHECK(summary["speedup"].get<double>() == 1.0);
}

TEST_CASE("simulation output is byte-identical across reruns") {
    ExperimentConfig cfg;
    cfg.schedule = {2, 5, 3.0};
    cfg.seeds = {3, 1};
    const std::filesystem::path dir = std::filesystem::path(CHEBCAST_TEST_TMP) / "rerun";
    std::filesystem::remove_all(dir);
    const auto first = write_simulation(run_experiment(cfg), dir / "a");
    const auto second = write_simulation(run_experiment(cfg), dir / "b");
    REQUIRE(first.size() == 3);
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].filename() == second[i].filename());
        CHECK(read_file(first[i]) == read_file(second[i]));
    }
    const std::string csv = read_file(dir / "a" / "trajectory_seed3.csv");
    CHECK(csv.rfind("# spec: kind=gaussian_mixture_flow dim=8 seed=3\n", 0) == 0);
    CHECK(csv.find("step,time,flag,rmse_to_oracle\n1,0.0,actual,0.0\n") != std::string::npos);
    CHECK(csv.find("\n6,0.1,forecast,") != std::string::npos);
    const auto summary = json::parse(read_file(dir / "a" / "summary.json"));
    CHECK(summary["nfe"] == 10);
    CHECK(summary["seeds"][0]["seed"] == 3);
    CHECK(summary["seeds"].size() == 2);
}

TEST_CASE("seeds are independent of run order") {
    ExperimentConfig one;
    one.seeds = {4};
    ExperimentConfig many;
    many.seeds = {2, 4, 6};
    const auto a = run_experiment(one);
    const auto b = run_experiment(many);
    CHECK(same_trajectory(a.seeds[0].run, b.seeds[1].run));
}

TEST_CASE("sweeps") {
    CHECK(parse_axis("lambda") == SweepAxis::lambda);
    CHECK_THROWS_AS((void)parse_axis("gamma"), InvalidArgument);
    CHECK(default_sweep(SweepAxis::alpha).size() == 2);

    ExperimentConfig cfg;
    cfg.seeds = {1, 2};
    cfg.schedule = {2, 5, 3.0};
    const std::vector<SweepPoint> pts{{0.0, 8}, {3.0, 2}};
    const auto rows = sweep_report(SweepAxis::alpha, pts, cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].nfe == 10);
    CHECK(rows[1].nfe == 10);
    CHECK(rows[1].interval == 2);
    const std::string csv = sweep_csv(rows, false);
    CHECK(csv.rfind("axis_value,mean_rmse,nfe,wall_seconds\n0.0,", 0) == 0);
    CHECK(csv.find(",10,nan\n3.0,") != std::string::npos);
    CHECK(sweep_csv(rows, true).find("nan") == std::string::npos);
    CHECK(sweep_csv(sweep_report(SweepAxis::alpha, pts, cfg), false) == csv);

    const std::vector<SweepPoint> bad{{2.5}};
    CHECK_THROWS_AS((void)sweep_report(SweepAxis::degree, bad, cfg), InvalidArgument);
}

TEST_CASE("bounds suites") {
    for (const char* s : {"taylor", "chebyshev", "spectrum"}) {
        const auto r = run_bounds_suite(s);
        CAPTURE(s);
        CHECK(r.passed);
        CHECK(r.json["suites"].contains(s));
    }
    const auto all = run_bounds_suite("all");
    CHECK(all.passed);
    CHECK(all.json["suites"].size() == 3);
    CHECK(all.json.dump() == run_bounds_suite("all").json.dump());
    CHECK_THROWS_AS((void)run_bounds_suite("nosuch"), InvalidArgument);
}

TEST_CASE("output directory override") {
    ::unsetenv("CHEBCAST_OUTPUT_DIR");
    CHECK(resolve_output_dir("cfg_dir") == "cfg_dir");
    ::setenv("CHEBCAST_OUTPUT_DIR", "/tmp/elsewhere", 1);
    CHECK(resolve_output_dir("cfg_dir") == "/tmp/elsewhere");
    ::setenv("CHEBCAST_OUTPUT_DIR", "", 1);
    CHECK(resolve_output_dir("cfg_dir") == "cfg_dir");
    ::unsetenv("CHEBCAST_OUTPUT_DIR");
}
