#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chebcast/sandbox.hpp"
#include "chebcast/schedule.hpp"

namespace chebcast {

struct MixtureConfig {
    double weight = 1.0;
    std::vector<double> mean;
    std::vector<double> variance;
    friend bool operator==(const MixtureConfig&, const MixtureConfig&) = default;
};

struct ChannelConfig {
    std::string kind;  // polynomial | sine | exponential
    std::vector<double> params;
    friend bool operator==(const ChannelConfig&, const ChannelConfig&) = default;
};

struct BlocksConfig {
    int count = 4;
    double mix = 0.5;
    double gain = 0.2;
    friend bool operator==(const BlocksConfig&, const BlocksConfig&) = default;
};

/// Denoiser description. Mixture kinds draw a random mixture from the run
/// seed unless `mixture` lists the components explicitly.
struct DenoiserConfig {
    std::string kind = "gaussian_mixture_flow";
    int dim = 8;
    int components = 3;
    double mean_scale = 1.5;
    double var_min = 0.05;
    double var_max = 0.3;
    std::vector<MixtureConfig> mixture;
    std::vector<ChannelConfig> channels;
    BlocksConfig blocks;
    std::string caching = "last_block";  // last_block | per_block
    friend bool operator==(const DenoiserConfig&, const DenoiserConfig&) = default;
};

struct ScheduleConfig {
    int interval = 1;
    int warmup = 1;
    double alpha = 0.0;
    friend bool operator==(const ScheduleConfig&, const ScheduleConfig&) = default;
};

struct ForecasterSettings {
    std::string kind = "spectrum";  // none | naive | taylor | spectrum
    int order = 1;
    int degree = 4;
    double lambda = RegStrength::kDefault;
    std::size_t window = 0;
    friend bool operator==(const ForecasterSettings&, const ForecasterSettings&) = default;
};

struct ExperimentConfig {
    DenoiserConfig denoiser;
    int n_steps = 50;
    ScheduleConfig schedule;
    ForecasterSettings forecaster;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::vector<int> checkpoints{10, 20, 30, 40, 50};
    std::string output_dir = "out";
    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Strict parse: unknown keys and wrongly typed values raise ConfigError
/// naming the offending key. Missing keys keep their defaults.
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json& doc);
/// Reads and parses a JSON file; syntax errors report the byte offset.
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);
[[nodiscard]] nlohmann::json to_json(const ExperimentConfig& cfg);

[[nodiscard]] DenoiserSpec make_spec(const ExperimentConfig& cfg, std::uint64_t seed);
[[nodiscard]] ActivationSchedule make_schedule(const ExperimentConfig& cfg);
[[nodiscard]] SolverConfig make_solver(const ExperimentConfig& cfg);
[[nodiscard]] Eigen::VectorXd initial_latent(std::uint64_t seed, Eigen::Index dim);

struct SeedResult {
    std::uint64_t seed = 0;
    TrajectoryRecord run;
    TrajectoryRecord oracle;
    std::vector<double> step_rmse;        // every step 1..N
    std::vector<double> checkpoint_rmse;  // at cfg.checkpoints
    double final_rmse = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<SeedResult> seeds;  // in config order
    int nfe = 0;
    double mean_final_rmse = 0.0;
    std::vector<double> mean_checkpoint_rmse;
    double wall_seconds = 0.0;
};

/// Runs every seed (concurrently) plus its full-NFE oracle.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& cfg);

[[nodiscard]] std::string trajectory_csv(const ExperimentConfig& cfg, const SeedResult& seed);
[[nodiscard]] nlohmann::json summary_json(const ExperimentResult& result);

/// Writes trajectory_seed<seed>.csv per seed and summary.json into `dir`.
std::vector<std::filesystem::path> write_simulation(const ExperimentResult& result,
                                                    const std::filesystem::path& dir);

enum class SweepAxis { lambda, degree, alpha };

/// Throws InvalidArgument for anything but lambda, degree or alpha.
[[nodiscard]] SweepAxis parse_axis(std::string_view name);
[[nodiscard]] std::string to_string(SweepAxis axis);

/// One sweep setting. For the alpha axis `interval` is the paired first
/// forecast interval; other axes ignore it.
struct SweepPoint {
    double value;
    int interval = 0;
};

[[nodiscard]] std::vector<SweepPoint> default_sweep(SweepAxis axis);

struct SweepRow {
    double axis_value;
    int interval;
    double mean_rmse;  // mean final-state RMSE over seeds
    int nfe;
    double wall_seconds;
};

[[nodiscard]] std::vector<SweepRow> sweep_report(SweepAxis axis, std::span<const SweepPoint> points,
                                                 const ExperimentConfig& base);

/// Columns axis_value,mean_rmse,nfe,wall_seconds. Without `timing` the
/// wall_seconds column holds nan so reruns stay byte-identical.
[[nodiscard]] std::string sweep_csv(std::span<const SweepRow> rows, bool timing);

struct BoundsReport {
    nlohmann::json json;
    bool passed = false;
};

/// taylor | chebyshev | spectrum | all. Throws InvalidArgument otherwise.
[[nodiscard]] BoundsReport run_bounds_suite(std::string_view suite);

/// CHEBCAST_OUTPUT_DIR when set and non-empty, otherwise `configured`.
[[nodiscard]] std::filesystem::path resolve_output_dir(const std::string& configured);

/// Appends a timestamped line to <dir>/run.log, the only file that varies between reruns.
void append_run_log(const std::filesystem::path& dir, const std::string& line);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace chebcast
