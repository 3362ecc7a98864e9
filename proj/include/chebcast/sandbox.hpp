#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chebcast/forecasters.hpp"
#include "chebcast/schedule.hpp"

namespace chebcast {

/// Seeded generator with platform-independent uniform and normal draws
/// (mt19937_64 bits, 53-bit uniforms, Box-Muller normals).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();

private:
    std::mt19937_64 gen_;
    std::optional<double> spare_;
};

/// Independent child seed for a named stream of a base seed (splitmix64 mix).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Standard normal latent of length dim, deterministic in seed.
[[nodiscard]] Eigen::VectorXd standard_normal(std::uint64_t seed, Eigen::Index dim);

struct MixtureComponent {
    double weight;
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;  // per-dimension, strictly positive
};

/// Analytic time channel h(t) on [0, 1].
///   polynomial   sum_i params[i] t^i
///   sine         params = {amplitude, frequency, phase, offset}: offset + a sin(2 pi f t + phase)
///   exponential  params = {scale, rate, offset}: offset + scale exp(rate t)
struct ChannelFunction {
    enum class Kind { polynomial, sine, exponential };

    Kind kind;
    std::vector<double> params;

    static ChannelFunction polynomial(std::vector<double> coeffs);
    static ChannelFunction sine(double amplitude, double frequency, double phase = 0.0,
                                double offset = 0.0);
    static ChannelFunction exponential(double scale, double rate, double offset = 0.0);

    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] std::string name() const;
};

struct BlockStackParams {
    int count = 4;
    /// Blend between identity (0) and the per-block random rotation (1).
    double mix = 0.5;
    /// Gain of the tanh residual branch; 0 makes every block the identity.
    double gain = 0.2;
};

enum class DenoiserKind { gaussian_mixture_flow, function_family, block_stack };

[[nodiscard]] std::string to_string(DenoiserKind kind);

/// Synthetic ground-truth denoiser. Immutable after construction; any random
/// structure (block rotations) is drawn once from the seed here.
class DenoiserSpec {
public:
    static DenoiserSpec gaussian_mixture(std::vector<MixtureComponent> mixture,
                                         std::uint64_t seed = 0);
    /// Mixture with weights ~ U(0.5, 1.5) (normalized), means ~ N(0, mean_scale^2),
    /// variances ~ U(var_min, var_max), all drawn from the seed.
    static DenoiserSpec random_mixture(Eigen::Index dim, int components, double mean_scale,
                                       double var_min, double var_max, std::uint64_t seed);
    static DenoiserSpec function_family(std::vector<ChannelFunction> channels);
    static DenoiserSpec block_stack(std::vector<MixtureComponent> mixture, BlockStackParams blocks,
                                    std::uint64_t seed);

    [[nodiscard]] DenoiserKind kind() const noexcept { return kind_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return dim_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] const std::vector<MixtureComponent>& mixture() const noexcept { return mixture_; }
    [[nodiscard]] const std::vector<ChannelFunction>& channels() const noexcept { return channels_; }
    [[nodiscard]] const BlockStackParams& blocks() const noexcept { return blocks_; }
    /// Mixing matrices (1 - mix) I + mix Q_b, one per block.
    [[nodiscard]] const std::vector<Eigen::MatrixXd>& block_mixers() const noexcept {
        return mixers_;
    }

private:
    DenoiserSpec() = default;
    static void check_mixture(const std::vector<MixtureComponent>& mixture);

    DenoiserKind kind_ = DenoiserKind::gaussian_mixture_flow;
    Eigen::Index dim_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<MixtureComponent> mixture_;
    std::vector<ChannelFunction> channels_;
    BlockStackParams blocks_{};
    std::vector<Eigen::MatrixXd> mixers_;
};

struct DenoiserOutput {
    FeatureVector feature;  // last-block feature h
    Eigen::VectorXd score;  // eps; identical to `feature` for every kind
    /// block_stack only: block 1 output, then each later block's residual
    /// increment. Their sum equals `feature`.
    std::vector<FeatureVector> block_parts;
};

/// Posterior-mean velocity E[x_1 - x_0 | x_t = x] of the rectified-flow path
/// x_t = (1 - t) x_0 + t x_1 with x_0 ~ N(0, I) and x_1 from the mixture.
[[nodiscard]] Eigen::VectorXd mixture_velocity(const std::vector<MixtureComponent>& mixture,
                                               const Eigen::VectorXd& x, double t);

[[nodiscard]] DenoiserOutput analytic_denoiser(const Eigen::VectorXd& x, double t,
                                               const DenoiserSpec& spec);

/// x + (t_to - t_from) eps.
[[nodiscard]] Eigen::VectorXd euler_step(const Eigen::VectorXd& x, const Eigen::VectorXd& eps,
                                         double t_from, double t_to);

enum class BlockCaching { last_block, per_block };

struct SolverConfig {
    int n_steps = 50;
    ActivationSchedule schedule = ActivationSchedule::all_full(50);
    /// nullopt runs the full-NFE oracle (every step is an actual pass).
    std::optional<ForecasterConfig> forecaster;
    CachePolicy cache = CachePolicy::all();
    BlockCaching caching = BlockCaching::last_block;
};

enum class StepFlag { actual, forecast };

struct TrajectoryRecord {
    std::vector<double> times;             // evaluation time t_j = (j - 1) / N
    std::vector<Eigen::VectorXd> states;   // latent after step j
    std::vector<FeatureVector> features;   // feature used at step j
    std::vector<StepFlag> flags;
    std::size_t fit_count = 0;
    int nfe = 0;
    double wall_time = 0.0;  // seconds; diagnostic only
};

/// Bitwise equality of times, states, features and flags.
[[nodiscard]] bool same_trajectory(const TrajectoryRecord& a, const TrajectoryRecord& b);

/// Runs N Euler steps from x0. Step j evaluates at t_{j} = (j - 1)/N and
/// advances to j/N; full-pass steps call the denoiser and update the cache,
/// skipped steps use the configured forecaster.
[[nodiscard]] TrajectoryRecord run_sampler(const DenoiserSpec& spec, const SolverConfig& cfg,
                                           const Eigen::VectorXd& x0);

/// Root-mean-square latent difference at each 1-based checkpoint step.
[[nodiscard]] std::vector<double> rmse_vs_oracle(const TrajectoryRecord& a,
                                                 const TrajectoryRecord& oracle,
                                                 std::span<const int> checkpoints);

}  // namespace chebcast
