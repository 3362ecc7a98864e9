#include "chebcast/sandbox.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "chebcast/error.hpp"

namespace chebcast {

double Rng::uniform() {
    // 53 random mantissa bits in [0, 1).
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Eigen::VectorXd standard_normal(std::uint64_t seed, Eigen::Index dim) {
    Rng rng(seed);
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.normal();
    return v;
}

ChannelFunction ChannelFunction::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) throw InvalidArgument("polynomial channel needs coefficients");
    return {Kind::polynomial, std::move(coeffs)};
}

ChannelFunction ChannelFunction::sine(double amplitude, double frequency, double phase,
                                      double offset) {
    return {Kind::sine, {amplitude, frequency, phase, offset}};
}

ChannelFunction ChannelFunction::exponential(double scale, double rate, double offset) {
    return {Kind::exponential, {scale, rate, offset}};
}

double ChannelFunction::operator()(double t) const {
    switch (kind) {
        case Kind::polynomial: {
            double acc = 0.0;
            for (auto it = params.rbegin(); it != params.rend(); ++it) acc = acc * t + *it;
            return acc;
        }
        case Kind::sine:
            return params[3] + params[0] * std::sin(2.0 * std::numbers::pi * params[1] * t + params[2]);
        case Kind::exponential:
            return params[2] + params[0] * std::exp(params[1] * t);
    }
    return 0.0;
}

std::string ChannelFunction::name() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::polynomial:
            os << "polynomial(";
            break;
        case Kind::sine:
            os << "sine(";
            break;
        case Kind::exponential:
            os << "exponential(";
            break;
    }
    for (std::size_t i = 0; i < params.size(); ++i) os << (i ? "," : "") << params[i];
    os << ')';
    return os.str();
}

std::string to_string(DenoiserKind kind) {
    switch (kind) {
        case DenoiserKind::gaussian_mixture_flow:
            return "gaussian_mixture_flow";
        case DenoiserKind::function_family:
            return "function_family";
        case DenoiserKind::block_stack:
            return "block_stack";
    }
    return "unknown";
}

void DenoiserSpec::check_mixture(const std::vector<MixtureComponent>& mixture) {
    if (mixture.empty()) throw InvalidArgument("mixture needs at least one component");
    const Eigen::Index dim = mixture.front().mean.size();
    if (dim == 0) throw InvalidArgument("mixture dimension must be positive");
    double total = 0.0;
    for (const auto& c : mixture) {
        if (!(c.weight >= 0.0)) throw InvalidArgument("mixture weights must be non-negative");
        if (c.mean.size() != dim || c.variance.size() != dim)
            throw InvalidArgument("mixture components disagree on dimension");
        if (!(c.variance.array() > 0.0).all())
            throw InvalidArgument("mixture variances must be strictly positive");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("mixture weights must sum to 1");
}

DenoiserSpec DenoiserSpec::gaussian_mixture(std::vector<MixtureComponent> mixture,
                                            std::uint64_t seed) {
    check_mixture(mixture);
    DenoiserSpec spec;
    spec.kind_ = DenoiserKind::gaussian_mixture_flow;
    spec.dim_ = mixture.front().mean.size();
    spec.seed_ = seed;
    spec.mixture_ = std::move(mixture);
    return spec;
}

DenoiserSpec DenoiserSpec::random_mixture(Eigen::Index dim, int components, double mean_scale,
                                          double var_min, double var_max, std::uint64_t seed) {
    if (dim < 1 || components < 1) throw InvalidArgument("mixture needs dim >= 1, components >= 1");
    if (!(var_min > 0.0) || !(var_max >= var_min))
        throw InvalidArgument("mixture variance range must satisfy 0 < var_min <= var_max");
    Rng rng(derive_seed(seed, 1));
    std::vector<MixtureComponent> mixture;
    double total = 0.0;
    for (int c = 0; c < components; ++c) {
        MixtureComponent comp{rng.uniform(0.5, 1.5), Eigen::VectorXd(dim), Eigen::VectorXd(dim)};
        for (Eigen::Index i = 0; i < dim; ++i) comp.mean(i) = mean_scale * rng.normal();
        for (Eigen::Index i = 0; i < dim; ++i) comp.variance(i) = rng.uniform(var_min, var_max);
        total += comp.weight;
        mixture.push_back(std::move(comp));
    }
    for (auto& c : mixture) c.weight /= total;
    return gaussian_mixture(std::move(mixture), seed);
}

DenoiserSpec DenoiserSpec::function_family(std::vector<ChannelFunction> channels) {
    if (channels.empty()) throw InvalidArgument("function family needs at least one channel");
    DenoiserSpec spec;
    spec.kind_ = DenoiserKind::function_family;
    spec.dim_ = static_cast<Eigen::Index>(channels.size());
    spec.channels_ = std::move(channels);
    return spec;
}

DenoiserSpec DenoiserSpec::block_stack(std::vector<MixtureComponent> mixture,
                                       BlockStackParams blocks, std::uint64_t seed) {
    if (blocks.count < 1) throw InvalidArgument("block stack needs at least one block");
    DenoiserSpec spec = gaussian_mixture(std::move(mixture), seed);
    spec.kind_ = DenoiserKind::block_stack;
    spec.blocks_ = blocks;
    const Eigen::Index d = spec.dim_;
    Rng rng(derive_seed(seed, 2));
    for (int b = 0; b < blocks.count; ++b) {
        Eigen::MatrixXd g(d, d);
        for (Eigen::Index j = 0; j < d; ++j)
            for (Eigen::Index i = 0; i < d; ++i) g(i, j) = rng.normal();
        const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
        spec.mixers_.push_back((1.0 - blocks.mix) * Eigen::MatrixXd::Identity(d, d) +
                               blocks.mix * q);
    }
    return spec;
}

Eigen::VectorXd mixture_velocity(const std::vector<MixtureComponent>& mixture,
                                 const Eigen::VectorXd& x, double t) {
    const Eigen::Index dim = x.size();
    const std::size_t n = mixture.size();
    std::vector<double> log_resp(n);
    std::vector<Eigen::VectorXd> vel(n);
    const double noise_sd = 1.0 - t;
    for (std::size_t c = 0; c < n; ++c) {
        const auto& comp = mixture[c];
        const Eigen::ArrayXd var_t = noise_sd * noise_sd + t * t * comp.variance.array();
        const Eigen::ArrayXd centered = x.array() - t * comp.mean.array();
        log_resp[c] = (comp.weight > 0.0 ? std::log(comp.weight) : -INFINITY) -
                      0.5 * (centered.square() / var_t + (2.0 * std::numbers::pi * var_t).log()).sum();
        vel[c] = comp.mean.array() + (t * comp.variance.array() - noise_sd) / var_t * centered;
    }
    double peak = -INFINITY;
    for (double l : log_resp) peak = std::max(peak, l);
    double norm = 0.0;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
    for (std::size_t c = 0; c < n; ++c) {
        const double w = std::exp(log_resp[c] - peak);
        norm += w;
        out += w * vel[c];
    }
    return out / norm;
}

DenoiserOutput analytic_denoiser(const Eigen::VectorXd& x, double t, const DenoiserSpec& spec) {
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("denoiser time outside [0, 1]");
    if (x.size() != spec.dim())
        throw InvalidArgument("latent has dimension " + std::to_string(x.size()) +
                              ", denoiser expects " + std::to_string(spec.dim()));
    DenoiserOutput out;
    switch (spec.kind()) {
        case DenoiserKind::gaussian_mixture_flow:
            out.feature = mixture_velocity(spec.mixture(), x, t);
            break;
        case DenoiserKind::function_family: {
            out.feature.resize(spec.dim());
            for (Eigen::Index i = 0; i < spec.dim(); ++i)
                out.feature(i) = spec.channels()[static_cast<std::size_t>(i)](t);
            break;
        }
        case DenoiserKind::block_stack: {
            Eigen::VectorXd y = mixture_velocity(spec.mixture(), x, t);
            const double gain = spec.blocks().gain;
            for (std::size_t b = 0; b < spec.block_mixers().size(); ++b) {
                const Eigen::VectorXd delta =
                    gain * (spec.block_mixers()[b] * y).array().tanh().matrix();
                // Block 1's part carries the base feature so the parts sum to h.
                out.block_parts.push_back(b == 0 ? Eigen::VectorXd(y + delta) : delta);
                y += delta;
            }
            out.feature = std::move(y);
            break;
        }
    }
    out.score = out.feature;
    return out;
}

Eigen::VectorXd euler_step(const Eigen::VectorXd& x, const Eigen::VectorXd& eps, double t_from,
                           double t_to) {
    if (!(t_from >= 0.0 && t_to <= 1.0 && t_from < t_to))
        throw InvalidArgument("Euler step needs 0 <= t_from < t_to <= 1");
    if (x.size() != eps.size()) throw InvalidArgument("Euler step: dimension mismatch");
    return x + (t_to - t_from) * eps;
}

bool same_trajectory(const TrajectoryRecord& a, const TrajectoryRecord& b) {
    if (a.times != b.times || a.flags != b.flags) return false;
    if (a.states.size() != b.states.size() || a.features.size() != b.features.size()) return false;
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        if (a.states[i].size() != b.states[i].size() || a.states[i] != b.states[i]) return false;
    }
    for (std::size_t i = 0; i < a.features.size(); ++i) {
        if (a.features[i].size() != b.features[i].size() || a.features[i] != b.features[i])
            return false;
    }
    return true;
}

TrajectoryRecord run_sampler(const DenoiserSpec& spec, const SolverConfig& cfg,
                             const Eigen::VectorXd& x0) {
    const int n = cfg.n_steps;
    if (n < 1) throw InvalidArgument("sampler needs at least one step");
    if (cfg.schedule.n_steps() != n)
        throw InvalidArgument("schedule covers " + std::to_string(cfg.schedule.n_steps()) +
                              " steps but the solver runs " + std::to_string(n));
    if (x0.size() != spec.dim()) throw InvalidArgument("initial latent has the wrong dimension");

    const auto start = std::chrono::steady_clock::now();
    const bool per_block = cfg.forecaster && cfg.caching == BlockCaching::per_block &&
                           spec.kind() == DenoiserKind::block_stack;
    std::vector<Forecaster> forecasters;
    if (cfg.forecaster) {
        const std::size_t count = per_block ? spec.block_mixers().size() : 1;
        for (std::size_t i = 0; i < count; ++i) forecasters.emplace_back(*cfg.forecaster, cfg.cache);
    }

    TrajectoryRecord rec;
    rec.times.reserve(static_cast<std::size_t>(n));
    rec.states.reserve(static_cast<std::size_t>(n));
    rec.features.reserve(static_cast<std::size_t>(n));
    rec.flags.reserve(static_cast<std::size_t>(n));

    const double steps = static_cast<double>(n);
    Eigen::VectorXd x = x0;
    for (int j = 1; j <= n; ++j) {
        const double t = (j - 1) / steps;
        const double t_next = j / steps;
        FeatureVector h;
        try {
            if (!cfg.forecaster || cfg.schedule.is_full_pass(j)) {
                DenoiserOutput out = analytic_denoiser(x, t, spec);
                if (per_block) {
                    for (std::size_t b = 0; b < forecasters.size(); ++b)
                        forecasters[b].observe(t, out.block_parts[b]);
                } else if (!forecasters.empty()) {
                    forecasters.front().observe(t, out.feature);
                }
                h = std::move(out.feature);
                rec.flags.push_back(StepFlag::actual);
                ++rec.nfe;
            } else {
                h = forecasters.front().forecast(t);
                for (std::size_t b = 1; b < forecasters.size(); ++b) h += forecasters[b].forecast(t);
                rec.flags.push_back(StepFlag::forecast);
            }
        } catch (const Error& e) {
            throw ForecastError("step " + std::to_string(j) + ": " + e.what());
        }
        // The score is the identity map of the last-block feature.
        x = euler_step(x, h, t, t_next);
        rec.times.push_back(t);
        rec.states.push_back(x);
        rec.features.push_back(std::move(h));
    }
    for (const auto& f : forecasters) rec.fit_count += f.fit_count();
    rec.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::vector<double> rmse_vs_oracle(const TrajectoryRecord& a, const TrajectoryRecord& oracle,
                                   std::span<const int> checkpoints) {
    if (a.states.size() != oracle.states.size())
        throw InvalidArgument("trajectories have different step counts");
    std::vector<double> out;
    out.reserve(checkpoints.size());
    for (int step : checkpoints) {
        if (step < 1 || static_cast<std::size_t>(step) > a.states.size())
            throw InvalidArgument("checkpoint " + std::to_string(step) + " outside trajectory");
        const auto& s = a.states[static_cast<std::size_t>(step) - 1];
        const auto& o = oracle.states[static_cast<std::size_t>(step) - 1];
        if (s.size() != o.size()) throw InvalidArgument("trajectories have different dimensions");
        out.push_back(std::sqrt((s - o).squaredNorm() / static_cast<double>(s.size())));
    }
    return out;
}

}  // namespace chebcast
