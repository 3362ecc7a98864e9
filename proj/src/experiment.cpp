#include "chebcast/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <future>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "chebcast/bounds.hpp"
#include "chebcast/error.hpp"
#include "chebcast/format.hpp"

namespace chebcast {

using nlohmann::json;

namespace {

// ---- strict JSON readers ----------------------------------------------------

std::string join_path(const std::string& where, std::string_view key) {
    return where.empty() ? std::string(key) : where + "." + std::string(key);
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
    if (!obj.is_object())
        throw ConfigError((where.empty() ? "config" : where) + ": expected an object");
    for (const auto& item : obj.items()) {
        const std::string& key = item.key();
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown key \"" + key + "\"" + (where.empty() ? "" : " in " + where));
    }
}

const json* find(const json& obj, std::string_view key) {
    const auto it = obj.find(std::string(key));
    return it == obj.end() ? nullptr : &*it;
}

void read_double(const json& obj, std::string_view key, const std::string& where, double& out) {
    if (const json* v = find(obj, key)) {
        if (!v->is_number()) throw ConfigError(join_path(where, key) + ": expected a number");
        out = v->get<double>();
    }
}

template <class Int>
Int as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ConfigError(path + ": expected an integer");
    if constexpr (std::is_unsigned_v<Int>) {
        if (v.is_number_unsigned()) return v.get<Int>();
        if (v.get<long long>() < 0) throw ConfigError(path + ": expected a non-negative integer");
    }
    return v.get<Int>();
}

template <class Int>
void read_int(const json& obj, std::string_view key, const std::string& where, Int& out) {
    if (const json* v = find(obj, key)) out = as_integer<Int>(*v, join_path(where, key));
}

void read_string(const json& obj, std::string_view key, const std::string& where,
                 std::string& out, std::initializer_list<std::string_view> choices) {
    if (const json* v = find(obj, key)) {
        const std::string path = join_path(where, key);
        if (!v->is_string()) throw ConfigError(path + ": expected a string");
        out = v->get<std::string>();
        if (std::find(choices.begin(), choices.end(), out) == choices.end())
            throw ConfigError(path + ": unsupported value \"" + out + "\"");
    }
}

std::vector<double> as_doubles(const json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError(path + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(path + ": expected an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

template <class Int>
std::vector<Int> as_integers(const json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError(path + ": expected an array of integers");
    std::vector<Int> out;
    for (const auto& x : v) out.push_back(as_integer<Int>(x, path));
    return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

ChannelFunction to_channel(const ChannelConfig& c) {
    if (c.kind == "polynomial") return ChannelFunction::polynomial(c.params);
    const std::size_t want = c.kind == "sine" ? 4 : 3;
    if (c.params.size() != want)
        throw ConfigError(c.kind + " channel needs " + std::to_string(want) + " params");
    if (c.kind == "sine")
        return ChannelFunction::sine(c.params[0], c.params[1], c.params[2], c.params[3]);
    return ChannelFunction::exponential(c.params[0], c.params[1], c.params[2]);
}

std::vector<MixtureComponent> make_mixture(const DenoiserConfig& d, std::uint64_t seed) {
    if (d.mixture.empty())
        return DenoiserSpec::random_mixture(d.dim, d.components, d.mean_scale, d.var_min, d.var_max,
                                            seed)
            .mixture();
    std::vector<MixtureComponent> out;
    for (const auto& c : d.mixture) out.push_back({c.weight, to_vector(c.mean), to_vector(c.variance)});
    return out;
}

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

const char* flag_name(StepFlag f) { return f == StepFlag::actual ? "actual" : "forecast"; }

}  // namespace

// ---- config -------------------------------------------------------------------

ExperimentConfig parse_config(const json& doc) {
    ExperimentConfig cfg;
    reject_unknown(doc, {"denoiser", "n_steps", "schedule", "forecaster", "seeds", "checkpoints",
                         "output_dir"},
                   "");

    if (const json* d = find(doc, "denoiser")) {
        const std::string w = "denoiser";
        auto& out = cfg.denoiser;
        reject_unknown(*d, {"kind", "dim", "components", "mean_scale", "var_min", "var_max",
                            "mixture", "channels", "blocks", "caching"},
                       w);
        read_string(*d, "kind", w, out.kind, {"gaussian_mixture_flow", "function_family", "block_stack"});
        read_int(*d, "dim", w, out.dim);
        read_int(*d, "components", w, out.components);
        read_double(*d, "mean_scale", w, out.mean_scale);
        read_double(*d, "var_min", w, out.var_min);
        read_double(*d, "var_max", w, out.var_max);
        read_string(*d, "caching", w, out.caching, {"last_block", "per_block"});
        if (const json* m = find(*d, "mixture")) {
            if (!m->is_array()) throw ConfigError("denoiser.mixture: expected an array");
            for (std::size_t i = 0; i < m->size(); ++i) {
                const std::string cw = "denoiser.mixture[" + std::to_string(i) + "]";
                const json& c = (*m)[i];
                reject_unknown(c, {"weight", "mean", "variance"}, cw);
                MixtureConfig mc;
                read_double(c, "weight", cw, mc.weight);
                if (const json* v = find(c, "mean")) mc.mean = as_doubles(*v, cw + ".mean");
                if (const json* v = find(c, "variance")) mc.variance = as_doubles(*v, cw + ".variance");
                out.mixture.push_back(std::move(mc));
            }
        }
        if (const json* ch = find(*d, "channels")) {
            if (!ch->is_array()) throw ConfigError("denoiser.channels: expected an array");
            for (std::size_t i = 0; i < ch->size(); ++i) {
                const std::string cw = "denoiser.channels[" + std::to_string(i) + "]";
                const json& c = (*ch)[i];
                reject_unknown(c, {"kind", "params"}, cw);
                ChannelConfig cc;
                read_string(c, "kind", cw, cc.kind, {"polynomial", "sine", "exponential"});
                if (cc.kind.empty()) throw ConfigError(cw + ".kind: missing");
                if (const json* v = find(c, "params")) cc.params = as_doubles(*v, cw + ".params");
                out.channels.push_back(std::move(cc));
            }
        }
        if (const json* b = find(*d, "blocks")) {
            const std::string bw = "denoiser.blocks";
            reject_unknown(*b, {"count", "mix", "gain"}, bw);
            read_int(*b, "count", bw, out.blocks.count);
            read_double(*b, "mix", bw, out.blocks.mix);
            read_double(*b, "gain", bw, out.blocks.gain);
        }
    }

    read_int(doc, "n_steps", "", cfg.n_steps);

    if (const json* s = find(doc, "schedule")) {
        const std::string w = "schedule";
        reject_unknown(*s, {"interval", "warmup", "alpha"}, w);
        read_int(*s, "interval", w, cfg.schedule.interval);
        read_int(*s, "warmup", w, cfg.schedule.warmup);
        read_double(*s, "alpha", w, cfg.schedule.alpha);
    }

    if (const json* f = find(doc, "forecaster")) {
        const std::string w = "forecaster";
        reject_unknown(*f, {"kind", "order", "degree", "lambda", "window"}, w);
        read_string(*f, "kind", w, cfg.forecaster.kind, {"none", "naive", "taylor", "spectrum"});
        read_int(*f, "order", w, cfg.forecaster.order);
        read_int(*f, "degree", w, cfg.forecaster.degree);
        read_double(*f, "lambda", w, cfg.forecaster.lambda);
        read_int(*f, "window", w, cfg.forecaster.window);
    }

    if (const json* v = find(doc, "seeds")) cfg.seeds = as_integers<std::uint64_t>(*v, "seeds");
    if (const json* v = find(doc, "checkpoints")) cfg.checkpoints = as_integers<int>(*v, "checkpoints");
    if (const json* v = find(doc, "output_dir")) {
        if (!v->is_string()) throw ConfigError("output_dir: expected a string");
        cfg.output_dir = v->get<std::string>();
    }

    if (cfg.seeds.empty()) throw ConfigError("seeds: need at least one seed");
    for (int c : cfg.checkpoints)
        if (c < 1 || c > cfg.n_steps)
            throw ConfigError("checkpoints: step " + std::to_string(c) + " outside 1.." +
                              std::to_string(cfg.n_steps));
    try {
        (void)make_schedule(cfg);
        (void)make_solver(cfg);
        (void)make_spec(cfg, cfg.seeds.front());
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": parse error at byte " + std::to_string(e.byte) + ": " +
                          e.what());
    }
    return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
    json mixture = json::array();
    for (const auto& c : cfg.denoiser.mixture)
        mixture.push_back({{"weight", c.weight}, {"mean", c.mean}, {"variance", c.variance}});
    json channels = json::array();
    for (const auto& c : cfg.denoiser.channels) channels.push_back({{"kind", c.kind}, {"params", c.params}});
    const auto& d = cfg.denoiser;
    return {
        {"denoiser",
         {{"kind", d.kind},
          {"dim", d.dim},
          {"components", d.components},
          {"mean_scale", d.mean_scale},
          {"var_min", d.var_min},
          {"var_max", d.var_max},
          {"mixture", mixture},
          {"channels", channels},
          {"blocks", {{"count", d.blocks.count}, {"mix", d.blocks.mix}, {"gain", d.blocks.gain}}},
          {"caching", d.caching}}},
        {"n_steps", cfg.n_steps},
        {"schedule",
         {{"interval", cfg.schedule.interval},
          {"warmup", cfg.schedule.warmup},
          {"alpha", cfg.schedule.alpha}}},
        {"forecaster",
         {{"kind", cfg.forecaster.kind},
          {"order", cfg.forecaster.order},
          {"degree", cfg.forecaster.degree},
          {"lambda", cfg.forecaster.lambda},
          {"window", cfg.forecaster.window}}},
        {"seeds", cfg.seeds},
        {"checkpoints", cfg.checkpoints},
        {"output_dir", cfg.output_dir},
    };
}

DenoiserSpec make_spec(const ExperimentConfig& cfg, std::uint64_t seed) {
    const auto& d = cfg.denoiser;
    if (d.kind == "function_family") {
        std::vector<ChannelFunction> channels;
        for (const auto& c : d.channels) channels.push_back(to_channel(c));
        return DenoiserSpec::function_family(std::move(channels));
    }
    if (d.kind == "block_stack")
        return DenoiserSpec::block_stack(make_mixture(d, seed), {d.blocks.count, d.blocks.mix, d.blocks.gain},
                                         seed);
    return DenoiserSpec::gaussian_mixture(make_mixture(d, seed), seed);
}

ActivationSchedule make_schedule(const ExperimentConfig& cfg) {
    if (cfg.forecaster.kind == "none") return ActivationSchedule::all_full(cfg.n_steps);
    return adaptive_schedule(
        {cfg.n_steps, cfg.schedule.interval, cfg.schedule.warmup, cfg.schedule.alpha});
}

SolverConfig make_solver(const ExperimentConfig& cfg) {
    SolverConfig s;
    s.n_steps = cfg.n_steps;
    s.schedule = make_schedule(cfg);
    s.caching = cfg.denoiser.caching == "per_block" ? BlockCaching::per_block : BlockCaching::last_block;
    s.cache = cfg.forecaster.window ? CachePolicy::sliding(cfg.forecaster.window) : CachePolicy::all();
    const auto& f = cfg.forecaster;
    if (f.kind == "naive") {
        s.forecaster = NaiveConfig{};
    } else if (f.kind == "taylor") {
        if (f.order < 0) throw InvalidArgument("Taylor order must be >= 0");
        s.forecaster = TaylorConfig{f.order};
    } else if (f.kind == "spectrum") {
        s.forecaster = SpectrumConfig{BasisDegree(f.degree), RegStrength(f.lambda)};
    }
    return s;
}

Eigen::VectorXd initial_latent(std::uint64_t seed, Eigen::Index dim) {
    return standard_normal(derive_seed(seed, 3), dim);
}

// ---- runs -----------------------------------------------------------------------

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const SolverConfig solver = make_solver(cfg);
    SolverConfig oracle_cfg = solver;
    oracle_cfg.forecaster.reset();
    oracle_cfg.schedule = ActivationSchedule::all_full(cfg.n_steps);

    std::vector<int> all_steps(static_cast<std::size_t>(cfg.n_steps));
    std::iota(all_steps.begin(), all_steps.end(), 1);

    auto run_one = [&](std::uint64_t seed) {
        const DenoiserSpec spec = make_spec(cfg, seed);
        const Eigen::VectorXd x0 = initial_latent(seed, spec.dim());
        SeedResult r;
        r.seed = seed;
        r.run = run_sampler(spec, solver, x0);
        r.oracle = run_sampler(spec, oracle_cfg, x0);
        r.step_rmse = rmse_vs_oracle(r.run, r.oracle, all_steps);
        r.checkpoint_rmse = rmse_vs_oracle(r.run, r.oracle, cfg.checkpoints);
        r.final_rmse = r.step_rmse.back();
        return r;
    };

    std::vector<std::future<SeedResult>> jobs;
    for (std::uint64_t seed : cfg.seeds) jobs.push_back(std::async(std::launch::async, run_one, seed));

    ExperimentResult res;
    res.config = cfg;
    for (auto& j : jobs) res.seeds.push_back(j.get());
    res.nfe = nfe(solver.schedule);
    if (!solver.forecaster) res.nfe = cfg.n_steps;

    std::vector<double> finals;
    res.mean_checkpoint_rmse.assign(cfg.checkpoints.size(), 0.0);
    for (const auto& s : res.seeds) {
        finals.push_back(s.final_rmse);
        for (std::size_t i = 0; i < s.checkpoint_rmse.size(); ++i)
            res.mean_checkpoint_rmse[i] += s.checkpoint_rmse[i] / static_cast<double>(res.seeds.size());
    }
    res.mean_final_rmse = mean_of(finals);
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

std::string trajectory_csv(const ExperimentConfig& cfg, const SeedResult& seed) {
    std::ostringstream os;
    const DenoiserSpec spec = make_spec(cfg, seed.seed);
    os << "# spec: kind=" << to_string(spec.kind()) << " dim=" << spec.dim() << " seed=" << seed.seed
       << '\n';
    os << "# config: " << to_json(cfg).dump() << '\n';
    os << "# seed: " << seed.seed << " nfe=" << seed.run.nfe << " fits=" << seed.run.fit_count << '\n';
    os << "step,time,flag,rmse_to_oracle\n";
    for (std::size_t j = 0; j < seed.run.times.size(); ++j)
        os << j + 1 << ',' << format_double(seed.run.times[j]) << ',' << flag_name(seed.run.flags[j])
           << ',' << format_double(seed.step_rmse[j]) << '\n';
    return os.str();
}

json summary_json(const ExperimentResult& result) {
    json seeds = json::array();
    for (const auto& s : result.seeds) {
        const std::vector<int> last{static_cast<int>(s.oracle.states.size())};
        seeds.push_back({{"seed", s.seed},
                         {"nfe", s.run.nfe},
                         {"fit_count", s.run.fit_count},
                         {"checkpoint_rmse", s.checkpoint_rmse},
                         {"final_rmse", s.final_rmse},
                         {"oracle_self_rmse", rmse_vs_oracle(s.oracle, s.oracle, last).front()}});
    }
    return {{"config", to_json(result.config)},
            {"nfe", result.nfe},
            {"speedup", static_cast<double>(result.config.n_steps) / result.nfe},
            {"checkpoints", result.config.checkpoints},
            {"seeds", seeds},
            {"mean_checkpoint_rmse", result.mean_checkpoint_rmse},
            {"mean_final_rmse", result.mean_final_rmse}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("failed writing " + path.string());
}

std::vector<std::filesystem::path> write_simulation(const ExperimentResult& result,
                                                    const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> paths;
    for (const auto& s : result.seeds) {
        paths.push_back(dir / ("trajectory_seed" + std::to_string(s.seed) + ".csv"));
        write_text(paths.back(), trajectory_csv(result.config, s));
    }
    paths.push_back(dir / "summary.json");
    write_text(paths.back(), summary_json(result).dump(2) + "\n");
    return paths;
}

// ---- sweeps -----------------------------------------------------------------------

SweepAxis parse_axis(std::string_view name) {
    if (name == "lambda") return SweepAxis::lambda;
    if (name == "degree") return SweepAxis::degree;
    if (name == "alpha") return SweepAxis::alpha;
    throw InvalidArgument("unknown sweep axis \"" + std::string(name) + "\"");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::lambda:
            return "lambda";
        case SweepAxis::degree:
            return "degree";
        case SweepAxis::alpha:
            return "alpha";
    }
    return "unknown";
}

std::vector<SweepPoint> default_sweep(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::lambda:
            return {{1e-3}, {0.1}, {10.0}};
        case SweepAxis::degree:
            return {{2}, {4}, {6}};
        case SweepAxis::alpha:
            // Both settings spend ten full passes over fifty steps with warm-up 5.
            return {{0.0, 8}, {3.0, 2}};
    }
    return {};
}

std::vector<SweepRow> sweep_report(SweepAxis axis, std::span<const SweepPoint> points,
                                   const ExperimentConfig& base) {
    std::vector<SweepRow> rows;
    for (const auto& p : points) {
        ExperimentConfig cfg = base;
        switch (axis) {
            case SweepAxis::lambda:
                cfg.forecaster.lambda = p.value;
                break;
            case SweepAxis::degree:
                if (p.value != std::floor(p.value)) throw InvalidArgument("degree must be an integer");
                cfg.forecaster.degree = static_cast<int>(p.value);
                break;
            case SweepAxis::alpha:
                cfg.schedule.alpha = p.value;
                if (p.interval > 0) cfg.schedule.interval = p.interval;
                break;
        }
        const ExperimentResult r = run_experiment(cfg);
        rows.push_back({p.value, cfg.schedule.interval, r.mean_final_rmse, r.nfe, r.wall_seconds});
    }
    return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows, bool timing) {
    std::string out = "axis_value,mean_rmse,nfe,wall_seconds\n";
    for (const auto& r : rows) {
        out += format_double(r.axis_value) + ',' + format_double(r.mean_rmse) + ',' +
               std::to_string(r.nfe) + ',' + format_double(timing ? r.wall_seconds : NAN) + '\n';
    }
    return out;
}

// ---- bound suites -------------------------------------------------------------------

namespace {

json taylor_suite(bool& ok) {
    json checks = json::array();
    const double steps[] = {0.05, 0.1, 0.2, 0.5};
    for (int p = 0; p <= 5; ++p) {
        double fact = 1.0;
        for (int k = 2; k <= p + 1; ++k) fact *= k;
        for (double deriv : {1.0, fact}) {
            for (double h : steps) {
                const auto r = verify_taylor_attainment(p, h, deriv);
                ok = ok && r.passed;
                checks.push_back({{"check", "attainment"}, {"order", p}, {"step", h},
                                  {"deriv_bound", deriv}, {"attained", r.attained},
                                  {"bound", r.bound}, {"passed", r.passed}});
            }
            // Least-squares slope of log bound against log h.
            double mx = 0.0, my = 0.0;
            for (double h : steps) {
                mx += std::log(h) / 4.0;
                my += std::log(taylor_worst_case({deriv, p, h})) / 4.0;
            }
            double sxy = 0.0, sxx = 0.0;
            for (double h : steps) {
                const double dx = std::log(h) - mx;
                sxy += dx * (std::log(taylor_worst_case({deriv, p, h})) - my);
                sxx += dx * dx;
            }
            const double slope = sxy / sxx;
            const bool passed = std::abs(slope - (p + 1)) <= 1e-9;
            ok = ok && passed;
            checks.push_back({{"check", "loglog_slope"}, {"order", p}, {"deriv_bound", deriv},
                              {"slope", slope}, {"expected", p + 1}, {"passed", passed}});
        }
    }
    return checks;
}

json decay_json(const ChebDecayReport& r) {
    return {{"check", "cheb_decay"},
            {"function", r.name},
            {"degrees", r.degrees},
            {"sup_error", r.sup_error},
            {"bound", r.bound},
            {"fitted_rate", r.fitted_rate ? json(*r.fitted_rate) : json(nullptr)},
            {"required_rate", r.required_rate},
            {"passed", r.passed()}};
}

json chebyshev_suite(bool& ok) {
    json checks = json::array();
    std::vector<int> degrees(13);
    std::iota(degrees.begin(), degrees.end(), 0);
    // Pole at 2: any rho below 2 + sqrt(3) keeps the ellipse clear of it.
    const auto pole = verify_cheb_decay(AnalyticChannel::pole(2.0, 3.5), degrees);
    ok = ok && pole.passed();
    checks.push_back(decay_json(pole));

    const auto exact = [&](const char* name, std::function<double(double)> f, int from) {
        for (int m = from; m <= 8; ++m) {
            const double err = sup_error(f, chebyshev_interpolant(f, BasisDegree(m)));
            const bool passed = err <= 1e-12;
            ok = ok && passed;
            checks.push_back({{"check", "exact_capture"}, {"function", name}, {"degree", m},
                              {"sup_error", err}, {"passed", passed}});
        }
    };
    exact("tau^3", [](double x) { return x * x * x; }, 3);
    exact("5", [](double) { return 5.0; }, 0);
    return checks;
}

json spectrum_report_json(const SpectrumBoundReport& r, double ratio_ceiling) {
    json channels = json::array();
    for (const auto& c : r.channels) {
        json rows = json::array();
        for (const auto& row : c.rows)
            rows.push_back({{"gap", row.gap}, {"spectrum_error", row.spectrum_error},
                            {"taylor_error", row.taylor_error}, {"taylor_bound", row.taylor_bound}});
        channels.push_back({{"function", c.name}, {"bound", c.bound}, {"eps_m", c.eps_m},
                            {"spectrum_ratio", c.spectrum_ratio},
                            {"taylor_error_ratio", c.taylor_error_ratio},
                            {"contained", c.contained}, {"ratio_ok", c.ratio_ok}, {"rows", rows}});
    }
    return {{"check", "spectrum_bound"},
            {"lambda", r.lambda},
            {"degree", r.degree},
            {"k_points", r.k_points},
            {"sigma_min", r.sigma_min},
            {"ratio_ceiling", ratio_ceiling > 0 ? json(ratio_ceiling) : json(nullptr)},
            {"taylor_bound_growth", r.taylor_bound_growth},
            {"taylor_growth_required", r.taylor_growth_required},
            {"channels", channels},
            {"passed", r.passed()}};
}

json spectrum_suite(bool& ok) {
    json checks = json::array();
    const std::vector<AnalyticChannel> channels{AnalyticChannel::exp_time(2.0),
                                                AnalyticChannel::shifted_sine(2.0)};
    for (double lambda : {0.0, 0.1, 10.0}) {
        SpectrumBoundSetup setup;
        setup.fit = {BasisDegree(4), RegStrength(lambda)};
        setup.gaps = default_gaps();
        // Unregularized least squares leaves an error curve with zero crossings
        // inside the gap range, so max/min is unbounded there; the ceiling
        // applies to the ridge fits.
        if (lambda > 0.0) setup.max_gap_ratio = kGapRatioCeiling;
        const auto r = verify_spectrum_bound(channels, setup);
        ok = ok && r.passed();
        checks.push_back(spectrum_report_json(r, setup.max_gap_ratio.value_or(0.0)));
    }

    // Degree-3 polynomial channel at lambda = 0 is reproduced to round-off.
    const std::vector<AnalyticChannel> poly{AnalyticChannel::from_channel(
        ChannelFunction::polynomial({0.5, -1.0, 2.0, 0.75}), EllipseBoundParams(2.0, 10.0))};
    SpectrumBoundSetup setup;
    setup.fit = {BasisDegree(4), RegStrength(0.0)};
    setup.gaps = default_gaps();
    const auto r = verify_spectrum_bound(poly, setup);
    double worst = 0.0;
    for (const auto& row : r.channels.front().rows) worst = std::max(worst, row.spectrum_error);
    const bool passed = worst <= 1e-9 && r.channels.front().contained;
    ok = ok && passed;
    checks.push_back({{"check", "polynomial_exact"}, {"function", poly.front().name},
                      {"max_error", worst}, {"passed", passed}});
    return checks;
}

}  // namespace

BoundsReport run_bounds_suite(std::string_view suite) {
    const bool all = suite == "all";
    if (!all && suite != "taylor" && suite != "chebyshev" && suite != "spectrum")
        throw InvalidArgument("unknown bounds suite \"" + std::string(suite) + "\"");
    BoundsReport rep;
    bool ok = true;
    json suites = json::object();
    if (all || suite == "taylor") suites["taylor"] = taylor_suite(ok);
    if (all || suite == "chebyshev") suites["chebyshev"] = chebyshev_suite(ok);
    if (all || suite == "spectrum") suites["spectrum"] = spectrum_suite(ok);
    rep.passed = ok;
    rep.json = {{"suite", std::string(suite)}, {"passed", ok}, {"suites", suites}};
    return rep;
}

std::filesystem::path resolve_output_dir(const std::string& configured) {
    if (const char* env = std::getenv("CHEBCAST_OUTPUT_DIR"); env && *env) return env;
    return configured;
}

void append_run_log(const std::filesystem::path& dir, const std::string& line) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / "run.log", std::ios::app);
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << ' ' << line << '\n';
}

}  // namespace chebcast
