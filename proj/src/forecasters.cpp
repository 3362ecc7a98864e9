#include "chebcast/forecasters.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "chebcast/error.hpp"

namespace chebcast {

CachePolicy CachePolicy::sliding(std::size_t w) {
    if (w == 0) throw InvalidArgument("cache window must be positive");
    return CachePolicy{w};
}

void FeatureCache::insert(double t, FeatureVector h) {
    if (!std::isfinite(t)) throw InvalidArgument("cache time must be finite");
    if (!entries_.empty()) {
        if (!(t > entries_.back().t))
            throw InvalidArgument("cache times must be strictly increasing: " + std::to_string(t) +
                                  " after " + std::to_string(entries_.back().t));
        if (h.size() != entries_.front().h.size())
            throw InvalidArgument("feature width " + std::to_string(h.size()) +
                                  " does not match cached width " +
                                  std::to_string(entries_.front().h.size()));
    }
    entries_.push_back(CacheEntry{t, std::move(h)});
    if (policy_.is_windowed() && entries_.size() > policy_.window) entries_.pop_front();
}

const CacheEntry& FeatureCache::newest() const {
    if (entries_.empty()) throw ForecastError("feature cache is empty");
    return entries_.back();
}

FeatureCache cache_insert(FeatureCache cache, double t, FeatureVector h) {
    cache.insert(t, std::move(h));
    return cache;
}

namespace {

void require_ahead(const FeatureCache& cache, double t_j) {
    if (!(t_j > cache.newest().t))
        throw ForecastError("forecast time " + std::to_string(t_j) +
                            " is not after the newest cached time " +
                            std::to_string(cache.newest().t));
}

}  // namespace

FeatureVector naive_forecast(const FeatureCache& cache, double t_j) {
    require_ahead(cache, t_j);
    return cache.newest().h;
}

FeatureVector taylor_forecast(const FeatureCache& cache, double t_j, const TaylorConfig& cfg) {
    if (cfg.order < 0) throw InvalidArgument("Taylor order must be non-negative");
    require_ahead(cache, t_j);
    const auto order = static_cast<std::size_t>(cfg.order);
    if (cache.size() < order + 1)
        throw ForecastError("Taylor order " + std::to_string(order) + " needs " +
                            std::to_string(order + 1) + " cached entries, have " +
                            std::to_string(cache.size()));

    const auto& entries = cache.entries();
    FeatureVector out = entries.back().h;
    if (order == 0) return out;

    // Divided-difference table over the newest entries, newest first:
    // level p holds h[t_k, ..., t_{k-p}], h[t_{k-1}, ..., t_{k-1-p}], ...
    std::vector<double> ts(order + 1);
    std::vector<FeatureVector> level(order + 1);
    for (std::size_t i = 0; i <= order; ++i) {
        const auto& e = entries[entries.size() - 1 - i];
        ts[i] = e.t;
        level[i] = e.h;
    }
    const double dt = t_j - ts[0];
    double dt_pow = 1.0;
    for (std::size_t p = 1; p <= order; ++p) {
        for (std::size_t i = 0; i + p <= order; ++i)
            level[i] = (level[i] - level[i + 1]) / (ts[i] - ts[i + p]);
        dt_pow *= dt;
        out += dt_pow * level[0];
    }
    return out;
}

SpectrumState spectrum_fit(const FeatureCache& cache, const SpectrumConfig& cfg) {
    if (cache.empty()) throw ForecastError("cannot fit an empty feature cache");
    const auto& entries = cache.entries();
    std::vector<ProjectedTime> taus;
    taus.reserve(entries.size());
    FeatureMatrix features(static_cast<Eigen::Index>(entries.size()), cache.feature_dim());
    Eigen::Index row = 0;
    for (const auto& e : entries) {
        taus.push_back(project_time(e.t));
        features.row(row++) = e.h.transpose();
    }
    const DesignMatrix phi = build_design(taus, cfg.degree);
    RidgeSolution sol = solve_ridge(phi, features, cfg.lambda);
    return SpectrumState{std::move(sol.coeffs), cfg.degree, entries.back().t, entries.size(),
                         sol.jittered};
}

FeatureVector spectrum_forecast(const SpectrumState& state, double t_j) {
    if (state.coeffs.size() == 0) throw ForecastError("spectrum state has not been fitted");
    Eigen::VectorXd row(static_cast<Eigen::Index>(state.degree.row_length()));
    basis_row_into(state.degree, project_time(t_j), row.data());
    return state.coeffs.transpose() * row;
}

Forecaster::Forecaster(ForecasterConfig config, CachePolicy policy)
    : config_(std::move(config)), cache_(policy) {
    if (const auto* tc = std::get_if<TaylorConfig>(&config_); tc && tc->order < 0)
        throw InvalidArgument("Taylor order must be non-negative");
}

void Forecaster::observe(double t, FeatureVector h) {
    cache_.insert(t, std::move(h));
    if (const auto* sc = std::get_if<SpectrumConfig>(&config_)) {
        state_ = spectrum_fit(cache_, *sc);
        ++fits_;
    }
}

FeatureVector Forecaster::forecast(double t) const {
    return std::visit(
        [&](const auto& cfg) -> FeatureVector {
            using T = std::decay_t<decltype(cfg)>;
            if constexpr (std::is_same_v<T, NaiveConfig>) {
                return naive_forecast(cache_, t);
            } else if constexpr (std::is_same_v<T, TaylorConfig>) {
                // Order is capped by the available history (p <= k / eta).
                const int depth = static_cast<int>(cache_.size()) - 1;
                return taylor_forecast(cache_, t, TaylorConfig{std::min(cfg.order, depth)});
            } else {
                if (!state_) throw ForecastError("spectrum forecaster has no fitted state");
                return spectrum_forecast(*state_, t);
            }
        },
        config_);
}

}  // namespace chebcast
