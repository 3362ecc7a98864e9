#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <variant>

#include <Eigen/Dense>

#include "chebcast/chebyshev.hpp"
#include "chebcast/ridge.hpp"

namespace chebcast {

using FeatureVector = Eigen::VectorXd;

struct CacheEntry {
    double t;
    FeatureVector h;
};

/// Capacity policy: keep every entry (window == 0) or the newest `window`.
struct CachePolicy {
    std::size_t window = 0;

    static CachePolicy all() { return {}; }
    static CachePolicy sliding(std::size_t w);
    [[nodiscard]] bool is_windowed() const noexcept { return window != 0; }
};

/// Time-ordered (t_k, h_k) pairs recorded at actual denoiser passes.
class FeatureCache {
public:
    FeatureCache() = default;
    explicit FeatureCache(CachePolicy policy) : policy_(policy) {}

    /// Appends (t, h); t must exceed the newest cached time and h must match
    /// the feature width of earlier entries. Applies window eviction.
    void insert(double t, FeatureVector h);

    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] Eigen::Index feature_dim() const noexcept {
        return entries_.empty() ? 0 : entries_.front().h.size();
    }
    [[nodiscard]] const CacheEntry& newest() const;
    [[nodiscard]] const std::deque<CacheEntry>& entries() const noexcept { return entries_; }
    [[nodiscard]] CachePolicy policy() const noexcept { return policy_; }

private:
    CachePolicy policy_{};
    std::deque<CacheEntry> entries_;
};

/// Value-semantics insert: returns the updated cache.
[[nodiscard]] FeatureCache cache_insert(FeatureCache cache, double t, FeatureVector h);

struct NaiveConfig {};

struct TaylorConfig {
    int order = 1;
};

struct SpectrumConfig {
    BasisDegree degree{4};
    RegStrength lambda{};
};

struct SpectrumState {
    CoefficientMatrix coeffs;
    BasisDegree degree{0};
    double fitted_at = 0.0;
    std::size_t k_points = 0;
    bool jittered = false;
};

/// Copy of the newest cached feature.
[[nodiscard]] FeatureVector naive_forecast(const FeatureCache& cache, double t_j);

/// Order-P extrapolation anchored at the newest cached time t_k:
///   h(t_k) + sum_{p=1..P} h[t_k, ..., t_{k-p}] (t_j - t_k)^p
/// where h[...] are Newton divided differences over the newest P + 1 entries.
/// On a uniform grid this is the backward-difference Taylor formula
///   h_k + sum_p (nabla^p h_k / p!) ((t_j - t_k) / s)^p.
[[nodiscard]] FeatureVector taylor_forecast(const FeatureCache& cache, double t_j,
                                            const TaylorConfig& cfg);

/// Ridge fit of Chebyshev coefficients over every cached entry.
[[nodiscard]] SpectrumState spectrum_fit(const FeatureCache& cache, const SpectrumConfig& cfg);

/// phi(2 t_j - 1) C.
[[nodiscard]] FeatureVector spectrum_forecast(const SpectrumState& state, double t_j);

using ForecasterConfig = std::variant<NaiveConfig, TaylorConfig, SpectrumConfig>;

/// Cache plus whatever fitted state the configured rule needs.
///
/// observe() is the full-pass path (insert, then refit for spectrum);
/// forecast() is the skipped-pass path and never mutates.
class Forecaster {
public:
    explicit Forecaster(ForecasterConfig config, CachePolicy policy = CachePolicy::all());

    void observe(double t, FeatureVector h);
    [[nodiscard]] FeatureVector forecast(double t) const;

    [[nodiscard]] const FeatureCache& cache() const noexcept { return cache_; }
    [[nodiscard]] const ForecasterConfig& config() const noexcept { return config_; }
    [[nodiscard]] const std::optional<SpectrumState>& spectrum_state() const noexcept {
        return state_;
    }
    /// Number of ridge solves performed so far.
    [[nodiscard]] std::size_t fit_count() const noexcept { return fits_; }

private:
    ForecasterConfig config_;
    FeatureCache cache_;
    std::optional<SpectrumState> state_;
    std::size_t fits_ = 0;
};

}  // namespace chebcast
