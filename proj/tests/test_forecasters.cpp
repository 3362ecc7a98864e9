#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chebcast/bounds.hpp"
#include "chebcast/error.hpp"
#include "chebcast/forecasters.hpp"
#include "oracles.hpp"

using namespace chebcast;

namespace {

FeatureVector vec(std::initializer_list<double> v) {
    FeatureVector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

double poly_eval(const std::vector<double>& c, double t) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
}

}  // namespace

TEST_CASE("cache insert and eviction") {
    auto c = cache_insert(FeatureCache{}, 0.0, vec({1, 2}));
    CHECK(c.size() == 1);
    CHECK(c.feature_dim() == 2);

    FeatureCache w(CachePolicy::sliding(2));
    w.insert(0.1, vec({1}));
    w.insert(0.2, vec({2}));
    w.insert(0.3, vec({3}));
    CHECK(w.size() == 2);
    CHECK(w.entries().front().t == 0.2);
    CHECK(w.newest().h(0) == 3.0);
    CHECK(naive_forecast(w, 0.5)(0) == 3.0);

    CHECK_THROWS_AS((void)w.insert(0.3, vec({4})), InvalidArgument);
    CHECK_THROWS_AS((void)w.insert(0.25, vec({4})), InvalidArgument);
    CHECK_THROWS_AS((void)w.insert(0.4, vec({4, 5})), InvalidArgument);
    CHECK_THROWS_AS((void)CachePolicy::sliding(0), InvalidArgument);
    CHECK_THROWS_AS((void)FeatureCache{}.newest(), ForecastError);
}

TEST_CASE("naive forecast copies the newest entry") {
    FeatureCache c;
    c.insert(0.1, vec({3}));
    c.insert(0.3, vec({5}));
    CHECK(naive_forecast(c, 0.5) == vec({5}));
    FeatureCache z;
    z.insert(0.0, vec({0, 0}));
    CHECK(naive_forecast(z, 0.9) == vec({0, 0}));
    CHECK_THROWS_AS((void)naive_forecast(FeatureCache{}, 0.5), ForecastError);
    CHECK_THROWS_AS((void)naive_forecast(c, 0.3), ForecastError);
}

TEST_CASE("Taylor order 0 is bitwise naive reuse") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> n;
    FeatureCache c;
    for (int k = 0; k < 6; ++k) {
        FeatureVector h(7);
        for (auto& x : h) x = n(gen) * 1e3;
        c.insert(0.05 * k + 0.013 * k * k, h);
        const FeatureVector a = taylor_forecast(c, 0.9, TaylorConfig{0});
        const FeatureVector b = naive_forecast(c, 0.9);
        CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * 7) == 0);
    }
}

TEST_CASE("Taylor order 1 extrapolates linear channels") {
    FeatureCache c;
    for (double t : {0.1, 0.2, 0.3}) c.insert(t, vec({2.0 + 3.0 * t}));
    CHECK(std::abs(taylor_forecast(c, 0.7, TaylorConfig{1})(0) - 4.1) <= 1e-12);

    FeatureCache d;
    d.insert(0.0, vec({1}));
    d.insert(0.2, vec({2}));
    // Slope 5 from the two points, extrapolated 0.4 ahead: 2 + 5 * 0.4.
    CHECK(taylor_forecast(d, 0.6, TaylorConfig{1})(0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("Taylor matches the backward-difference formula on uniform grids") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int order = 0; order <= 4; ++order) {
        const double spacing = 0.04;
        std::vector<double> values;
        FeatureCache c;
        for (int i = 0; i < 6; ++i) {
            const double t = 0.1 + spacing * i;
            values.push_back(u(gen));
            c.insert(t, vec({values.back()}));
        }
        for (int ahead = 1; ahead <= 5; ++ahead) {
            const double gap = spacing * ahead;
            const double want = oracle::backward_taylor(values, spacing, gap, order);
            const double got = taylor_forecast(c, c.newest().t + gap, TaylorConfig{order})(0);
            CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("Taylor needs enough history") {
    FeatureCache c;
    c.insert(0.1, vec({1}));
    CHECK_THROWS_AS((void)taylor_forecast(c, 0.3, TaylorConfig{1}), ForecastError);
    CHECK_THROWS_AS((void)taylor_forecast(c, 0.3, TaylorConfig{-1}), InvalidArgument);
    // The stateful forecaster caps the order at the available depth.
    Forecaster f(TaylorConfig{2});
    f.observe(0.1, vec({1}));
    CHECK(f.forecast(0.3) == vec({1}));
    f.observe(0.2, vec({2}));
    CHECK(f.forecast(0.3)(0) == doctest::Approx(3.0));
}

TEST_CASE("spectrum reproduces polynomial channels at lambda 0") {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> u(0.0, 1.0), coef(-2.0, 2.0);
    for (int m = 0; m <= 6; ++m) {
        std::vector<double> times(static_cast<std::size_t>(m + 1));
        for (auto& t : times) t = u(gen);
        std::sort(times.begin(), times.end());
        std::vector<std::vector<double>> polys(3, std::vector<double>(static_cast<std::size_t>(m + 1)));
        for (auto& p : polys)
            for (auto& x : p) x = coef(gen);
        FeatureCache c;
        for (double t : times) c.insert(t, vec({poly_eval(polys[0], t), poly_eval(polys[1], t), poly_eval(polys[2], t)}));
        const auto state = spectrum_fit(c, SpectrumConfig{BasisDegree(m), RegStrength(0.0)});
        for (int i = 0; i < 50; ++i) {
            const double t = u(gen);
            const auto h = spectrum_forecast(state, t);
            for (int f = 0; f < 3; ++f) CHECK(std::abs(h(f) - poly_eval(polys[static_cast<std::size_t>(f)], t)) <= 1e-9);
        }
        for (const auto& e : c.entries()) CHECK((spectrum_forecast(state, e.t) - e.h).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("single cached point is shrunk by the ridge") {
    FeatureCache c;
    c.insert(0.3, vec({2.0, -1.0}));
    const auto state = spectrum_fit(c, SpectrumConfig{BasisDegree(4), RegStrength(0.1)});
    const auto pred = spectrum_forecast(state, 0.3);
    CHECK(pred.norm() < c.newest().h.norm());
    // One-row ridge: phi^T (phi phi^T + lambda)^-1 h, so the prediction is
    // h * |phi|^2 / (|phi|^2 + lambda).
    const auto phi = basis_row(BasisDegree(4), project_time(0.3));
    double sq = 0.0;
    for (double x : phi) sq += x * x;
    const auto want = oracle::ridge({phi}, {{2.0, -1.0}}, 0.1);
    for (int f = 0; f < 2; ++f) {
        double p = 0.0;
        for (std::size_t m = 0; m < phi.size(); ++m) p += phi[m] * want[m][static_cast<std::size_t>(f)];
        CHECK(pred(f) == doctest::Approx(p).epsilon(1e-12));
        CHECK(pred(f) == doctest::Approx(c.newest().h(f) * sq / (sq + 0.1)).epsilon(1e-12));
    }
}

TEST_CASE("spectrum state errors") {
    CHECK_THROWS_AS((void)spectrum_fit(FeatureCache{}, SpectrumConfig{}), ForecastError);
    CHECK_THROWS_AS((void)spectrum_forecast(SpectrumState{}, 0.5), ForecastError);
    SpectrumState zero{Eigen::MatrixXd::Zero(5, 3), BasisDegree(4), 0.2, 3, false};
    CHECK(spectrum_forecast(zero, 0.7) == Eigen::VectorXd::Zero(3));
    const Forecaster f(SpectrumConfig{});
    CHECK_THROWS_AS((void)f.forecast(0.5), ForecastError);
}

TEST_CASE("spectrum forecast of sin(2 pi t) stays under the ridge bound") {
    // Six cached samples on [0, 0.5], forecast at 0.9.
    FeatureCache c;
    std::vector<ProjectedTime> taus;
    for (int i = 0; i < 6; ++i) {
        const double t = 0.1 * i;
        c.insert(t, vec({std::sin(2.0 * std::numbers::pi * t)}));
        taus.push_back(project_time(t));
    }
    const SpectrumConfig cfg{BasisDegree(4), RegStrength(0.1)};
    const auto state = spectrum_fit(c, cfg);
    const double err = std::abs(spectrum_forecast(state, 0.9)(0) - std::sin(2.0 * std::numbers::pi * 0.9));
    // sin(pi (z + 1)) on E_2 is bounded by cosh(pi * 0.75).
    const EllipseBoundParams ellipse(2.0, std::cosh(0.75 * std::numbers::pi));
    const double bound = spectrum_bound({truncation_bound(ellipse, cfg.degree), cfg.degree, 6,
                                         min_singular(build_design(taus, cfg.degree)), cfg.lambda, ellipse});
    CHECK(err <= bound);
}

TEST_CASE("forecaster refits once per observation") {
    Forecaster f(SpectrumConfig{BasisDegree(2), RegStrength(0.1)});
    for (int k = 0; k < 5; ++k) f.observe(0.1 * k, vec({1.0 * k}));
    CHECK(f.fit_count() == 5);
    REQUIRE(f.spectrum_state());
    CHECK(f.spectrum_state()->k_points == 5);
    CHECK(f.spectrum_state()->fitted_at == doctest::Approx(0.4));
    const auto a = f.forecast(0.7);
    const auto b = f.forecast(0.7);
    CHECK(a == b);
    Forecaster g(NaiveConfig{});
    g.observe(0.0, vec({1}));
    CHECK(g.fit_count() == 0);
}

TEST_CASE("long-horizon contrast between spectrum and Taylor") {
    // 2 + sin(2t) on a fixed Chebyshev-spaced cache, gaps 0.05 .. 0.6 from t_k = 0.4.
    const std::vector<AnalyticChannel> channel{AnalyticChannel::shifted_sine(2.0)};
    SpectrumBoundSetup setup;
    setup.gaps = default_gaps();
    const auto rep = verify_spectrum_bound(channel, setup);
    const auto& c = rep.channels.front();
    double lo = INFINITY, hi = 0.0;
    for (const auto& r : c.rows) {
        lo = std::min(lo, r.spectrum_error);
        hi = std::max(hi, r.spectrum_error);
    }
    CHECK(hi <= 2.0 * lo);
    CHECK(c.rows.back().taylor_error >= 10.0 * c.rows.front().taylor_error);
}
