#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "chebcast/bounds.hpp"
#include "chebcast/error.hpp"

using namespace chebcast;

TEST_CASE("taylor worst case values") {
    CHECK(taylor_worst_case({1.0, 0, 0.5}) == 0.5);
    CHECK(taylor_worst_case({2.0, 1, 0.3}) == doctest::Approx(0.09).epsilon(1e-14));
    CHECK(taylor_worst_case({6.0, 2, 0.1}) == doctest::Approx(0.001).epsilon(1e-14));
    CHECK_THROWS_AS((void)taylor_worst_case({0.0, 1, 0.1}), InvalidArgument);
    CHECK_THROWS_AS((void)taylor_worst_case({1.0, -1, 0.1}), InvalidArgument);
    CHECK_THROWS_AS((void)taylor_worst_case({1.0, 1, 0.0}), InvalidArgument);
}

TEST_CASE("taylor bound is homogeneous of degree P + 1") {
    for (int p = 0; p <= 6; ++p)
        for (double h : {0.01, 0.05, 0.125, 0.3}) {
            // Doubling is exact in binary floating point.
            CHECK(taylor_worst_case({1.7, p, 2 * h}) == std::ldexp(taylor_worst_case({1.7, p, h}), p + 1));
        }
}

TEST_CASE("witness attains the bound") {
    const auto a = verify_taylor_attainment(1, 0.2, 1.0);
    CHECK(a.attained == doctest::Approx(0.02).epsilon(1e-13));
    CHECK(a.passed);
    const auto b = verify_taylor_attainment(0, 1.0, 1.0);
    CHECK(b.attained == 1.0);
    CHECK(b.bound == 1.0);
    const auto c = verify_taylor_attainment(3, 0.5, 24.0);
    CHECK(c.attained == doctest::Approx(0.0625).epsilon(1e-13));
    CHECK(c.bound == doctest::Approx(0.0625).epsilon(1e-13));
    for (int p = 0; p <= 5; ++p) {
        const auto r = verify_taylor_attainment(p, 0.37, 2.5);
        CHECK(std::abs(r.attained - r.bound) <= 1e-12 * r.bound);
    }
}

TEST_CASE("interpolant captures polynomials exactly") {
    const auto cube = [](double x) { return x * x * x; };
    for (int m = 3; m <= 10; ++m) CHECK(sup_error(cube, chebyshev_interpolant(cube, BasisDegree(m))) <= 1e-12);
    const auto five = [](double) { return 5.0; };
    for (int m = 0; m <= 6; ++m) CHECK(sup_error(five, chebyshev_interpolant(five, BasisDegree(m))) <= 1e-12);
    const auto c = chebyshev_interpolant(cube, BasisDegree(3));
    // tau^3 = (3 T_1 + T_3) / 4
    CHECK(std::abs(c[0]) <= 1e-15);
    CHECK(c[1] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(std::abs(c[2]) <= 1e-15);
    CHECK(c[3] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("decay for a pole at 2") {
    // The ellipse through the pole has rho = 2 + sqrt(3). rho = 3.5 stays
    // inside it, with |f| <= 1 / (2 - (3.5 + 1/3.5) / 2) on E_3.5.
    const auto f = AnalyticChannel::pole(2.0, 3.5);
    CHECK(f.ellipse.b_sup == doctest::Approx(1.0 / (2.0 - (3.5 + 1.0 / 3.5) / 2.0)).epsilon(1e-14));
    std::vector<int> degrees(13);
    for (int m = 0; m <= 12; ++m) degrees[static_cast<std::size_t>(m)] = m;
    const auto r = verify_cheb_decay(f, degrees);
    CHECK(r.bound_ok);
    REQUIRE(r.fitted_rate);
    CHECK(*r.fitted_rate >= 0.9 * std::log(3.5));
    CHECK(*r.fitted_rate == doctest::Approx(std::log(2.0 + std::sqrt(3.0))).epsilon(0.05));
    CHECK_THROWS_AS((void)AnalyticChannel::pole(2.0, 4.0), InvalidArgument);
}

TEST_CASE("decay report without a rate for exact captures") {
    const AnalyticChannel five{"5", [](double) { return 5.0; }, EllipseBoundParams(2.0, 5.0)};
    const std::vector<int> degrees{0, 1, 2, 3};
    const auto r = verify_cheb_decay(five, degrees);
    CHECK_FALSE(r.fitted_rate);
    CHECK(r.passed());
    for (double e : r.sup_error) CHECK(e <= 1e-14);
}

TEST_CASE("spectrum bound formula") {
    // 0.01 (1 + 50 / 1.1) + 0.1 sqrt(5) / 1.1 * 2 / sqrt(0.75)
    const double want = 0.01 * (1.0 + 50.0 / 1.1) + 0.1 * std::sqrt(5.0) / 1.1 * 2.0 / std::sqrt(0.75);
    const double got = spectrum_bound({0.01, BasisDegree(4), 10, 1.0, RegStrength(0.1), EllipseBoundParams(2.0, 1.0)});
    CHECK(got == doctest::Approx(want).epsilon(1e-14));
    CHECK(got == doctest::Approx(0.9340).epsilon(5e-5));

    const EllipseBoundParams e(2.0, 1.0);
    CHECK(spectrum_bound({0.0, BasisDegree(4), 8, 0.7, RegStrength(0.0), e}) == 0.0);
    CHECK(spectrum_bound({0.02, BasisDegree(4), 8, 0.5, RegStrength(0.0), e}) ==
          doctest::Approx(0.02 * (1.0 + 5.0 * 8.0 / 0.25)).epsilon(1e-14));
}

TEST_CASE("spectrum bound monotonicity") {
    const EllipseBoundParams e(1.8, 2.0);
    for (double lambda : {0.0, 0.1, 3.0}) {
        double prev = INFINITY;
        for (double s = 0.1; s <= 3.0; s += 0.1) {
            const double b = spectrum_bound({0.05, BasisDegree(4), 8, s, RegStrength(lambda), e});
            CHECK(b <= prev);
            prev = b;
        }
    }
    const double one = spectrum_bound({0.03, BasisDegree(3), 6, 0.8, RegStrength(0.0), e});
    const double two = spectrum_bound({0.06, BasisDegree(3), 6, 0.8, RegStrength(0.0), e});
    CHECK(two == doctest::Approx(2.0 * one).epsilon(1e-14));
}

TEST_CASE("cache nodes and gaps") {
    const auto t = chebyshev_cache_times(8);
    REQUIRE(t.size() == 8);
    CHECK(std::is_sorted(t.begin(), t.end()));
    CHECK(t.front() > 0.0);
    CHECK(t.back() < 1.0);
    const auto g = default_gaps();
    CHECK(g.size() == 20);
    CHECK(g.front() == 0.05);
    CHECK(g.back() == doctest::Approx(0.6));
}

TEST_CASE("ellipse constants of the analytic channels") {
    const auto e = AnalyticChannel::exp_time(2.0);
    CHECK(e.at_time(0.3) == doctest::Approx(std::exp(0.3)).epsilon(1e-14));
    CHECK(e.ellipse.b_sup == doctest::Approx(std::exp(1.125)).epsilon(1e-14));
    const auto s = AnalyticChannel::shifted_sine(2.0);
    CHECK(s.at_time(0.3) == doctest::Approx(2.0 + std::sin(0.6)).epsilon(1e-14));
    CHECK(s.ellipse.b_sup == doctest::Approx(2.0 + std::cosh(0.75)).epsilon(1e-14));
    // Sample the ellipse boundary: the supplied B really bounds |f|.
    for (int k = 0; k < 720; ++k) {
        const double th = 2.0 * std::numbers::pi * k / 720.0;
        const std::complex<double> z(1.25 * std::cos(th), 0.75 * std::sin(th));
        CHECK(std::abs(std::exp((z + 1.0) / 2.0)) <= e.ellipse.b_sup * (1 + 1e-12));
        CHECK(std::abs(2.0 + std::sin(z + 1.0)) <= s.ellipse.b_sup * (1 + 1e-12));
    }
}

TEST_CASE("spectrum containment on analytic channels") {
    const std::vector<AnalyticChannel> channels{AnalyticChannel::exp_time(2.0), AnalyticChannel::shifted_sine(2.0)};
    for (double lambda : {0.0, 0.1, 10.0}) {
        SpectrumBoundSetup setup;
        setup.fit = {BasisDegree(4), RegStrength(lambda)};
        setup.gaps = default_gaps();
        const auto r = verify_spectrum_bound(channels, setup);
        CAPTURE(lambda);
        for (const auto& c : r.channels) {
            CHECK(c.contained);
            CHECK(c.rows.size() == 20);
        }
        CHECK(r.taylor_bound_growth >= 0.9 * 144.0);
    }
}

TEST_CASE("polynomial channel through the spectrum check") {
    const std::vector<AnalyticChannel> poly{AnalyticChannel::from_channel(
        ChannelFunction::polynomial({1.0, 0.5, -2.0, 0.25, 1.0}), EllipseBoundParams(2.0, 20.0))};
    SpectrumBoundSetup setup;
    setup.fit = {BasisDegree(4), RegStrength(0.0)};
    setup.gaps = default_gaps();
    const auto r = verify_spectrum_bound(poly, setup);
    for (const auto& row : r.channels.front().rows) CHECK(row.spectrum_error <= 1e-9);
}
