#include "chebcast/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chebcast/error.hpp"
#include "chebcast/forecasters.hpp"

namespace chebcast {

namespace {

double factorial(int n) {
    double out = 1.0;
    for (int k = 2; k <= n; ++k) out *= k;
    return out;
}

}  // namespace

void TaylorBoundParams::validate() const {
    if (!(deriv_bound > 0.0)) throw InvalidArgument("Taylor bound needs L > 0");
    if (order < 0) throw InvalidArgument("Taylor bound needs P >= 0");
    if (!(step > 0.0)) throw InvalidArgument("Taylor bound needs a positive step");
}

double taylor_worst_case(const TaylorBoundParams& params) {
    params.validate();
    return params.deriv_bound / factorial(params.order + 1) * std::pow(params.step, params.order + 1);
}

TaylorAttainmentReport verify_taylor_attainment(int order, double step, double deriv_bound) {
    const TaylorBoundParams params{deriv_bound, order, step};
    const double bound = taylor_worst_case(params);

    const double anchor = 0.0;
    const double target = anchor + step;
    const double scale = deriv_bound / factorial(order + 1);
    // p-th derivative of scale * (tau - anchor)^(P+1).
    auto witness_derivative = [&](int p, double tau) {
        const int power = order + 1 - p;
        return scale * factorial(order + 1) / factorial(power) * std::pow(tau - anchor, power);
    };
    double predictor = 0.0;
    for (int p = 0; p <= order; ++p)
        predictor += witness_derivative(p, anchor) / factorial(p) * std::pow(step, p);
    const double attained = std::abs(witness_derivative(0, target) - predictor);

    const bool passed = std::abs(attained - bound) <= 1e-12 * bound;
    return {order, step, deriv_bound, attained, bound, passed};
}

AnalyticChannel AnalyticChannel::pole(double pole, double rho) {
    const EllipseBoundParams probe(rho, 1.0);
    if (!(pole > probe.semi_major()))
        throw InvalidArgument("Bernstein ellipse must exclude the pole");
    return {"1/(tau-" + std::to_string(pole) + ")", [pole](double tau) { return 1.0 / (tau - pole); },
            EllipseBoundParams(rho, 1.0 / (pole - probe.semi_major()))};
}

AnalyticChannel AnalyticChannel::from_channel(const ChannelFunction& channel,
                                              EllipseBoundParams ellipse) {
    return {channel.name(), [channel](double tau) { return channel(0.5 * (tau + 1.0)); }, ellipse};
}

AnalyticChannel AnalyticChannel::exp_time(double rho) {
    const EllipseBoundParams probe(rho, 1.0);
    // |exp((z + 1)/2)| = exp((Re z + 1)/2) and Re z <= semi_major on E_rho.
    return from_channel(ChannelFunction::exponential(1.0, 1.0),
                        EllipseBoundParams(rho, std::exp(0.5 * (probe.semi_major() + 1.0))));
}

AnalyticChannel AnalyticChannel::shifted_sine(double rho) {
    const EllipseBoundParams probe(rho, 1.0);
    // sin(2t) = sin(tau + 1) and |sin(x + iy)| <= cosh(y) with |y| <= semi_minor.
    return from_channel(ChannelFunction::sine(1.0, 1.0 / std::numbers::pi, 0.0, 2.0),
                        EllipseBoundParams(rho, 2.0 + std::cosh(probe.semi_minor())));
}

std::vector<double> chebyshev_interpolant(const std::function<double(double)>& f,
                                          BasisDegree degree) {
    const std::size_t n = degree.row_length();
    std::vector<double> coeffs(n, 0.0);
    std::vector<double> row(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double node = std::cos((2.0 * static_cast<double>(k) + 1.0) * std::numbers::pi /
                                     (2.0 * static_cast<double>(n)));
        const double value = f(node);
        basis_row_into(degree, ProjectedTime(node), row.data());
        for (std::size_t m = 0; m < n; ++m) coeffs[m] += value * row[m];
    }
    for (auto& c : coeffs) c *= 2.0 / static_cast<double>(n);
    coeffs[0] *= 0.5;
    return coeffs;
}

double sup_error(const std::function<double(double)>& f, std::span<const double> coeffs,
                 int points) {
    if (coeffs.empty()) throw InvalidArgument("empty coefficient vector");
    if (points < 2) throw InvalidArgument("sup-norm grid needs at least two points");
    const BasisDegree degree(static_cast<int>(coeffs.size()) - 1);
    std::vector<double> row(coeffs.size());
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double tau = -1.0 + 2.0 * i / (points - 1);
        basis_row_into(degree, ProjectedTime(tau), row.data());
        double p = 0.0;
        for (std::size_t m = 0; m < row.size(); ++m) p += coeffs[m] * row[m];
        worst = std::max(worst, std::abs(f(tau) - p));
    }
    return worst;
}

ChebDecayReport verify_cheb_decay(const AnalyticChannel& f, std::span<const int> degrees,
                                  double safety, double rate_fraction) {
    ChebDecayReport rep;
    rep.name = f.name;
    rep.required_rate = rate_fraction * std::log(f.ellipse.rho);
    rep.bound_ok = true;

    // Errors at or below this level are treated as exact capture.
    constexpr double kRoundOff = 1e-13;
    std::vector<double> xs, ys;
    for (int m : degrees) {
        const BasisDegree degree(m);
        const auto coeffs = chebyshev_interpolant(f.at_tau, degree);
        const double err = sup_error(f.at_tau, coeffs);
        const double limit = safety * truncation_bound(f.ellipse, degree);
        rep.degrees.push_back(m);
        rep.sup_error.push_back(err);
        rep.bound.push_back(limit);
        if (!(err <= limit)) rep.bound_ok = false;
        if (err > kRoundOff) {
            xs.push_back(m);
            ys.push_back(std::log(err));
        }
    }
    if (xs.size() >= 2) {
        const double n = static_cast<double>(xs.size());
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i] / n;
            my += ys[i] / n;
        }
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        rep.fitted_rate = -sxy / sxx;
        rep.rate_ok = *rep.fitted_rate >= rep.required_rate;
    } else {
        rep.rate_ok = true;
    }
    return rep;
}

double spectrum_bound(const SpectrumBoundParams& p) {
    if (!(p.eps_m >= 0.0) || !(p.sigma_min >= 0.0))
        throw InvalidArgument("spectrum bound needs eps_M >= 0 and sigma_min >= 0");
    const double width = static_cast<double>(p.degree.row_length());
    const double lambda = p.lambda.value();
    const double denom = p.sigma_min * p.sigma_min + lambda;
    const double k = static_cast<double>(p.k_points);
    const double coeff_norm =
        2.0 * p.ellipse.b_sup / std::sqrt(1.0 - std::pow(p.ellipse.rho, -2.0));

    if (denom == 0.0) {
        // sigma_min = 0 and lambda = 0: the fit is not identifiable.
        return p.eps_m == 0.0 ? 0.0 : INFINITY;
    }
    const double data_term = p.eps_m * (1.0 + width * k / denom);
    const double shrink_term = lambda == 0.0 ? 0.0 : lambda * std::sqrt(width) / denom * coeff_norm;
    return data_term + shrink_term;
}

std::vector<double> chebyshev_cache_times(std::size_t k_points) {
    if (k_points == 0) throw InvalidArgument("need at least one cache node");
    std::vector<double> ts(k_points);
    for (std::size_t k = 0; k < k_points; ++k) {
        const double tau = std::cos((2.0 * static_cast<double>(k) + 1.0) * std::numbers::pi /
                                    (2.0 * static_cast<double>(k_points)));
        ts[k] = 0.5 * (tau + 1.0);
    }
    std::sort(ts.begin(), ts.end());
    return ts;
}

std::vector<double> default_gaps(int count, double lo, double hi) {
    if (count < 2) throw InvalidArgument("need at least two gaps");
    std::vector<double> gaps(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) gaps[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    return gaps;
}

bool SpectrumBoundReport::passed() const {
    if (!(taylor_bound_growth >= taylor_growth_required)) return false;
    return std::all_of(channels.begin(), channels.end(),
                       [](const ChannelBoundReport& c) { return c.contained && c.ratio_ok; });
}

SpectrumBoundReport verify_spectrum_bound(std::span<const AnalyticChannel> channels,
                                          const SpectrumBoundSetup& setup) {
    if (channels.empty()) throw InvalidArgument("no channels to verify");
    if (setup.gaps.size() < 2) throw InvalidArgument("need at least two forecast gaps");

    // Joint cache: one feature vector per cached time, one column per channel.
    FeatureCache cache;
    for (double t : setup.cache_times) {
        FeatureVector h(static_cast<Eigen::Index>(channels.size()));
        for (std::size_t c = 0; c < channels.size(); ++c)
            h(static_cast<Eigen::Index>(c)) = channels[c].at_time(t);
        cache.insert(t, std::move(h));
    }
    const SpectrumState state = spectrum_fit(cache, setup.fit);

    std::vector<ProjectedTime> taus;
    for (double t : setup.cache_times) taus.push_back(project_time(t));
    const double sigma = min_singular(build_design(taus, setup.fit.degree));

    SpectrumBoundReport rep;
    rep.sigma_min = sigma;
    rep.k_points = setup.cache_times.size();
    rep.lambda = setup.fit.lambda.value();
    rep.degree = setup.fit.degree.value();

    const auto [gmin, gmax] = std::minmax_element(setup.gaps.begin(), setup.gaps.end());
    const double bound_hi = taylor_worst_case({1.0, setup.taylor_order, *gmax});
    const double bound_lo = taylor_worst_case({1.0, setup.taylor_order, *gmin});
    rep.taylor_bound_growth = bound_hi / bound_lo;
    rep.taylor_growth_required =
        setup.taylor_growth_fraction * std::pow(*gmax / *gmin, setup.taylor_order + 1);

    for (std::size_t c = 0; c < channels.size(); ++c) {
        const auto& ch = channels[c];
        ChannelBoundReport cr;
        cr.name = ch.name;
        cr.eps_m = truncation_bound(ch.ellipse, setup.fit.degree);
        cr.bound = spectrum_bound(
            {cr.eps_m, setup.fit.degree, rep.k_points, sigma, setup.fit.lambda, ch.ellipse});

        // Local cache for the Taylor comparison: t_k, t_k - s, ..., t_k - P s.
        FeatureCache local;
        for (int i = setup.taylor_order; i >= 0; --i) {
            const double t = setup.anchor - i * setup.taylor_spacing;
            local.insert(t, FeatureVector::Constant(1, ch.at_time(t)));
        }

        cr.contained = true;
        double lo = INFINITY, hi = 0.0;
        for (double gap : setup.gaps) {
            const double t = setup.anchor + gap;
            const double truth = ch.at_time(t);
            const double spec = spectrum_forecast(state, t)(static_cast<Eigen::Index>(c));
            const double tay = taylor_forecast(local, t, TaylorConfig{setup.taylor_order})(0);
            ChannelBoundRow row{gap, t, std::abs(truth - spec), std::abs(truth - tay),
                                taylor_worst_case({1.0, setup.taylor_order, gap})};
            if (!(row.spectrum_error <= cr.bound)) cr.contained = false;
            lo = std::min(lo, row.spectrum_error);
            hi = std::max(hi, row.spectrum_error);
            cr.rows.push_back(row);
        }
        cr.spectrum_ratio = hi / lo;
        const auto by_gap = [](const ChannelBoundRow& a, const ChannelBoundRow& b) {
            return a.gap < b.gap;
        };
        const auto first = std::min_element(cr.rows.begin(), cr.rows.end(), by_gap);
        const auto last = std::max_element(cr.rows.begin(), cr.rows.end(), by_gap);
        cr.taylor_error_ratio = last->taylor_error / first->taylor_error;
        cr.ratio_ok = !setup.max_gap_ratio || cr.spectrum_ratio <= *setup.max_gap_ratio;
        rep.channels.push_back(std::move(cr));
    }
    return rep;
}

}  // namespace chebcast
