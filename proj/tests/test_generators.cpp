#include "profitscape/generators.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "profitscape/detail/fft.hpp"
#include "profitscape/errors.hpp"
#include "profitscape/series.hpp"
#include "support/stats.hpp"

using namespace profitscape;
using test_stats::autocovariance_zero_mean;
using test_stats::hill_tail_index;

TEST_CASE("fft matches a naive DFT") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::complex<double>> x(32);
    for (auto& v : x) v = {u(rng), u(rng)};

    std::vector<std::complex<double>> naive(x.size());
    const double two_pi = 2.0 * 3.141592653589793238462643383279503;
    for (std::size_t k = 0; k < x.size(); ++k) {
        std::complex<double> s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double phi = -two_pi * double(j * k) / double(x.size());
            s += x[j] * std::complex<double>(std::cos(phi), std::sin(phi));
        }
        naive[k] = s;
    }

    std::vector<std::complex<double>> fast = x;
    detail::fft(fast);
    for (std::size_t k = 0; k < x.size(); ++k) {
        CHECK(std::abs(fast[k] - naive[k]) < 1e-10);
    }

    detail::fft(fast, true);  // inverse round-trips
    for (std::size_t k = 0; k < x.size(); ++k) {
        CHECK(std::abs(fast[k] - x[k]) < 1e-12);
    }

    std::vector<std::complex<double>> bad(3);
    CHECK_THROWS_AS(detail::fft(bad), Error);
}

TEST_CASE("gen_gbm degenerate and deterministic cases") {
    const PriceSeries flat = gen_gbm({0.0, 0.0, 100.0, 5}, {1, 0});
    CHECK(flat.values == std::vector<double>{100.0, 100.0, 100.0, 100.0, 100.0});

    const PriceSeries drift = gen_gbm({0.001, 0.0, 100.0, 3}, {1, 0});
    REQUIRE(drift.values.size() == 3);
    CHECK(drift.values[0] == 100.0);
    CHECK(drift.values[1] == doctest::Approx(100.0 * std::exp(0.001)).epsilon(1e-12));
    CHECK(drift.values[2] == doctest::Approx(100.0 * std::exp(0.002)).epsilon(1e-12));

    const PriceSeries a = gen_gbm({0.0004, 0.025, 1000.0, 500}, {7, 3});
    const PriceSeries b = gen_gbm({0.0004, 0.025, 1000.0, 500}, {7, 3});
    CHECK(a.values == b.values);  // bit-identical
    const PriceSeries c = gen_gbm({0.0004, 0.025, 1000.0, 500}, {7, 4});
    CHECK(a.values != c.values);

    CHECK_THROWS_AS(gen_gbm({0.0, -0.1, 100.0, 5}, {1, 0}), ValidationError);
    CHECK_THROWS_AS(gen_gbm({0.0, 0.1, -1.0, 5}, {1, 0}), ValidationError);
    CHECK_THROWS_AS(gen_gbm({0.0, 0.1, 100.0, 1}, {1, 0}), ValidationError);
}

TEST_CASE("gen_gbm return moments at T=1e6" * doctest::timeout(120)) {
    const PriceSeries s = gen_gbm({0.0, 0.02, 100.0, 1000001}, {2024, 0});
    const ReturnSeries r = to_returns(s, 1);
    const double sd = test_stats::sample_stddev(r.values);
    CHECK(std::fabs(sd - 0.02) < 3.0 * 0.02 / std::sqrt(2e6));
    const double m = test_stats::mean(r.values);
    CHECK(std::fabs(m - (0.0 - 0.5 * 0.02 * 0.02)) < 3.0 * 0.02 / std::sqrt(1e6));
}

TEST_CASE("fgn autocovariance formula") {
    CHECK(fgn_autocovariance(0.7, 0) == 1.0);
    CHECK(fgn_autocovariance(0.5, 1) == doctest::Approx(0.0));
    CHECK(fgn_autocovariance(0.7, 1) == doctest::Approx(0.3195079107728942).epsilon(1e-12));
    // gamma(5) = (6^1.4 - 2*5^1.4 + 4^1.4)/2
    const double g5 = 0.5 * (std::pow(6.0, 1.4) - 2.0 * std::pow(5.0, 1.4) + std::pow(4.0, 1.4));
    CHECK(fgn_autocovariance(0.7, 5) == doctest::Approx(g5).epsilon(1e-12));
    CHECK(g5 == doctest::Approx(0.1069500928427618).epsilon(1e-10));
}

TEST_CASE("fgn is white noise at H=1/2" * doctest::timeout(120)) {
    const ReturnSeries g = gen_fgn(0.5, 1000000, {123, 0});
    CHECK(std::fabs(autocovariance_zero_mean(g.values, 1)) < 0.01);
    CHECK(std::fabs(autocovariance_zero_mean(g.values, 0) - 1.0) < 0.01);
}

TEST_CASE("fgn long-memory autocovariances at H=0.7" * doctest::timeout(120)) {
    const ReturnSeries g = gen_fgn(0.7, 1000000, {123, 0});
    CHECK(std::fabs(autocovariance_zero_mean(g.values, 1) - 0.3195079107728942) < 0.03);
    CHECK(std::fabs(autocovariance_zero_mean(g.values, 5) - fgn_autocovariance(0.7, 5)) < 0.03);
}

TEST_CASE("fgn autocovariance within 4/sqrt(n) for lags 0..10" * doctest::timeout(300)) {
    const std::size_t n = 1000000;
    const double tol = 4.0 / std::sqrt(double(n));
    for (const double H : {0.6, 0.7, 0.8}) {
        const ReturnSeries g = gen_fgn(H, n, {123, 0});
        for (std::size_t k = 0; k <= 10; ++k) {
            const double est = autocovariance_zero_mean(g.values, k);
            INFO("H=", H, " lag=", k);
            CHECK(std::fabs(est - fgn_autocovariance(H, k)) < tol);
        }
    }
}

TEST_CASE("fgn H=1 collapses to a single shared increment") {
    const ReturnSeries g = gen_fgn(1.0, 128, {9, 0});
    for (const double v : g.values) {
        CHECK(v == doctest::Approx(g.values.front()).epsilon(1e-9));
    }
}

TEST_CASE("fgn Cholesky fallback reproduces the covariance") {
    // n=64 realizations are cheap; average the uncentered lag-1 estimate.
    double acc = 0.0;
    std::size_t cnt = 0;
    for (std::uint64_t r = 0; r < 3000; ++r) {
        const ReturnSeries g = gen_fgn(0.7, 64, {55, r}, FgnMethod::Cholesky);
        for (std::size_t t = 0; t + 1 < g.values.size(); ++t) {
            acc += g.values[t] * g.values[t + 1];
            ++cnt;
        }
    }
    CHECK(std::fabs(acc / double(cnt) - 0.3195079107728942) < 0.01);
}

TEST_CASE("fgn determinism and auto==circulant") {
    const ReturnSeries a = gen_fgn(0.7, 1000, {77, 2});
    const ReturnSeries b = gen_fgn(0.7, 1000, {77, 2});
    CHECK(a.values == b.values);
    const ReturnSeries c = gen_fgn(0.7, 1000, {77, 2}, FgnMethod::Circulant);
    CHECK(a.values == c.values);  // auto takes the circulant path for fGn
    CHECK_THROWS_AS(gen_fgn(0.0, 10, {1, 0}), ValidationError);
    CHECK_THROWS_AS(gen_fgn(1.5, 10, {1, 0}), ValidationError);
}

TEST_CASE("gen_fbm_price deterministic exponential at sigma=0") {
    const PriceSeries s = gen_fbm_price({0.7, 0.002, 0.0, 50.0, 6}, {3, 0});
    for (std::size_t t = 0; t < s.values.size(); ++t) {
        CHECK(s.values[t] == doctest::Approx(50.0 * std::exp(0.002 * double(t))).epsilon(1e-12));
    }
}

TEST_CASE("gen_fbm_price at H=1/2 matches gen_gbm moments" * doctest::timeout(120)) {
    // mu shifted by -sigma^2/2 makes the two schemes distributionally equal.
    const double sigma = 0.02, mu_gbm = 0.0008;
    const PriceSeries fbm =
        gen_fbm_price({0.5, mu_gbm - 0.5 * sigma * sigma, sigma, 100.0, 100001}, {31, 0});
    const ReturnSeries r = to_returns(fbm, 1);
    const double n = double(r.values.size());
    CHECK(std::fabs(test_stats::mean(r.values) - (mu_gbm - 0.5 * sigma * sigma)) <
          3.0 * sigma / std::sqrt(n));
    CHECK(std::fabs(test_stats::sample_stddev(r.values) - sigma) <
          3.0 * sigma / std::sqrt(2.0 * n));
}

TEST_CASE("gen_fbm_price inherits the fGn lag-1 autocorrelation" * doctest::timeout(120)) {
    const PriceSeries s = gen_fbm_price({0.7, 0.0, 0.02, 100.0, 100001}, {123, 1});
    const ReturnSeries r = to_returns(s, 1);
    CHECK(std::fabs(test_stats::autocorrelation(r.values, 1) - 0.3195079107728942) < 0.03);
}

TEST_CASE("sample_stable is Normal(0,2) at alpha=2" * doctest::timeout(120)) {
    Pcg64 rng({404, 0});
    std::vector<double> x(1000000);
    for (auto& v : x) v = sample_stable(2.0, rng);
    // Var = 2; Var(X^2) = 8 so SE(var_hat) = sqrt(8/n)
    CHECK(std::fabs(test_stats::sample_variance(x) - 2.0) < 3.0 * std::sqrt(8.0 / 1e6));
    CHECK(std::fabs(test_stats::excess_kurtosis(x)) < 0.05);
}

TEST_CASE("sample_stable is Cauchy at alpha=1" * doctest::timeout(120)) {
    Pcg64 rng({405, 0});
    std::vector<double> x(1000000);
    for (auto& v : x) v = sample_stable(1.0, rng);
    CHECK(std::fabs(test_stats::quantile(x, 0.5)) < 0.01);
    const double iqr = test_stats::quantile(x, 0.75) - test_stats::quantile(x, 0.25);
    CHECK(std::fabs(iqr - 2.0) < 0.02);  // standard Cauchy quartiles are +/-1
}

TEST_CASE("sample_stable tail index via Hill" * doctest::timeout(300)) {
    for (const double alpha : {1.2, 1.5, 1.7}) {
        Pcg64 rng({77, 0});
        std::vector<double> x(1000000);
        for (auto& v : x) v = sample_stable(alpha, rng);
        // Top 0.25%: small enough to dodge the second-order tail bias that
        // hits the Hill estimator for alpha near 2, large enough to be stable.
        INFO("alpha=", alpha);
        CHECK(std::fabs(hill_tail_index(x, 2500) - alpha) < 0.1);
        if (alpha == 1.5) {
            // at alpha=1.5 the top-1% variant also lands within 0.1
            CHECK(std::fabs(hill_tail_index(x, 10000) - alpha) < 0.1);
        }
    }
}

TEST_CASE("sample_stable one-shot seed form") {
    const double a = sample_stable(1.7, Seed{9, 9});
    const double b = sample_stable(1.7, Seed{9, 9});
    CHECK(a == b);
    CHECK_THROWS_AS(sample_stable(2.5, Seed{1, 1}), ValidationError);
    CHECK_THROWS_AS(sample_stable(0.0, Seed{1, 1}), ValidationError);
}

TEST_CASE("stable_interquartile_range known values") {
    // Cauchy IQR is exactly 2; alpha=2 is Normal(0,2) with IQR 1.90775.
    CHECK(stable_interquartile_range(1.0) == doctest::Approx(2.0).epsilon(0.01));
    CHECK(stable_interquartile_range(2.0) == doctest::Approx(1.9077451).epsilon(0.01));
    // calibrated scale makes the increment IQR equal calibration_sigma
    LevyParams p;
    p.alpha = 1.5;
    p.scale = 0.0;
    p.calibration_sigma = 0.025;
    CHECK(levy_scale_for(p) * stable_interquartile_range(1.5) ==
          doctest::Approx(0.025).epsilon(1e-12));
}

TEST_CASE("gen_levy_price degenerate, anchored and deterministic") {
    const PriceSeries flat = gen_levy_price({1.5, 0.0, 0.0, 100.0, 5}, {1, 0});
    CHECK(flat.values == std::vector<double>{100.0, 100.0, 100.0, 100.0, 100.0});

    const PriceSeries s = gen_levy_price({1.7, 0.01, 0.025, 1000.0, 300}, {8, 1});
    CHECK(s.values[0] == 1000.0);  // S_1 = s0 exactly
    for (const double v : s.values) CHECK(v > 0.0);

    const PriceSeries t = gen_levy_price({1.7, 0.01, 0.025, 1000.0, 300}, {8, 1});
    CHECK(s.values == t.values);
}

TEST_CASE("gen_levy_price alpha=2 with c=sigma/sqrt(2) has stdev sigma" * doctest::timeout(120)) {
    const double sigma = 0.02;
    const PriceSeries s =
        gen_levy_price({2.0, sigma / std::sqrt(2.0), 0.0, 100.0, 1000001}, {21, 0});
    const ReturnSeries r = to_returns(s, 1);
    CHECK(std::fabs(test_stats::sample_stddev(r.values) - sigma) < 3.0 * sigma / std::sqrt(2e6));
}

TEST_CASE("gen_levy_price heavy tails carry the stability index" * doctest::timeout(300)) {
    const PriceSeries s = gen_levy_price({1.7, 0.01, 0.025, 1000.0, 1000001}, {22, 0});
    const ReturnSeries r = to_returns(s, 1);
    CHECK(std::fabs(hill_tail_index(r.values, 2500) - 1.7) < 0.1);
}

TEST_CASE("gen_msm_price degenerates to iid normal at m0=1" * doctest::timeout(120)) {
    MsmParams p;
    p.m0 = 1.0;
    p.sigma_bar = 0.02;
    p.length = 1000001;
    const PriceSeries s = gen_msm_price(p, {5, 0});
    const ReturnSeries r = to_returns(s, 1);
    CHECK(std::fabs(test_stats::sample_stddev(r.values) - 0.02) < 3.0 * 0.02 / std::sqrt(2e6));
    // iid: squared returns decorrelate
    std::vector<double> sq(r.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = r.values[i] * r.values[i];
    CHECK(std::fabs(test_stats::autocorrelation(sq, 1)) < 0.01);
}

TEST_CASE("gen_msm_price long-run variance equals sigma_bar^2" * doctest::timeout(120)) {
    // E[M]=1 per component, so E[R^2] = sigma_bar^2. The volatility memory is
    // slow (correlation time ~ 1/gamma_1 ~ 200 days), so the standard error
    // comes from batch means.
    MsmParams p;
    p.m0 = 1.4;
    p.sigma_bar = 0.02;
    p.length = 1000001;
    const PriceSeries s = gen_msm_price(p, {1, 0});
    const ReturnSeries r = to_returns(s, 1);
    std::vector<double> sq(r.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = r.values[i] * r.values[i];
    const double var = test_stats::mean(sq);
    const double se = test_stats::batch_mean_stderr(sq, 100);
    CHECK(std::fabs(var - p.sigma_bar * p.sigma_bar) < 3.0 * se);
}

TEST_CASE("gen_msm_path multiplier marginals sit at 1/2" * doctest::timeout(120)) {
    MsmParams p;
    p.m0 = 1.4;
    p.sigma_bar = 0.02;
    p.length = 1000001;
    const MsmPath path = gen_msm_path(p, {1, 0});
    REQUIRE(path.state_mask.size() == p.length - 1);
    for (int k = 0; k < p.components; ++k) {
        std::size_t cnt = 0;
        for (const auto m : path.state_mask) cnt += (m >> k) & 1u;
        const double frac = double(cnt) / double(path.state_mask.size());
        INFO("component ", k + 1);
        CHECK(std::fabs(frac - 0.5) < 0.01);
    }
}

TEST_CASE("gen_msm_price clusters volatility" * doctest::timeout(120)) {
    MsmParams p;
    p.m0 = 1.4;
    p.sigma_bar = 0.02;
    p.length = 100001;
    const PriceSeries s = gen_msm_price(p, {1, 0});
    const ReturnSeries r = to_returns(s, 1);
    std::vector<double> sq(r.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = r.values[i] * r.values[i];
    CHECK(test_stats::autocorrelation(sq, 1) > 0.05);
}

TEST_CASE("gen_msm_price determinism and validation") {
    MsmParams p;
    p.length = 200;
    const PriceSeries a = gen_msm_price(p, {10, 4});
    const PriceSeries b = gen_msm_price(p, {10, 4});
    CHECK(a.values == b.values);
    const MsmPath path = gen_msm_path(p, {10, 4});
    CHECK(path.prices.values == a.values);  // trace does not change the draws

    MsmParams bad = p;
    bad.m0 = 2.0;
    CHECK_THROWS_AS(gen_msm_price(bad, {1, 0}), ValidationError);
    bad = p;
    bad.gamma_high = 1.0;
    CHECK_THROWS_AS(gen_msm_price(bad, {1, 0}), ValidationError);
    bad = p;
    bad.components = 0;
    CHECK_THROWS_AS(gen_msm_price(bad, {1, 0}), ValidationError);
    bad = p;
    bad.growth = 1.0;
    CHECK_THROWS_AS(gen_msm_price(bad, {1, 0}), ValidationError);
}

TEST_CASE("all generators emit strictly positive prices") {
    for (std::uint64_t stream = 0; stream < 4; ++stream) {
        for (const PriceSeries& s :
             {gen_gbm({0.0, 0.2, 10.0, 400}, {91, stream}),
              gen_fbm_price({0.8, 0.0, 0.2, 10.0, 400}, {91, stream}),
              gen_levy_price({1.2, 0.02, 0.0, 10.0, 400}, {91, stream}),
              gen_msm_price({1.6, 8, 0.5, 2.0, 0.05, 10.0, 400}, {91, stream})}) {
            REQUIRE(s.values.size() == 400);
            for (const double v : s.values) CHECK(v > 0.0);
        }
    }
}
