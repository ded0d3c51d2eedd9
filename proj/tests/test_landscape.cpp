#include "profitscape/landscape.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "profitscape/detail/parallel.hpp"
#include "profitscape/errors.hpp"
#include "profitscape/generators.hpp"
#include "support/oracles.hpp"

using namespace profitscape;

namespace {

PriceSeries series(std::vector<double> values) { return {std::move(values), "test"}; }

StrategyParams s1_template(std::size_t lag = 1, double f_b = 1.0, double f_s = 1.0,
                           double fee = 0.0) {
    StrategyParams sp;
    sp.kind = StrategyKind::S1;
    sp.lag = lag;
    sp.buy_fraction = f_b;
    sp.sell_fraction = f_s;
    sp.fee = fee;
    return sp;
}

ProfitGrid grid_from(std::vector<std::vector<double>> rows) {
    ProfitGrid g;
    g.resolution = static_cast<int>(rows.size());
    for (const auto& row : rows) {
        for (const double v : row) g.values.push_back(v);
    }
    return g;
}

ProfitGrid random_grid(std::mt19937_64& rng, int N) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ProfitGrid g;
    g.resolution = N;
    g.values.resize(std::size_t(N) * N);
    for (auto& v : g.values) v = u(rng);
    return g;
}

}  // namespace

TEST_CASE("count_local_maxima small cases") {
    CHECK(count_local_maxima(grid_from({{1, 1}, {1, 1}}), Neighborhood::VonNeumann) == 0);
    CHECK(count_local_maxima(grid_from({{0, 0, 0}, {0, 1, 0}, {0, 0, 0}}),
                             Neighborhood::VonNeumann) == 1);
    CHECK(count_local_maxima(grid_from({{0, 0, 0}, {0, 1, 0}, {0, 0, 0}}), Neighborhood::Moore) ==
          1);
    // Diagonal ones: both are strict maxima under von Neumann, neither under
    // Moore (they tie as diagonal neighbors).
    CHECK(count_local_maxima(grid_from({{1, 0}, {0, 1}}), Neighborhood::VonNeumann) == 2);
    CHECK(count_local_maxima(grid_from({{1, 0}, {0, 1}}), Neighborhood::Moore) == 0);
}

TEST_CASE("count_local_maxima equals the exhaustive oracle on random grids") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 100; ++trial) {
        const ProfitGrid g = random_grid(rng, 20);
        CHECK(count_local_maxima(g, Neighborhood::VonNeumann) ==
              test_oracles::brute_count_maxima(g, false));
        CHECK(count_local_maxima(g, Neighborhood::Moore) ==
              test_oracles::brute_count_maxima(g, true));
    }
}

TEST_CASE("count_local_maxima invariances") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 10; ++trial) {
        const int N = 17;
        const ProfitGrid g = random_grid(rng, N);
        for (const Neighborhood nb : {Neighborhood::VonNeumann, Neighborhood::Moore}) {
            const long base = count_local_maxima(g, nb);

            ProfitGrid transposed = g;
            for (int i = 0; i < N; ++i) {
                for (int j = 0; j < N; ++j) transposed.values[std::size_t(j) * N + i] = g.at(i, j);
            }
            CHECK(count_local_maxima(transposed, nb) == base);

            ProfitGrid rotated = g;  // 90 degrees: (i, j) -> (j, N-1-i)
            for (int i = 0; i < N; ++i) {
                for (int j = 0; j < N; ++j) {
                    rotated.values[std::size_t(j) * N + (N - 1 - i)] = g.at(i, j);
                }
            }
            CHECK(count_local_maxima(rotated, nb) == base);

            ProfitGrid shifted = g;
            for (auto& v : shifted.values) v += 3.25;
            CHECK(count_local_maxima(shifted, nb) == base);

            ProfitGrid scaled = g;
            for (auto& v : scaled.values) v *= 17.0;
            CHECK(count_local_maxima(scaled, nb) == base);
        }
    }
}

TEST_CASE("count bounds, with the checkerboard saturating von Neumann") {
    for (const int N : {4, 5, 8}) {
        ProfitGrid board;
        board.resolution = N;
        board.values.resize(std::size_t(N) * N);
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) {
                // distinct highs so Moore diagonals cannot tie
                board.values[std::size_t(i) * N + j] =
                    (i + j) % 2 == 0 ? 10.0 + 0.01 * (i * N + j) : 0.0;
            }
        }
        const long vn = count_local_maxima(board, Neighborhood::VonNeumann);
        CHECK(vn == (N * N + 1) / 2);  // ceil(N^2/2): the bound is attained

        std::mt19937_64 rng(42 + N);
        for (int trial = 0; trial < 20; ++trial) {
            const ProfitGrid g = random_grid(rng, N);
            CHECK(count_local_maxima(g, Neighborhood::VonNeumann) <= (N * N + 1) / 2);
            const long moore_bound = ((N + 1) / 2) * ((N + 1) / 2);
            CHECK(count_local_maxima(g, Neighborhood::Moore) <= moore_bound);
        }
    }
}

TEST_CASE("build_landscape all-zero when no cell center can trigger") {
    // |R| = ln(100/80) ~ 0.223 < 0.25, the smallest N=2 center.
    const ProfitGrid g = build_landscape(series({100.0, 80.0, 100.0}), s1_template(), 2);
    CHECK(g.values == std::vector<double>{0.0, 0.0, 0.0, 0.0});
    CHECK(count_local_maxima(g, Neighborhood::VonNeumann) == 0);

    // Low-volatility series at N=8: max |R| below the first center 1/16.
    std::mt19937_64 rng(9);
    const auto prices = test_oracles::random_walk_prices(rng, 100, 0.01);
    const ProfitGrid g8 = build_landscape(series(prices), s1_template(), 8);
    bool all_zero = true;
    for (const double v : g8.values) {
        if (v != 0.0) all_zero = false;
    }
    CHECK(all_zero);
}

TEST_CASE("build_landscape cells equal profit_at exactly") {
    std::mt19937_64 rng(2025);
    for (int trial = 0; trial < 3; ++trial) {
        const auto prices = test_oracles::random_walk_prices(rng, 120, 0.3);
        const PriceSeries s = series(prices);
        for (const double domain_scale : {1.0, 2.0}) {
            StrategyParams sp = s1_template(1 + trial, 0.5, 0.5, 0.001);
            sp.kind = trial % 2 ? StrategyKind::S2 : StrategyKind::S1;
            const int N = 16;
            const ProfitGrid g = build_landscape(s, sp, N, domain_scale);
            CHECK(g.p_center(0) == domain_scale * 0.5 / N);
            for (int i = 0; i < N; ++i) {
                for (int j = 0; j < N; ++j) {
                    const double direct = profit_at(s, sp, g.p_center(i), g.q_center(j));
                    CHECK(g.at(i, j) == direct);  // bit-identical
                }
            }
        }
    }
}

TEST_CASE("grids for different lags differ") {
    std::mt19937_64 rng(5150);
    const auto prices = test_oracles::random_walk_prices(rng, 300, 0.3);
    const ProfitGrid g1 = build_landscape(series(prices), s1_template(1, 0.5, 0.5, 0.001), 16);
    const ProfitGrid g10 = build_landscape(series(prices), s1_template(10, 0.5, 0.5, 0.001), 16);
    CHECK(g1.values != g10.values);
}

TEST_CASE("sweep over an all-zero-profit series gives M = 0 everywhere") {
    const std::vector<int> ladder = {2, 4, 8};
    const SweepResult sweep =
        sweep_resolutions(series({100.0, 100.5, 100.2, 100.4}), s1_template(), ladder,
                          Neighborhood::VonNeumann);
    CHECK(sweep.maxima == std::vector<long>{0, 0, 0});
}

TEST_CASE("sweep validates the ladder") {
    const PriceSeries s = series({100.0, 120.0, 90.0, 110.0});
    CHECK_THROWS_AS(sweep_resolutions(s, s1_template(), std::vector<int>{}, Neighborhood::Moore),
                    ConfigError);
    CHECK_THROWS_AS(
        sweep_resolutions(s, s1_template(), std::vector<int>{8, 8}, Neighborhood::Moore),
        ConfigError);
    CHECK_THROWS_AS(
        sweep_resolutions(s, s1_template(), std::vector<int>{8, 4}, Neighborhood::Moore),
        ConfigError);
    CHECK_THROWS_AS(
        sweep_resolutions(s, s1_template(), std::vector<int>{1, 4}, Neighborhood::Moore),
        ConfigError);
}

TEST_CASE("iid random grids have maxima density 1/5 under von Neumann") {
    // Every cell of an i.i.d. continuous grid is the largest of its
    // 5-cell group with probability 1/5 (edges slightly above).
    std::mt19937_64 rng(31337);
    const std::vector<int> ladder = {64};
    double acc = 0.0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const SweepResult sweep = sweep_grids(
            [&rng](int N) { return random_grid(rng, N); }, ladder, Neighborhood::VonNeumann);
        acc += double(sweep.maxima[0]) / (64.0 * 64.0);
    }
    CHECK(std::fabs(acc / trials - 0.2) < 0.01);
}

TEST_CASE("ensemble_mean_M basics") {
    SweepResult a;
    a.resolutions = {8, 16};
    a.maxima = {4, 16};
    SweepResult b;
    b.resolutions = {8, 16};
    b.maxima = {6, 20};

    const auto single = ensemble_mean_M({a});
    CHECK(single == std::vector<std::pair<int, double>>{{8, 4.0}, {16, 16.0}});

    const auto both = ensemble_mean_M({a, b});
    CHECK(both == std::vector<std::pair<int, double>>{{8, 5.0}, {16, 18.0}});

    SweepResult c;
    c.resolutions = {8, 32};
    c.maxima = {1, 1};
    CHECK_THROWS_AS(ensemble_mean_M({a, c}), ConfigError);
    CHECK_THROWS_AS(ensemble_mean_M({}), ConfigError);
}

TEST_CASE("geometric ensemble average") {
    SweepResult a;
    a.resolutions = {8};
    a.maxima = {2};
    SweepResult b;
    b.resolutions = {8};
    b.maxima = {8};
    const auto geo = ensemble_mean_M({a, b}, AverageMode::Geometric);
    CHECK(geo[0].second == doctest::Approx(4.0).epsilon(1e-12));  // sqrt(2*8)

    SweepResult z;
    z.resolutions = {8};
    z.maxima = {0};
    CHECK(ensemble_mean_M({a, z}, AverageMode::Geometric)[0].second == 0.0);
}

TEST_CASE("GBM landscapes are near-iid: mean M close to N^2/5" * doctest::timeout(600)) {
    // With sigma large enough that returns cross thresholds over the whole
    // unit square, the landscape decorrelates cell to cell and the maxima
    // density approaches the exchangeable-value 1/5.
    const int N = 64;
    const int realizations = 100;
    StrategyParams sp = s1_template(1, 0.5, 0.5, 0.001);
    GbmParams gp;
    gp.mu = 0.125;  // sigma^2/2: centers the returns
    gp.sigma = 0.5;
    gp.s0 = 1000.0;
    gp.length = 2918;

    std::vector<long> counts(realizations, 0);
    profitscape::detail::parallel_for(realizations, 0, [&](std::size_t i) {
        const PriceSeries s = gen_gbm(gp, {606, std::uint64_t(i)});
        counts[i] = count_local_maxima(build_landscape(s, sp, N), Neighborhood::VonNeumann);
    });
    double mean_M = 0.0;
    for (const long c : counts) mean_M += double(c);
    mean_M /= realizations;
    CHECK(mean_M > 0.9 * N * N / 5.0);
    CHECK(mean_M < 1.1 * N * N / 5.0);
}

TEST_CASE("grid csv round numbers and shape") {
    ProfitGrid g = grid_from({{0.5, -0.25}, {1.0, 0.0}});
    g.domain_scale = 1.0;
    CHECK(g.p_center(0) == 0.25);
    CHECK(g.q_center(1) == 0.75);
    CHECK_THROWS_AS(build_landscape(series({100.0, 101.0}), s1_template(), 1),
                    ValidationError);
}
