#include "profitscape/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>

#include "profitscape/errors.hpp"

namespace profitscape {

namespace {

// Per-threshold event lists in CSR layout: days[offset[i]..offset[i+1]) are
// the (time-ascending) return indices that trigger at threshold level i.
struct EventTable {
    std::vector<std::size_t> offsets;  // size levels + 1
    std::vector<std::uint32_t> days;

    std::span<const std::uint32_t> row(std::size_t i) const {
        return {days.data() + offsets[i], offsets[i + 1] - offsets[i]};
    }
};

// cuts[k] = number of threshold levels strictly below the day-k excitation;
// level i fires on day k iff i < cuts[k]. Rows are nested downward, so build
// row 0 once and peel days off as the level rises.
EventTable build_event_table(const std::vector<std::uint32_t>& cuts, std::size_t levels) {
    EventTable table;
    table.offsets.assign(levels + 1, 0);

    std::vector<std::size_t> alive_at(levels + 1, 0);  // days alive at level i
    for (const auto c : cuts) {
        // day contributes to levels 0..c-1
        if (c > 0) {
            ++alive_at[0];
            --alive_at[c];  // differences; prefix-sum later
        }
    }
    std::size_t running = 0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < levels; ++i) {
        running += alive_at[i];
        alive_at[i] = running;
        total += running;
        table.offsets[i + 1] = total;
    }
    table.days.resize(total);

    // Doubly-linked list over the days alive at level 0, time order.
    std::vector<std::uint32_t> order;
    order.reserve(cuts.size());
    for (std::uint32_t k = 0; k < cuts.size(); ++k) {
        if (cuts[k] > 0) order.push_back(k);
    }
    const std::size_t n = order.size();
    std::vector<std::uint32_t> next(n + 1), prev(n + 1);
    // node ids 0..n-1 for days, n is the sentinel head/tail
    for (std::size_t idx = 0; idx <= n; ++idx) {
        next[idx] = static_cast<std::uint32_t>((idx + 1) % (n + 1));
        prev[idx] = static_cast<std::uint32_t>((idx + n) % (n + 1));
    }
    // death_bucket[c] lists node ids whose last level is c - 1.
    std::vector<std::vector<std::uint32_t>> death_bucket(levels + 1);
    for (std::size_t idx = 0; idx < n; ++idx) {
        const std::size_t c = std::min<std::size_t>(cuts[order[idx]], levels);
        death_bucket[c].push_back(static_cast<std::uint32_t>(idx));
    }

    for (std::size_t i = 0; i < levels; ++i) {
        std::size_t w = table.offsets[i];
        for (std::uint32_t node = next[n]; node != n; node = next[node]) {
            table.days[w++] = order[node];
        }
        for (const std::uint32_t node : death_bucket[i + 1]) {
            next[prev[node]] = next[node];
            prev[next[node]] = prev[node];
        }
    }
    return table;
}

}  // namespace

ProfitGrid build_landscape(const PriceSeries& s, const StrategyParams& sp_template, int resolution,
                           double domain_scale, double initial_cash) {
    validate_prices(s);
    validate_strategy(sp_template, s.values.size());
    if (resolution < 2) throw ValidationError("build_landscape: resolution must be >= 2");
    if (!(domain_scale > 0.0)) throw ValidationError("build_landscape: domain_scale must be > 0");
    if (!(initial_cash > 0.0)) throw ValidationError("build_landscape: initial cash must be > 0");

    const std::size_t N = static_cast<std::size_t>(resolution);
    const std::size_t lag = sp_template.lag;
    const std::size_t T = s.values.size();
    const double final_price = s.values.back();

    ProfitGrid grid;
    grid.resolution = resolution;
    grid.domain_scale = domain_scale;
    grid.values.assign(N * N, 0.0);

    std::vector<double> lag_returns(T - lag);
    for (std::size_t k = 0; k < lag_returns.size(); ++k) {
        lag_returns[k] = std::log(s.values[lag + k] / s.values[k]);
    }

    // Cell centers, identical expressions to ProfitGrid::p_center/q_center so
    // threshold comparisons below reproduce profit_at bit for bit.
    std::vector<double> centers(N);
    for (std::size_t i = 0; i < N; ++i) {
        centers[i] = domain_scale * (static_cast<double>(i) + 0.5) / resolution;
    }

    // A sell fires at row i iff centers[i] < r; a buy at column j iff
    // centers[j] < -r. Centers are strictly positive, so no day fires both.
    std::vector<std::uint32_t> sell_cuts(lag_returns.size()), buy_cuts(lag_returns.size());
    for (std::size_t k = 0; k < lag_returns.size(); ++k) {
        const double r = lag_returns[k];
        sell_cuts[k] = static_cast<std::uint32_t>(
            std::lower_bound(centers.begin(), centers.end(), r) - centers.begin());
        buy_cuts[k] = static_cast<std::uint32_t>(
            std::lower_bound(centers.begin(), centers.end(), -r) - centers.begin());
    }
    const EventTable sells = build_event_table(sell_cuts, N);
    const EventTable buys = build_event_table(buy_cuts, N);

    const bool swap = sp_template.kind == StrategyKind::S2;
    const double f_b = sp_template.buy_fraction;
    const double f_s = sp_template.sell_fraction;
    const double fee = sp_template.fee;
    const double* prices = s.values.data() + lag;

    for (std::size_t i = 0; i < N; ++i) {
        const auto sell_days = sells.row(i);
        for (std::size_t j = 0; j < N; ++j) {
            const auto buy_days = buys.row(j);
            detail::Portfolio pf{initial_cash, 0.0, 0};
            std::size_t a = 0, b = 0;
            while (a < sell_days.size() || b < buy_days.size()) {
                const bool take_sell =
                    b >= buy_days.size() || (a < sell_days.size() && sell_days[a] < buy_days[b]);
                if (take_sell) {
                    const double price = prices[sell_days[a++]];
                    if (swap) {
                        pf.buy(price, f_b, fee);
                    } else {
                        pf.sell(price, f_s, fee);
                    }
                } else {
                    const double price = prices[buy_days[b++]];
                    if (swap) {
                        pf.sell(price, f_s, fee);
                    } else {
                        pf.buy(price, f_b, fee);
                    }
                }
            }
            grid.values[i * N + j] = pf.result(final_price, initial_cash).pi;
        }
    }
    return grid;
}

long count_local_maxima(const ProfitGrid& g, Neighborhood nb) {
    const int N = g.resolution;
    if (N < 2) throw ValidationError("count_local_maxima: resolution must be >= 2");

    static constexpr int von_neumann[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    static constexpr int moore[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                        {0, 1},   {1, -1}, {1, 0},  {1, 1}};
    const auto* offsets = nb == Neighborhood::VonNeumann ? von_neumann : moore;
    const int n_offsets = nb == Neighborhood::VonNeumann ? 4 : 8;

    long count = 0;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const double v = g.at(i, j);
            bool is_max = true;
            for (int o = 0; o < n_offsets && is_max; ++o) {
                const int ni = i + offsets[o][0];
                const int nj = j + offsets[o][1];
                if (ni < 0 || ni >= N || nj < 0 || nj >= N) continue;
                if (!(v > g.at(ni, nj))) is_max = false;
            }
            if (is_max) ++count;
        }
    }
    return count;
}

namespace {

std::string describe(const StrategyParams& sp) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s d=%zu fb=%g fs=%g fee=%g",
                  sp.kind == StrategyKind::S1 ? "S1" : "S2", sp.lag, sp.buy_fraction,
                  sp.sell_fraction, sp.fee);
    return buf;
}

void check_ladder(std::span<const int> resolutions) {
    if (resolutions.empty()) throw ConfigError("sweep: resolution list is empty");
    for (std::size_t k = 0; k < resolutions.size(); ++k) {
        if (resolutions[k] < 2) throw ConfigError("sweep: resolutions must be >= 2");
        if (k > 0 && resolutions[k] <= resolutions[k - 1]) {
            throw ConfigError("sweep: resolutions must be strictly increasing");
        }
    }
}

}  // namespace

SweepResult sweep_resolutions(const PriceSeries& s, const StrategyParams& sp_template,
                              std::span<const int> resolutions, Neighborhood nb,
                              double domain_scale, double initial_cash) {
    check_ladder(resolutions);
    SweepResult sweep;
    sweep.series_label = s.label;
    sweep.strategy_descriptor = describe(sp_template);
    sweep.resolutions.assign(resolutions.begin(), resolutions.end());
    sweep.maxima.reserve(resolutions.size());
    for (const int N : resolutions) {
        const ProfitGrid grid = build_landscape(s, sp_template, N, domain_scale, initial_cash);
        sweep.maxima.push_back(count_local_maxima(grid, nb));
    }
    return sweep;
}

SweepResult sweep_grids(const std::function<ProfitGrid(int)>& make_grid,
                        std::span<const int> resolutions, Neighborhood nb) {
    check_ladder(resolutions);
    SweepResult sweep;
    sweep.resolutions.assign(resolutions.begin(), resolutions.end());
    sweep.maxima.reserve(resolutions.size());
    for (const int N : resolutions) {
        sweep.maxima.push_back(count_local_maxima(make_grid(N), nb));
    }
    return sweep;
}

std::vector<std::pair<int, double>> ensemble_mean_M(const std::vector<SweepResult>& sweeps,
                                                    AverageMode mode) {
    if (sweeps.empty()) throw ConfigError("ensemble_mean_M: no sweeps");
    const auto& ladder = sweeps.front().resolutions;
    for (const auto& sw : sweeps) {
        if (sw.resolutions != ladder) {
            throw ConfigError("ensemble_mean_M: sweeps use different resolution ladders");
        }
    }
    std::vector<std::pair<int, double>> out;
    out.reserve(ladder.size());
    for (std::size_t idx = 0; idx < ladder.size(); ++idx) {
        double acc = 0.0;
        bool any_zero = false;
        for (const auto& sw : sweeps) {  // fixed input order: bit-stable sums
            const double m = static_cast<double>(sw.maxima[idx]);
            if (mode == AverageMode::Arithmetic) {
                acc += m;
            } else if (m <= 0.0) {
                any_zero = true;
            } else {
                acc += std::log(m);
            }
        }
        double mean;
        if (mode == AverageMode::Arithmetic) {
            mean = acc / static_cast<double>(sweeps.size());
        } else {
            mean = any_zero ? 0.0 : std::exp(acc / static_cast<double>(sweeps.size()));
        }
        out.emplace_back(ladder[idx], mean);
    }
    return out;
}

void save_grid_csv(const ProfitGrid& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    const int N = g.resolution;
    out << N << "\n";
    char buf[40];
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", g.at(i, j));
            out << buf << (j + 1 < N ? "," : "\n");
        }
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

void save_sweep_csv(const SweepResult& sweep, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "N,M\n";
    for (std::size_t k = 0; k < sweep.resolutions.size(); ++k) {
        out << sweep.resolutions[k] << "," << sweep.maxima[k] << "\n";
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace profitscape
