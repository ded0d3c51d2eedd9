#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "profitscape/backtest.hpp"
#include "profitscape/series.hpp"

namespace profitscape {

// Profit evaluated at the centers of an N x N discretization of
// [0, domain_scale]^2 in the (p, q) plane:
//   p_i = domain_scale * (i + 1/2) / N, likewise for q_j (0-based i, j).
struct ProfitGrid {
    int resolution = 0;
    double domain_scale = 1.0;
    std::vector<double> values;  // row-major, values[i * N + j] = pi(p_i, q_j)

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * resolution + j]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * resolution + j]; }
    double p_center(int i) const { return domain_scale * (i + 0.5) / resolution; }
    double q_center(int j) const { return domain_scale * (j + 0.5) / resolution; }
};

enum class Neighborhood {
    VonNeumann,  // 4 orthogonal neighbors
    Moore,       // 8 surrounding cells
};

// M(N) for a ladder of resolutions.
struct SweepResult {
    std::vector<int> resolutions;
    std::vector<long> maxima;
    std::string series_label;
    std::string strategy_descriptor;
};

// Evaluates profit_at on every cell center. Cells are independent; the
// builder is observationally identical to calling profit_at per cell.
ProfitGrid build_landscape(const PriceSeries& s, const StrategyParams& sp_template,
                           int resolution, double domain_scale = 1.0,
                           double initial_cash = kDefaultInitialCash);

// Cells whose value strictly exceeds every in-grid neighbor; boundary cells
// compare only against the neighbors that exist. Plateau ties never count.
long count_local_maxima(const ProfitGrid& g, Neighborhood nb);

SweepResult sweep_resolutions(const PriceSeries& s, const StrategyParams& sp_template,
                              std::span<const int> resolutions, Neighborhood nb,
                              double domain_scale = 1.0,
                              double initial_cash = kDefaultInitialCash);

// Same sweep over grids from an arbitrary builder. This is the hook the
// statistical tests use to substitute i.i.d. random grids.
SweepResult sweep_grids(const std::function<ProfitGrid(int)>& make_grid,
                        std::span<const int> resolutions, Neighborhood nb);

enum class AverageMode { Arithmetic, Geometric };

// Mean of M at each N across sweeps, accumulated in input order so the
// result does not depend on how the sweeps were scheduled. All sweeps must
// share the same resolution ladder. The geometric mode is exp(mean log M)
// and collapses to zero at any N where some sweep has M = 0.
std::vector<std::pair<int, double>> ensemble_mean_M(const std::vector<SweepResult>& sweeps,
                                                    AverageMode mode = AverageMode::Arithmetic);

// CSV: first line N, then N rows of N values (row i = p index).
void save_grid_csv(const ProfitGrid& g, const std::string& path);

// Two-column CSV "N,M".
void save_sweep_csv(const SweepResult& sweep, const std::string& path);

}  // namespace profitscape
