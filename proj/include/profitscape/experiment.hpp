#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "profitscape/generators.hpp"
#include "profitscape/landscape.hpp"
#include "profitscape/scaling.hpp"

namespace profitscape {

using GeneratorConfig = std::variant<GbmParams, FbmParams, LevyParams, MsmParams>;

std::string generator_model_name(const GeneratorConfig& g);

// One experiment: source series -> (shuffle) -> resolution sweep per series
// -> ensemble average -> exponent fit, all deterministic in master_seed.
struct ExperimentConfig {
    std::string label = "experiment";
    std::optional<double> param;       // sweep parameter, e.g. alpha or m0

    // Source: a directory of price CSVs, or a generator with realizations.
    std::string data_dir;              // empty when generated
    std::optional<GeneratorConfig> generator;
    std::size_t realizations = 1;

    StrategyParams strategy;           // template; p and q come from the grid
    std::vector<int> resolutions = {8, 16, 32, 64, 128, 256};
    Neighborhood neighborhood = Neighborhood::VonNeumann;
    double domain_scale = 1.0;
    std::size_t fit_window = 0;        // 0 -> largest half of the ladder
    AverageMode average = AverageMode::Arithmetic;
    bool shuffle = false;
    bool save_grids = false;
    double initial_cash = kDefaultInitialCash;
    std::uint64_t master_seed = 0;
    std::string output_dir;            // empty -> no artifacts written
};

// Spread of per-realization exponent fits; the honest uncertainty of the
// ensemble exponent.
struct RealizationFitStats {
    std::size_t count = 0;
    double a_mean = 0.0;
    double a_std = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<SweepResult> sweeps;                 // one per series
    std::vector<std::pair<int, double>> ensemble;    // (N, mean M)
    std::optional<ScalingFit> fit;                   // empty when the fit failed
    std::string fit_error;                           // reason when empty
    RealizationFitStats realization_fits;
    std::vector<std::vector<ProfitGrid>> grids;      // kept only when save_grids
    std::uint64_t cells_evaluated = 0;
    double wall_seconds = 0.0;  // telemetry; never serialized into artifacts
};

// Parses the versioned JSON config schema (see README). Throws ConfigError.
ExperimentConfig parse_experiment_config(const std::string& json_text);

// Runs one experiment with `jobs` workers (0 -> hardware concurrency).
// Work is partitioned by (series, N) and merged by index, so the report is
// byte-identical for any worker count.
ExperimentReport run_experiment(const ExperimentConfig& cfg, int jobs = 0);

// Deterministic JSON rendering of a report (excludes wall-clock).
std::string report_to_json(const ExperimentReport& report);

// Writes report.json, sweep_mean.csv, sweeps.csv, fit.json and (optionally)
// grids/ under config.output_dir.
void write_report_artifacts(const ExperimentReport& report);

enum class PlotKind { Landscape, MvsN, AVsParam };

// Emits plot-ready files for one report (Landscape requires save_grids data;
// AVsParam is only meaningful for batches, see emit_exponents_csv).
void emit_plot_data(const ExperimentReport& report, PlotKind kind,
                    const std::string& out_path);

// (param, a, stderr) rows across a batch of reports carrying `param`.
void emit_exponents_csv(const std::vector<ExperimentReport>& reports,
                        const std::string& path);

// Entry point behind the CLI `run` subcommand: accepts either one experiment
// object or {"schema":1, "defaults":..., "experiments":[...]}. Returns the
// reports and writes all artifacts; for batches an exponents.csv and
// comparison.json land at the batch output root.
std::vector<ExperimentReport> run_config(const std::string& json_text,
                                         const std::string& output_dir_override,
                                         std::uint64_t seed_override, bool has_seed_override,
                                         int jobs);

// Aggregate JSON summary for a batch (the `run` subcommand prints this).
std::string batch_summary_json(const std::vector<ExperimentReport>& reports);

}  // namespace profitscape
