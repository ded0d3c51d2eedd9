#include "profitscape/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"
#include "profitscape/detail/parallel.hpp"
#include "profitscape/errors.hpp"

namespace profitscape {

using nlohmann::json;

std::string generator_model_name(const GeneratorConfig& g) {
    switch (g.index()) {
        case 0: return "gbm";
        case 1: return "fbm";
        case 2: return "levy";
        default: return "msm";
    }
}

namespace {

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("write failed for '" + path + "'");
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// --- config parsing ------------------------------------------------------

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end()) {
            throw ConfigError("config: unknown key '" + key + "' in " + where);
        }
    }
}

double get_number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
    return j[key].get<double>();
}

std::size_t get_size(const json& j, const char* key, std::size_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_unsigned() && !j[key].is_number_integer()) {
        throw ConfigError(std::string("config: '") + key + "' must be an integer");
    }
    const auto v = j[key].get<long long>();
    if (v < 0) throw ConfigError(std::string("config: '") + key + "' must be >= 0");
    return static_cast<std::size_t>(v);
}

bool get_bool(const json& j, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) throw ConfigError(std::string("config: '") + key + "' must be a boolean");
    return j[key].get<bool>();
}

GeneratorConfig parse_generator(const json& j) {
    if (!j.is_object() || !j.contains("model") || !j["model"].is_string()) {
        throw ConfigError("config: generator needs a string 'model'");
    }
    const std::string model = j["model"].get<std::string>();
    if (model == "gbm") {
        reject_unknown_keys(j, {"model", "mu", "sigma", "s0", "length"}, "generator(gbm)");
        GbmParams p;
        p.mu = get_number(j, "mu", p.mu);
        p.sigma = get_number(j, "sigma", p.sigma);
        p.s0 = get_number(j, "s0", p.s0);
        p.length = get_size(j, "length", p.length);
        return p;
    }
    if (model == "fbm") {
        reject_unknown_keys(j, {"model", "hurst", "mu", "sigma", "s0", "length"}, "generator(fbm)");
        FbmParams p;
        p.hurst = get_number(j, "hurst", p.hurst);
        p.mu = get_number(j, "mu", p.mu);
        p.sigma = get_number(j, "sigma", p.sigma);
        p.s0 = get_number(j, "s0", p.s0);
        p.length = get_size(j, "length", p.length);
        return p;
    }
    if (model == "levy") {
        reject_unknown_keys(j, {"model", "alpha", "scale", "calibration_sigma", "s0", "length"},
                            "generator(levy)");
        LevyParams p;
        p.alpha = get_number(j, "alpha", p.alpha);
        p.scale = get_number(j, "scale", 0.0);
        p.calibration_sigma = get_number(j, "calibration_sigma", p.calibration_sigma);
        p.s0 = get_number(j, "s0", p.s0);
        p.length = get_size(j, "length", p.length);
        return p;
    }
    if (model == "msm") {
        reject_unknown_keys(j, {"model", "m0", "components", "gamma_high", "growth", "sigma_bar",
                                "s0", "length"},
                            "generator(msm)");
        MsmParams p;
        p.m0 = get_number(j, "m0", p.m0);
        p.components = static_cast<int>(get_size(j, "components", static_cast<std::size_t>(p.components)));
        p.gamma_high = get_number(j, "gamma_high", p.gamma_high);
        p.growth = get_number(j, "growth", p.growth);
        p.sigma_bar = get_number(j, "sigma_bar", p.sigma_bar);
        p.s0 = get_number(j, "s0", p.s0);
        p.length = get_size(j, "length", p.length);
        return p;
    }
    throw ConfigError("config: unknown generator model '" + model + "'");
}

StrategyParams parse_strategy(const json& j) {
    if (!j.is_object()) throw ConfigError("config: 'strategy' must be an object");
    reject_unknown_keys(j, {"kind", "lag", "buy_fraction", "sell_fraction", "fee"}, "strategy");
    StrategyParams sp;
    if (j.contains("kind")) {
        const std::string kind = j["kind"].get<std::string>();
        if (kind == "S1") {
            sp.kind = StrategyKind::S1;
        } else if (kind == "S2") {
            sp.kind = StrategyKind::S2;
        } else {
            throw ConfigError("config: strategy kind must be 'S1' or 'S2'");
        }
    }
    sp.lag = get_size(j, "lag", sp.lag);
    sp.buy_fraction = get_number(j, "buy_fraction", sp.buy_fraction);
    sp.sell_fraction = get_number(j, "sell_fraction", sp.sell_fraction);
    sp.fee = get_number(j, "fee", sp.fee);
    return sp;
}

ExperimentConfig parse_experiment_json(const json& j, bool top_level) {
    if (!j.is_object()) throw ConfigError("config: experiment must be a JSON object");
    reject_unknown_keys(j,
                        {"schema", "label", "param", "source", "strategy", "resolutions",
                         "neighborhood", "domain_scale", "fit_window", "ensemble_average",
                         "shuffle", "save_grids", "initial_cash", "master_seed", "output_dir"},
                        "experiment");
    if (top_level) {
        if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"].get<int>() != 1) {
            throw ConfigError("config: missing or unsupported 'schema' (expected 1)");
        }
    }

    ExperimentConfig cfg;
    if (j.contains("label")) cfg.label = j["label"].get<std::string>();
    if (j.contains("param")) cfg.param = get_number(j, "param", 0.0);

    if (!j.contains("source") || !j["source"].is_object()) {
        throw ConfigError("config: missing 'source' object");
    }
    const json& src = j["source"];
    reject_unknown_keys(src, {"data_dir", "generator", "realizations"}, "source");
    if (src.contains("data_dir") == src.contains("generator")) {
        throw ConfigError("config: source needs exactly one of 'data_dir' or 'generator'");
    }
    if (src.contains("data_dir")) {
        cfg.data_dir = src["data_dir"].get<std::string>();
        if (src.contains("realizations")) {
            throw ConfigError("config: 'realizations' only applies to generator sources");
        }
    } else {
        cfg.generator = parse_generator(src["generator"]);
        cfg.realizations = get_size(src, "realizations", 1);
        if (cfg.realizations < 1) throw ConfigError("config: realizations must be >= 1");
    }

    if (j.contains("strategy")) cfg.strategy = parse_strategy(j["strategy"]);
    if (j.contains("resolutions")) {
        if (!j["resolutions"].is_array() || j["resolutions"].empty()) {
            throw ConfigError("config: 'resolutions' must be a non-empty array");
        }
        cfg.resolutions.clear();
        for (const auto& v : j["resolutions"]) cfg.resolutions.push_back(v.get<int>());
        for (std::size_t k = 0; k < cfg.resolutions.size(); ++k) {
            if (cfg.resolutions[k] < 2 ||
                (k > 0 && cfg.resolutions[k] <= cfg.resolutions[k - 1])) {
                throw ConfigError("config: resolutions must be >= 2 and strictly increasing");
            }
        }
    }
    if (j.contains("neighborhood")) {
        const std::string nb = j["neighborhood"].get<std::string>();
        if (nb == "von_neumann") {
            cfg.neighborhood = Neighborhood::VonNeumann;
        } else if (nb == "moore") {
            cfg.neighborhood = Neighborhood::Moore;
        } else {
            throw ConfigError("config: neighborhood must be 'von_neumann' or 'moore'");
        }
    }
    cfg.domain_scale = get_number(j, "domain_scale", cfg.domain_scale);
    if (!(cfg.domain_scale > 0.0)) throw ConfigError("config: domain_scale must be > 0");
    cfg.fit_window = get_size(j, "fit_window", cfg.fit_window);
    if (j.contains("ensemble_average")) {
        const std::string avg = j["ensemble_average"].get<std::string>();
        if (avg == "arithmetic") {
            cfg.average = AverageMode::Arithmetic;
        } else if (avg == "geometric") {
            cfg.average = AverageMode::Geometric;
        } else {
            throw ConfigError("config: ensemble_average must be 'arithmetic' or 'geometric'");
        }
    }
    cfg.shuffle = get_bool(j, "shuffle", cfg.shuffle);
    cfg.save_grids = get_bool(j, "save_grids", cfg.save_grids);
    cfg.initial_cash = get_number(j, "initial_cash", cfg.initial_cash);
    if (!(cfg.initial_cash > 0.0)) throw ConfigError("config: initial_cash must be > 0");
    if (j.contains("master_seed")) {
        if (!j["master_seed"].is_number_unsigned() && !j["master_seed"].is_number_integer()) {
            throw ConfigError("config: 'master_seed' must be an unsigned integer");
        }
        cfg.master_seed = j["master_seed"].get<std::uint64_t>();
    }
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    return cfg;
}

json generator_to_json(const GeneratorConfig& g) {
    json j;
    j["model"] = generator_model_name(g);
    if (const auto* p = std::get_if<GbmParams>(&g)) {
        j["mu"] = p->mu;
        j["sigma"] = p->sigma;
        j["s0"] = p->s0;
        j["length"] = p->length;
    } else if (const auto* p = std::get_if<FbmParams>(&g)) {
        j["hurst"] = p->hurst;
        j["mu"] = p->mu;
        j["sigma"] = p->sigma;
        j["s0"] = p->s0;
        j["length"] = p->length;
    } else if (const auto* p = std::get_if<LevyParams>(&g)) {
        j["alpha"] = p->alpha;
        j["scale"] = p->scale;
        j["calibration_sigma"] = p->calibration_sigma;
        j["scale_resolved"] = levy_scale_for(*p);
        j["s0"] = p->s0;
        j["length"] = p->length;
    } else if (const auto* p = std::get_if<MsmParams>(&g)) {
        j["m0"] = p->m0;
        j["components"] = p->components;
        j["gamma_high"] = p->gamma_high;
        j["growth"] = p->growth;
        j["sigma_bar"] = p->sigma_bar;
        j["s0"] = p->s0;
        j["length"] = p->length;
    }
    return j;
}

// The echo deliberately leaves out output_dir: reports are a pure function
// of (experiment, master_seed), not of where they land on disk.
json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["label"] = cfg.label;
    if (cfg.param) j["param"] = *cfg.param;
    json src;
    if (!cfg.data_dir.empty()) {
        src["data_dir"] = cfg.data_dir;
    } else {
        src["generator"] = generator_to_json(*cfg.generator);
        src["realizations"] = cfg.realizations;
    }
    j["source"] = src;
    json strat;
    strat["kind"] = cfg.strategy.kind == StrategyKind::S1 ? "S1" : "S2";
    strat["lag"] = cfg.strategy.lag;
    strat["buy_fraction"] = cfg.strategy.buy_fraction;
    strat["sell_fraction"] = cfg.strategy.sell_fraction;
    strat["fee"] = cfg.strategy.fee;
    j["strategy"] = strat;
    j["resolutions"] = cfg.resolutions;
    j["neighborhood"] = cfg.neighborhood == Neighborhood::VonNeumann ? "von_neumann" : "moore";
    j["domain_scale"] = cfg.domain_scale;
    j["fit_window"] = cfg.fit_window;
    j["ensemble_average"] = cfg.average == AverageMode::Arithmetic ? "arithmetic" : "geometric";
    j["shuffle"] = cfg.shuffle;
    j["save_grids"] = cfg.save_grids;
    j["initial_cash"] = cfg.initial_cash;
    j["master_seed"] = cfg.master_seed;
    return j;
}

PriceSeries generate_realization(const GeneratorConfig& g, Seed seed, const std::string& label) {
    PriceSeries s = std::visit(
        [&](const auto& params) {
            using T = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<T, GbmParams>) return gen_gbm(params, seed);
            else if constexpr (std::is_same_v<T, FbmParams>) return gen_fbm_price(params, seed);
            else if constexpr (std::is_same_v<T, LevyParams>) return gen_levy_price(params, seed);
            else return gen_msm_price(params, seed);
        },
        g);
    s.label = label;
    return s;
}

std::string realization_label(const GeneratorConfig& g, std::size_t i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%03zu", generator_model_name(g).c_str(), i);
    return buf;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_experiment_json(j, true);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, int jobs) {
    const auto t0 = std::chrono::steady_clock::now();

    // Resolve the Levy scale once so every realization shares it.
    ExperimentConfig resolved = cfg;
    if (resolved.generator) {
        if (auto* lp = std::get_if<LevyParams>(&*resolved.generator)) {
            lp->scale = levy_scale_for(*lp);
        }
    }

    // Stage 1: materialize the series, one stream per realization index.
    std::vector<PriceSeries> series;
    if (!resolved.data_dir.empty()) {
        series = load_prices(resolved.data_dir);
    } else {
        series.resize(resolved.realizations);
        const GeneratorConfig& gen = *resolved.generator;
        detail::parallel_for(resolved.realizations, jobs, [&](std::size_t i) {
            series[i] = generate_realization(gen, Seed{resolved.master_seed, i},
                                             realization_label(gen, i));
        });
    }
    if (resolved.shuffle) {
        detail::parallel_for(series.size(), jobs, [&](std::size_t i) {
            series[i] = shuffle_returns(series[i],
                                        Seed{resolved.master_seed, kShuffleStreamOffset + i});
        });
    }
    for (const auto& s : series) {
        if (s.values.size() < resolved.strategy.lag + 2) {
            throw ValidationError("series '" + s.label + "' has length " +
                                  std::to_string(s.values.size()) + " < lag+2 = " +
                                  std::to_string(resolved.strategy.lag + 2));
        }
    }

    // Stage 2: one task per (series, N); merged by index, so worker count
    // and completion order cannot change any output bit.
    ExperimentReport report;
    report.config = resolved;
    const std::size_t n_series = series.size();
    const std::size_t n_res = resolved.resolutions.size();
    std::vector<long> maxima(n_series * n_res, 0);
    if (resolved.save_grids) {
        report.grids.resize(n_series);
        for (auto& g : report.grids) g.resize(n_res);
    }
    detail::parallel_for(n_series * n_res, jobs, [&](std::size_t task) {
        const std::size_t si = task / n_res;
        const std::size_t ri = task % n_res;
        const int N = resolved.resolutions[ri];
        ProfitGrid grid = build_landscape(series[si], resolved.strategy, N, resolved.domain_scale,
                                          resolved.initial_cash);
        maxima[task] = count_local_maxima(grid, resolved.neighborhood);
        if (resolved.save_grids) report.grids[si][ri] = std::move(grid);
    });

    report.sweeps.resize(n_series);
    for (std::size_t si = 0; si < n_series; ++si) {
        SweepResult& sw = report.sweeps[si];
        sw.series_label = series[si].label;
        sw.resolutions = resolved.resolutions;
        sw.maxima.assign(maxima.begin() + si * n_res, maxima.begin() + (si + 1) * n_res);
    }

    report.ensemble = ensemble_mean_M(report.sweeps, resolved.average);

    std::vector<std::pair<double, double>> points;
    points.reserve(report.ensemble.size());
    for (const auto& [N, M] : report.ensemble) points.emplace_back(N, M);
    try {
        report.fit = fit_exponent(points, resolved.fit_window);
    } catch (const InsufficientDataError& e) {
        report.fit.reset();
        report.fit_error = e.what();
    }

    // Per-realization fits: the spread is the honest ensemble uncertainty.
    std::vector<double> a_values;
    for (const auto& sw : report.sweeps) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t k = 0; k < sw.resolutions.size(); ++k) {
            pts.emplace_back(sw.resolutions[k], static_cast<double>(sw.maxima[k]));
        }
        try {
            a_values.push_back(fit_exponent(pts, resolved.fit_window).a);
        } catch (const InsufficientDataError&) {
            // skipped realization
        }
    }
    report.realization_fits.count = a_values.size();
    if (!a_values.empty()) {
        double sum = 0.0;
        for (const double a : a_values) sum += a;
        report.realization_fits.a_mean = sum / a_values.size();
        if (a_values.size() > 1) {
            double ss = 0.0;
            for (const double a : a_values) {
                ss += (a - report.realization_fits.a_mean) * (a - report.realization_fits.a_mean);
            }
            report.realization_fits.a_std = std::sqrt(ss / (a_values.size() - 1));
        }
    }

    std::uint64_t cells = 0;
    for (const int N : resolved.resolutions) {
        cells += static_cast<std::uint64_t>(N) * static_cast<std::uint64_t>(N);
    }
    report.cells_evaluated = cells * n_series;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!resolved.output_dir.empty()) write_report_artifacts(report);
    return report;
}

std::string report_to_json(const ExperimentReport& report) {
    json j;
    j["schema"] = 1;
    j["config"] = config_to_json(report.config);
    json series = json::array();
    for (const auto& sw : report.sweeps) {
        json sweep = json::array();
        for (std::size_t k = 0; k < sw.resolutions.size(); ++k) {
            sweep.push_back({{"N", sw.resolutions[k]}, {"M", sw.maxima[k]}});
        }
        series.push_back({{"label", sw.series_label}, {"sweep", sweep}});
    }
    j["series"] = series;
    json ensemble = json::array();
    for (const auto& [N, M] : report.ensemble) ensemble.push_back({{"N", N}, {"M", M}});
    j["ensemble"] = ensemble;
    if (report.fit) {
        json fit;
        fit["a"] = report.fit->a;
        fit["log_intercept"] = report.fit->log_intercept;
        fit["stderr_a"] = report.fit->stderr_a;
        fit["r_squared"] = report.fit->r_squared;
        fit["fit_Ns"] = report.fit->fit_ns;
        j["fit"] = fit;
    } else {
        j["fit"] = nullptr;
        j["fit_error"] = report.fit_error;
    }
    if (report.realization_fits.count > 0) {
        j["realization_fits"] = {{"count", report.realization_fits.count},
                                 {"a_mean", report.realization_fits.a_mean},
                                 {"a_std", report.realization_fits.a_std}};
    } else {
        j["realization_fits"] = nullptr;
    }
    j["cells_evaluated"] = report.cells_evaluated;
    return j.dump(2) + "\n";
}

namespace {

void write_mean_csv(const ExperimentReport& report, const std::string& path) {
    std::string text = "N,M\n";
    for (const auto& [N, M] : report.ensemble) {
        text += std::to_string(N) + "," + fmt_double(M) + "\n";
    }
    write_text(path, text);
}

void write_sweeps_csv(const ExperimentReport& report, const std::string& path) {
    std::string text = "series,N,M\n";
    for (const auto& sw : report.sweeps) {
        for (std::size_t k = 0; k < sw.resolutions.size(); ++k) {
            text += sw.series_label + "," + std::to_string(sw.resolutions[k]) + "," +
                    std::to_string(sw.maxima[k]) + "\n";
        }
    }
    write_text(path, text);
}

}  // namespace

void write_report_artifacts(const ExperimentReport& report) {
    namespace fs = std::filesystem;
    const fs::path dir = report.config.output_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");

    write_text((dir / "report.json").string(), report_to_json(report));
    write_mean_csv(report, (dir / "sweep_mean.csv").string());
    write_sweeps_csv(report, (dir / "sweeps.csv").string());
    if (report.fit) {
        std::vector<std::pair<double, double>> points;
        for (const auto& [N, M] : report.ensemble) points.emplace_back(N, M);
        write_text((dir / "fit.json").string(),
                   fit_report_json(report.config.label, *report.fit, points));
    }
    if (report.config.save_grids) {
        const fs::path grid_dir = dir / "grids";
        fs::create_directories(grid_dir, ec);
        if (ec) throw IoError("cannot create '" + grid_dir.string() + "'");
        for (std::size_t si = 0; si < report.grids.size(); ++si) {
            for (std::size_t ri = 0; ri < report.grids[si].size(); ++ri) {
                char name[128];
                std::snprintf(name, sizeof name, "%s_N%d.csv",
                              report.sweeps[si].series_label.c_str(),
                              report.config.resolutions[ri]);
                save_grid_csv(report.grids[si][ri], (grid_dir / name).string());
            }
        }
    }
}

void emit_plot_data(const ExperimentReport& report, PlotKind kind, const std::string& out_path) {
    switch (kind) {
        case PlotKind::MvsN:
            write_mean_csv(report, out_path);
            return;
        case PlotKind::Landscape: {
            if (report.grids.empty()) {
                throw ValidationError("emit_plot_data: no grids in report; run with save_grids");
            }
            namespace fs = std::filesystem;
            std::error_code ec;
            fs::create_directories(out_path, ec);
            if (ec) throw IoError("cannot create '" + out_path + "'");
            for (std::size_t si = 0; si < report.grids.size(); ++si) {
                for (std::size_t ri = 0; ri < report.grids[si].size(); ++ri) {
                    char name[128];
                    std::snprintf(name, sizeof name, "%s_N%d.csv",
                                  report.sweeps[si].series_label.c_str(),
                                  report.config.resolutions[ri]);
                    save_grid_csv(report.grids[si][ri], (fs::path(out_path) / name).string());
                }
            }
            return;
        }
        case PlotKind::AVsParam:
            throw ValidationError("emit_plot_data: a-vs-param needs a batch; use emit_exponents_csv");
    }
}

void emit_exponents_csv(const std::vector<ExperimentReport>& reports, const std::string& path) {
    std::string text = "param,a,stderr\n";
    std::size_t rows = 0;
    for (const auto& r : reports) {
        if (!r.config.param || !r.fit) continue;
        text += fmt_double(*r.config.param) + "," + fmt_double(r.fit->a) + "," +
                fmt_double(r.fit->stderr_a) + "\n";
        ++rows;
    }
    if (rows == 0) {
        throw ValidationError("emit_exponents_csv: no fitted experiments carrying 'param'");
    }
    write_text(path, text);
}

namespace {

std::string comparison_json(const std::vector<ExperimentReport>& reports) {
    std::vector<LabeledFit> fits;
    for (const auto& r : reports) {
        if (!r.fit) continue;
        LabeledFit lf;
        lf.label = r.config.label;
        if (r.config.param) {
            lf.param = *r.config.param;
            lf.has_param = true;
        }
        lf.fit = *r.fit;
        fits.push_back(lf);
    }
    if (fits.empty()) return "";
    const ExponentComparison cmp = compare_exponents(fits);
    json j;
    json rows = json::array();
    for (const auto& row : cmp.rows) {
        rows.push_back({{"label", row.label}, {"a", row.a}, {"stderr_a", row.stderr_a}});
    }
    j["rows"] = rows;
    j["strictly_increasing"] = cmp.strictly_increasing;
    j["strictly_decreasing"] = cmp.strictly_decreasing;
    return j.dump(2) + "\n";
}

}  // namespace

std::vector<ExperimentReport> run_config(const std::string& json_text,
                                         const std::string& output_dir_override,
                                         std::uint64_t seed_override, bool has_seed_override,
                                         int jobs) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be a JSON object");

    std::vector<ExperimentConfig> configs;
    std::string batch_root;
    if (root.contains("experiments")) {
        reject_unknown_keys(root, {"schema", "experiments", "defaults", "output_dir"}, "batch");
        if (!root.contains("schema") || root["schema"].get<int>() != 1) {
            throw ConfigError("config: missing or unsupported 'schema' (expected 1)");
        }
        if (!root["experiments"].is_array() || root["experiments"].empty()) {
            throw ConfigError("config: 'experiments' must be a non-empty array");
        }
        const json defaults = root.value("defaults", json::object());
        batch_root = root.value("output_dir", std::string{});
        if (!output_dir_override.empty()) batch_root = output_dir_override;
        std::set<std::string> labels;
        for (const auto& entry : root["experiments"]) {
            json merged = defaults;
            merged.merge_patch(entry);
            ExperimentConfig cfg = parse_experiment_json(merged, false);
            if (!labels.insert(cfg.label).second) {
                throw ConfigError("config: duplicate experiment label '" + cfg.label + "'");
            }
            if (!batch_root.empty()) {
                cfg.output_dir = (std::filesystem::path(batch_root) / cfg.label).string();
            }
            configs.push_back(std::move(cfg));
        }
    } else {
        ExperimentConfig cfg = parse_experiment_json(root, true);
        if (!output_dir_override.empty()) cfg.output_dir = output_dir_override;
        configs.push_back(std::move(cfg));
    }

    std::vector<ExperimentReport> reports;
    reports.reserve(configs.size());
    for (auto& cfg : configs) {
        if (has_seed_override) cfg.master_seed = seed_override;
        reports.push_back(run_experiment(cfg, jobs));
        std::fprintf(stderr, "[profitscape] %s: %.1f s, %llu cells\n", cfg.label.c_str(),
                     reports.back().wall_seconds,
                     static_cast<unsigned long long>(reports.back().cells_evaluated));
    }

    if (!batch_root.empty() && reports.size() > 1) {
        namespace fs = std::filesystem;
        bool any_param = false;
        for (const auto& r : reports) {
            if (r.config.param && r.fit) any_param = true;
        }
        if (any_param) {
            emit_exponents_csv(reports, (fs::path(batch_root) / "exponents.csv").string());
        }
        const std::string cmp = comparison_json(reports);
        if (!cmp.empty()) write_text((fs::path(batch_root) / "comparison.json").string(), cmp);
    }
    return reports;
}

std::string batch_summary_json(const std::vector<ExperimentReport>& reports) {
    json j = json::array();
    for (const auto& r : reports) {
        json e;
        e["label"] = r.config.label;
        if (r.config.param) e["param"] = *r.config.param;
        e["series"] = r.sweeps.size();
        e["cells_evaluated"] = r.cells_evaluated;
        if (r.fit) {
            e["a"] = r.fit->a;
            e["stderr_a"] = r.fit->stderr_a;
            e["r_squared"] = r.fit->r_squared;
            e["realization_a_std"] = r.realization_fits.a_std;
        } else {
            e["fit_error"] = r.fit_error;
        }
        j.push_back(e);
    }
    return j.dump(2) + "\n";
}

}  // namespace profitscape
