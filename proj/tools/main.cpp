// profitscape command-line front end. Everything goes through the C API in
// profitscape.h; exit codes are 0 success, 1 validation/config error, 2 I/O.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "profitscape.h"

namespace {

int exit_code(pl_status status) {
    switch (status) {
        case PL_OK: return 0;
        case PL_ERR_IO: return 2;
        default: return 1;
    }
}

int fail(pl_status status) {
    std::fprintf(stderr, "error: %s\n", pl_last_error());
    return exit_code(status);
}

struct StrategyFlags {
    std::string kind = "S1";
    double p = 0.0, q = 0.0;
    std::size_t lag = 1;
    double buy_fraction = 0.5, sell_fraction = 0.5;
    double fee = 0.001;

    pl_strategy to_c() const {
        pl_strategy sp{};
        sp.kind = kind == "S2" ? PL_STRATEGY_S2 : PL_STRATEGY_S1;
        sp.p = p;
        sp.q = q;
        sp.lag = lag;
        sp.buy_fraction = buy_fraction;
        sp.sell_fraction = sell_fraction;
        sp.fee = fee;
        return sp;
    }
};

void add_strategy_flags(CLI::App* cmd, StrategyFlags& sf, bool with_thresholds) {
    cmd->add_option("--strategy", sf.kind, "S1 (sell on R>p) or S2 (swapped)")
        ->check(CLI::IsMember({"S1", "S2"}));
    if (with_thresholds) {
        cmd->add_option("--p", sf.p, "sell threshold (S1 convention)")->required();
        cmd->add_option("--q", sf.q, "buy threshold (S1 convention)")->required();
    }
    cmd->add_option("--lag", sf.lag, "return lag d in days")->check(CLI::PositiveNumber);
    cmd->add_option("--buy-fraction", sf.buy_fraction, "cash fraction per buy");
    cmd->add_option("--sell-fraction", sf.sell_fraction, "share fraction per sell");
    cmd->add_option("--fee", sf.fee, "commission rate per transaction");
}

int neighborhood_code(const std::string& name) {
    return name == "moore" ? PL_MOORE : PL_VON_NEUMANN;
}

struct SeriesHandle {
    pl_series* s = nullptr;
    ~SeriesHandle() { pl_series_free(s); }
};

struct GridHandle {
    pl_grid* g = nullptr;
    ~GridHandle() { pl_grid_free(g); }
};

struct ListHandle {
    pl_series_list* l = nullptr;
    ~ListHandle() { pl_series_list_free(l); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"profitscape - profit-landscape fractality toolkit"};
    app.require_subcommand(1);

    // ---- generate ----------------------------------------------------------
    auto* generate = app.add_subcommand("generate", "emit synthetic price CSVs");
    std::string gen_model = "gbm";
    std::size_t gen_realizations = 1, gen_length = 2918;
    std::uint64_t gen_seed = 0;
    std::string gen_out = ".";
    double gen_mu = 0.0004, gen_sigma = 0.025, gen_s0 = 1000.0;
    double gen_hurst = 0.7;
    double gen_alpha = 1.7, gen_scale = 0.0, gen_cal_sigma = 0.025;
    double gen_m0 = 1.4, gen_gamma_high = 0.5, gen_growth = 2.0, gen_sigma_bar = 0.025;
    int gen_components = 8;
    generate->add_option("--model", gen_model, "gbm, fbm, levy or msm")
        ->check(CLI::IsMember({"gbm", "fbm", "levy", "msm"}));
    generate->add_option("--realizations", gen_realizations, "number of series")
        ->check(CLI::PositiveNumber);
    generate->add_option("--length", gen_length, "trading days per series");
    generate->add_option("--seed", gen_seed, "master seed (stream = realization index)");
    generate->add_option("--out", gen_out, "output directory");
    generate->add_option("--mu", gen_mu, "drift per day (gbm, fbm)");
    generate->add_option("--sigma", gen_sigma, "volatility per sqrt(day) (gbm, fbm)");
    generate->add_option("--s0", gen_s0, "initial price");
    generate->add_option("--hurst", gen_hurst, "Hurst exponent (fbm)");
    generate->add_option("--alpha", gen_alpha, "stability index (levy)");
    generate->add_option("--scale", gen_scale, "increment scale (levy, 0 = calibrated)");
    generate->add_option("--calibration-sigma", gen_cal_sigma, "IQR target for levy auto scale");
    generate->add_option("--m0", gen_m0, "multiplier parameter (msm)");
    generate->add_option("--components", gen_components, "volatility components K (msm)");
    generate->add_option("--gamma-high", gen_gamma_high, "fastest switching probability (msm)");
    generate->add_option("--growth", gen_growth, "frequency growth factor b (msm)");
    generate->add_option("--sigma-bar", gen_sigma_bar, "base volatility (msm)");

    // ---- backtest ----------------------------------------------------------
    auto* backtest = app.add_subcommand("backtest", "single profit evaluation, prints pi");
    std::string bt_data;
    double bt_cash = 1e9;
    std::string bt_format = "text";
    StrategyFlags bt_strategy;
    backtest->add_option("--data", bt_data, "price CSV file")->required();
    add_strategy_flags(backtest, bt_strategy, true);
    backtest->add_option("--cash", bt_cash, "initial cash m(1)");
    backtest->add_option("--format", bt_format, "text, csv or json")
        ->check(CLI::IsMember({"text", "csv", "json"}));

    // ---- landscape ---------------------------------------------------------
    auto* landscape = app.add_subcommand("landscape", "one profit grid as CSV");
    std::string ls_data, ls_out = "landscape.csv";
    int ls_resolution = 64;
    double ls_domain = 1.0, ls_cash = 1e9;
    StrategyFlags ls_strategy;
    landscape->add_option("--data", ls_data, "price CSV file")->required();
    landscape->add_option("--resolution", ls_resolution, "cells per side N")->required();
    landscape->add_option("--domain-scale", ls_domain, "upper bound of the (p,q) square");
    landscape->add_option("--cash", ls_cash, "initial cash m(1)");
    landscape->add_option("--out", ls_out, "output CSV path");
    add_strategy_flags(landscape, ls_strategy, false);

    // ---- sweep -------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "M vs N for one series");
    std::string sw_data, sw_out = "sweep.csv", sw_neighborhood = "von_neumann";
    std::vector<int> sw_resolutions = {8, 16, 32, 64, 128, 256};
    double sw_domain = 1.0, sw_cash = 1e9;
    StrategyFlags sw_strategy;
    sweep->add_option("--data", sw_data, "price CSV file")->required();
    sweep->add_option("--resolutions", sw_resolutions, "resolution ladder")->delimiter(',');
    sweep->add_option("--neighborhood", sw_neighborhood, "von_neumann or moore")
        ->check(CLI::IsMember({"von_neumann", "moore"}));
    sweep->add_option("--domain-scale", sw_domain, "upper bound of the (p,q) square");
    sweep->add_option("--cash", sw_cash, "initial cash m(1)");
    sweep->add_option("--out", sw_out, "output CSV path");
    add_strategy_flags(sweep, sw_strategy, false);

    // ---- fit ---------------------------------------------------------------
    auto* fit = app.add_subcommand("fit", "power-law exponent from a sweep CSV");
    std::string fit_in, fit_label = "sweep", fit_format = "text";
    std::size_t fit_window = 0;
    fit->add_option("--in", fit_in, "two-column N,M CSV")->required();
    fit->add_option("--window", fit_window, "largest-N points to fit (0 = largest half)");
    fit->add_option("--label", fit_label, "label for the JSON report");
    fit->add_option("--format", fit_format, "text, csv or json")
        ->check(CLI::IsMember({"text", "csv", "json"}));

    // ---- run ---------------------------------------------------------------
    auto* run = app.add_subcommand("run", "full experiment(s) from a JSON config");
    std::string run_config, run_out;
    std::uint64_t run_seed = 0;
    bool run_has_seed = false;
    int run_jobs = 0;
    run->add_option("--config", run_config, "experiment config JSON")->required();
    run->add_option("--out", run_out, "override the config output directory");
    run->add_option("--seed", run_seed, "override master_seed")
        ->each([&](const std::string&) { run_has_seed = true; });
    run->add_option("--jobs", run_jobs, "worker threads (0 = all cores)");

    // ---- shuffle -----------------------------------------------------------
    auto* shuffle = app.add_subcommand("shuffle", "emit shuffled-return series");
    std::string sh_data, sh_out;
    std::uint64_t sh_seed = 0;
    shuffle->add_option("--data", sh_data, "price CSV file or directory")->required();
    shuffle->add_option("--out", sh_out, "output file (or directory for directory input)")
        ->required();
    shuffle->add_option("--seed", sh_seed, "master seed (stream = file index)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    pl_status st = PL_OK;

    if (*generate) {
        std::error_code ec;
        std::filesystem::create_directories(gen_out, ec);
        if (ec) {
            std::fprintf(stderr, "error: cannot create directory '%s'\n", gen_out.c_str());
            return 2;
        }
        for (std::size_t i = 0; i < gen_realizations; ++i) {
            SeriesHandle h;
            if (gen_model == "gbm") {
                st = pl_gen_gbm(gen_mu, gen_sigma, gen_s0, gen_length, gen_seed, i, &h.s);
            } else if (gen_model == "fbm") {
                st = pl_gen_fbm(gen_hurst, gen_mu, gen_sigma, gen_s0, gen_length, gen_seed, i,
                                &h.s);
            } else if (gen_model == "levy") {
                st = pl_gen_levy(gen_alpha, gen_scale, gen_cal_sigma, gen_s0, gen_length, gen_seed,
                                 i, &h.s);
            } else {
                st = pl_gen_msm(gen_m0, gen_components, gen_gamma_high, gen_growth, gen_sigma_bar,
                                gen_s0, gen_length, gen_seed, i, &h.s);
            }
            if (st != PL_OK) return fail(st);
            char name[64];
            std::snprintf(name, sizeof name, "%s_%03zu.csv", gen_model.c_str(), i);
            const std::string path = (std::filesystem::path(gen_out) / name).string();
            if ((st = pl_series_save_csv(h.s, path.c_str())) != PL_OK) return fail(st);
            std::printf("%s\n", path.c_str());
        }
        return 0;
    }

    if (*backtest) {
        SeriesHandle h;
        if ((st = pl_series_load_csv(bt_data.c_str(), &h.s)) != PL_OK) return fail(st);
        const pl_strategy sp = bt_strategy.to_c();
        pl_backtest_result r{};
        if ((st = pl_backtest(h.s, &sp, bt_cash, &r)) != PL_OK) return fail(st);
        if (bt_format == "json") {
            std::printf("{\"pi\": %.17g, \"final_cash\": %.17g, \"final_shares\": %.17g, "
                        "\"trade_count\": %ld}\n",
                        r.pi, r.final_cash, r.final_shares, r.trade_count);
        } else if (bt_format == "csv") {
            std::printf("pi,final_cash,final_shares,trade_count\n%.17g,%.17g,%.17g,%ld\n", r.pi,
                        r.final_cash, r.final_shares, r.trade_count);
        } else {
            std::printf("%.12g\n", r.pi);
        }
        return 0;
    }

    if (*landscape) {
        SeriesHandle h;
        if ((st = pl_series_load_csv(ls_data.c_str(), &h.s)) != PL_OK) return fail(st);
        const pl_strategy sp = ls_strategy.to_c();
        GridHandle g;
        if ((st = pl_landscape_build(h.s, &sp, ls_resolution, ls_domain, ls_cash, &g.g)) != PL_OK) {
            return fail(st);
        }
        if ((st = pl_grid_save_csv(g.g, ls_out.c_str())) != PL_OK) return fail(st);
        std::printf("%s\n", ls_out.c_str());
        return 0;
    }

    if (*sweep) {
        SeriesHandle h;
        if ((st = pl_series_load_csv(sw_data.c_str(), &h.s)) != PL_OK) return fail(st);
        const pl_strategy sp = sw_strategy.to_c();
        std::vector<long> maxima(sw_resolutions.size(), 0);
        st = pl_sweep(h.s, &sp, sw_resolutions.data(), sw_resolutions.size(),
                      neighborhood_code(sw_neighborhood), sw_domain, sw_cash, maxima.data());
        if (st != PL_OK) return fail(st);
        st = pl_sweep_save_csv(sw_resolutions.data(), maxima.data(), maxima.size(),
                               sw_out.c_str());
        if (st != PL_OK) return fail(st);
        std::printf("%s\n", sw_out.c_str());
        return 0;
    }

    if (*fit) {
        char* json = nullptr;
        if ((st = pl_fit_sweep_csv(fit_in.c_str(), fit_window, fit_label.c_str(), &json)) !=
            PL_OK) {
            return fail(st);
        }
        if (fit_format == "json") {
            std::printf("%s", json);
        } else {
            // pull a, stderr_a, r_squared back out with a tiny fit call-free scan
            std::string text(json);
            auto grab = [&text](const char* key) {
                const std::string needle = std::string("\"") + key + "\": ";
                const std::size_t pos = text.find(needle);
                return pos == std::string::npos ? 0.0 : std::stod(text.substr(pos + needle.size()));
            };
            if (fit_format == "csv") {
                std::printf("a,stderr_a,r_squared\n%.17g,%.17g,%.17g\n", grab("a"),
                            grab("stderr_a"), grab("r_squared"));
            } else {
                std::printf("a = %.6f +/- %.6f (R^2 = %.6f)\n", grab("a"), grab("stderr_a"),
                            grab("r_squared"));
            }
        }
        pl_string_free(json);
        return 0;
    }

    if (*run) {
        std::ifstream in(run_config);
        if (!in) {
            std::fprintf(stderr, "error: cannot open config '%s'\n", run_config.c_str());
            return 2;
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        const std::string config_text = buffer.str();
        char* summary = nullptr;
        const std::uint64_t seed = run_seed;
        st = pl_run_experiment(config_text.c_str(), run_out.empty() ? nullptr : run_out.c_str(),
                               run_has_seed ? &seed : nullptr, run_jobs, &summary);
        if (st != PL_OK) return fail(st);
        std::printf("%s", summary);
        pl_string_free(summary);
        return 0;
    }

    if (*shuffle) {
        namespace fs = std::filesystem;
        if (fs::is_directory(sh_data)) {
            ListHandle list;
            if ((st = pl_series_load_dir(sh_data.c_str(), &list.l)) != PL_OK) return fail(st);
            std::error_code ec;
            fs::create_directories(sh_out, ec);
            if (ec) {
                std::fprintf(stderr, "error: cannot create directory '%s'\n", sh_out.c_str());
                return 2;
            }
            for (std::size_t i = 0; i < pl_series_list_size(list.l); ++i) {
                const pl_series* src = pl_series_list_get(list.l, i);
                SeriesHandle shuffled;
                if ((st = pl_shuffle_returns(src, sh_seed, i, &shuffled.s)) != PL_OK) {
                    return fail(st);
                }
                const std::string path =
                    (fs::path(sh_out) / (std::string(pl_series_label(src)) + ".csv")).string();
                if ((st = pl_series_save_csv(shuffled.s, path.c_str())) != PL_OK) return fail(st);
                std::printf("%s\n", path.c_str());
            }
            return 0;
        }
        SeriesHandle h;
        if ((st = pl_series_load_csv(sh_data.c_str(), &h.s)) != PL_OK) return fail(st);
        SeriesHandle shuffled;
        if ((st = pl_shuffle_returns(h.s, sh_seed, 0, &shuffled.s)) != PL_OK) return fail(st);
        if ((st = pl_series_save_csv(shuffled.s, sh_out.c_str())) != PL_OK) return fail(st);
        std::printf("%s\n", sh_out.c_str());
        return 0;
    }

    return 0;
}
