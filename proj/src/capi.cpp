#include "profitscape.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "profitscape/backtest.hpp"
#include "profitscape/errors.hpp"
#include "profitscape/experiment.hpp"
#include "profitscape/generators.hpp"
#include "profitscape/landscape.hpp"
#include "profitscape/scaling.hpp"
#include "profitscape/series.hpp"

using namespace profitscape;

struct pl_series {
    PriceSeries data;
};

struct pl_series_list {
    std::vector<pl_series> items;
};

struct pl_grid {
    ProfitGrid data;
};

namespace {

thread_local std::string g_last_error = "no error";

pl_status fail(pl_status code, const char* message) {
    g_last_error = message;
    return code;
}

// Runs fn, translating the C++ error taxonomy into status codes.
template <typename Fn>
pl_status guarded(Fn&& fn) {
    try {
        fn();
        return PL_OK;
    } catch (const ConfigError& e) {
        return fail(PL_ERR_VALIDATION, e.what());
    } catch (const RangeError& e) {
        return fail(PL_ERR_RANGE, e.what());
    } catch (const InsufficientDataError& e) {
        return fail(PL_ERR_INSUFFICIENT_DATA, e.what());
    } catch (const ValidationError& e) {
        return fail(PL_ERR_VALIDATION, e.what());
    } catch (const ParseError& e) {
        return fail(PL_ERR_PARSE, e.what());
    } catch (const IoError& e) {
        return fail(PL_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(PL_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(PL_ERR_INTERNAL, e.what());
    }
}

bool bad_arg(const void* p) { return p == nullptr; }

StrategyParams to_strategy(const pl_strategy& sp) {
    StrategyParams out;
    out.kind = sp.kind == PL_STRATEGY_S2 ? StrategyKind::S2 : StrategyKind::S1;
    out.p = sp.p;
    out.q = sp.q;
    out.lag = sp.lag;
    out.buy_fraction = sp.buy_fraction;
    out.sell_fraction = sp.sell_fraction;
    out.fee = sp.fee;
    return out;
}

Neighborhood to_neighborhood(int nb) {
    if (nb != PL_VON_NEUMANN && nb != PL_MOORE) {
        throw ValidationError("neighborhood must be PL_VON_NEUMANN or PL_MOORE");
    }
    return nb == PL_VON_NEUMANN ? Neighborhood::VonNeumann : Neighborhood::Moore;
}

char* copy_string(const std::string& text) {
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* pl_version(void) { return "0.1.0"; }

const char* pl_last_error(void) { return g_last_error.c_str(); }

pl_status pl_series_create(const double* values, size_t count, const char* label,
                           pl_series** out) {
    if (bad_arg(values) || bad_arg(out)) return fail(PL_ERR_INVALID_ARG, "NULL argument");
    return guarded([&] {
        auto handle = std::make_unique<pl_series>();
        handle->data.values.assign(values, values + count);
        handle->data.label = label ? label : "";
        validate_prices(handle->data);
        *out = handle.release();
    });
}

pl_status pl_series_load_csv(const char* path, pl_series** out) {
    if (bad_arg(path) || bad_arg(out)) return fail(PL_ERR_INVALID_ARG, "NULL argument");
    return guarded([&] {
        auto handle = std::make_unique<pl_series>();
        handle->data = load_price_csv(path);
        *out = handle.release();
    });
}

pl_status pl_series_save_csv(const pl_series* s, const char* path) {
    if (bad_arg(s) || bad_arg(path)) return fail(PL_ERR_INVALID_ARG, "NULL argument");
    return guarded([&] { save_price_csv(s->data, path); });
}

size_t pl_series_length(const pl_series* s) { return s ? s->data.values.size() : 0; }

const double* pl_series_values(const pl_series* s) { return s ? s->data.values.data() : nullptr; }

const char* pl_series_label(const pl_series* s) { return s ? s->data.label.c_str() : nullptr; }

void pl_series_free(pl_series* s) { delete s; }

pl_status pl_series_load_dir(const char* dir, pl_series_list** out) {
    if (bad_arg(dir) || bad_arg(out)) return fail(PL_ERR_INVALID_ARG, "NULL argument");
    return guarded([&] {
        auto handle = std::make_unique<pl_series_list>();
        for (auto& series : load_prices(dir)) {
            handle->items.push_back(pl_series{std::move(series)});
        }
        *out = handle.release();
    });
}

size_t pl_series_list_size(const pl_series_list* list) { return list ? list->items.size() : 0; }

const pl_series* pl_series_list_get(const pl_series_list* list, size_t index) {
    if (!list || index >= list->items.size()) return nullptr;
    return &list->items[index];
}

void pl_series_list_free(pl_series_list* list) { delete list; }

pl_status pl_log_returns(const pl_series* s, size_t lag, double* out) {
    if (bad_arg(s) || bad_arg(out)) return fail(PL_ERR_INVALID_ARG, "NULL argument");
    return guarded([&] {
        const ReturnSeries r = to_returns(s->data, lag);
        std::memcpy(out, r.values.data(), r.values.size() * sizeof(double));
    });
}

pl_status pl_shuffle_returns(const pl_series* s, uint64_t master_seed, uint64_t stream,
                             pl_series** out) {
    if (bad_arg(s) || bad_arg(out)) return fail(PL_ERR_INVALID_ARG, "NULL argument");
    return guarded([&] {
        auto handle = std::make_unique<pl_series>();
        handle->data = shuffle_returns(s->data, Seed{master_seed, stream});
        *out = handle.release();
    });
}

pl_status pl_estimate_drift_vol(const pl_series* s, double* mu, double* sigma) {
    if (bad_arg(s) || bad_arg(mu) || bad_arg(sigma)) {
        return fail(PL_ERR_INVALID_ARG, "NULL argument");
    }
    return guarded([&] {
        const DriftVol dv = estimate_drift_vol(s->data);
        *mu = dv.mu;
        *sigma = dv.sigma;
    });
}

pl_status pl_gen_gbm(double mu, double sigma, double s0, size_t length, uint64_t master_seed,
                     uint64_t stream, pl_series** out) {
    if (bad_arg(out)) return fail(PL_ERR_INVALID_ARG, "NULL argument");
    return guarded([&] {
        auto handle = std::make_unique<pl_series>();
        handle->data = gen_gbm({mu, sigma, s0, length}, Seed{master_seed, stream});
        *out = handle.release();
    });
}

pl_status pl_gen_fbm(double hurst, double mu, double sigma, double s0, size_t length,
                     uint64_t master_seed, uint64_t stream, pl_series** out) {
    if (bad_arg(out)) return fail(PL_ERR_INVALID_ARG, "NULL argument");
    return guarded([&] {
        auto handle = std::make_unique<pl_series>();
        handle->data = gen_fbm_price({hurst, mu, sigma, s0, length}, Seed{master_seed, stream});
        *out = handle.release();
    });
}

pl_status pl_gen_levy(double alpha, double scale, double calibration_sigma, double s0,
                      size_t length, uint64_t master_seed, uint64_t stream, pl_series** out) {
    if (bad_arg(out)) return fail(PL_ERR_INVALID_ARG, "NULL argument");
    return guarded([&] {
        auto handle = std::make_unique<pl_series>();
        handle->data =
            gen_levy_price({alpha, scale, calibration_sigma, s0, length}, Seed{master_seed, stream});
        *out = handle.release();
    });
}

pl_status pl_gen_msm(double m0, int components, double gamma_high, double growth,
                     double sigma_bar, double s0, size_t length, uint64_t master_seed,
                     uint64_t stream, pl_series** out) {
    if (bad_arg(out)) return fail(PL_ERR_INVALID_ARG, "NULL argument");
    return guarded([&] {
        auto handle = std::make_unique<pl_series>();
        handle->data = gen_msm_price({m0, components, gamma_high, growth, sigma_bar, s0, length},
                                     Seed{master_seed, stream});
        *out = handle.release();
    });
}

pl_status pl_backtest(const pl_series* s, const pl_strategy* strategy, double initial_cash,
                      pl_backtest_result* out) {
    if (bad_arg(s) || bad_arg(strategy) || bad_arg(out)) {
        return fail(PL_ERR_INVALID_ARG, "NULL argument");
    }
    return guarded([&] {
        const ProfitResult r = run_strategy(s->data, to_strategy(*strategy), initial_cash);
        out->pi = r.pi;
        out->final_cash = r.final_cash;
        out->final_shares = r.final_shares;
        out->trade_count = r.trade_count;
    });
}

pl_status pl_landscape_build(const pl_series* s, const pl_strategy* strategy, int resolution,
                             double domain_scale, double initial_cash, pl_grid** out) {
    if (bad_arg(s) || bad_arg(strategy) || bad_arg(out)) {
        return fail(PL_ERR_INVALID_ARG, "NULL argument");
    }
    return guarded([&] {
        auto handle = std::make_unique<pl_grid>();
        handle->data = build_landscape(s->data, to_strategy(*strategy), resolution, domain_scale,
                                       initial_cash);
        *out = handle.release();
    });
}

int pl_grid_resolution(const pl_grid* g) { return g ? g->data.resolution : 0; }

const double* pl_grid_values(const pl_grid* g) { return g ? g->data.values.data() : nullptr; }

pl_status pl_grid_save_csv(const pl_grid* g, const char* path) {
    if (bad_arg(g) || bad_arg(path)) return fail(PL_ERR_INVALID_ARG, "NULL argument");
    return guarded([&] { save_grid_csv(g->data, path); });
}

pl_status pl_grid_count_maxima(const pl_grid* g, int neighborhood, long* out) {
    if (bad_arg(g) || bad_arg(out)) return fail(PL_ERR_INVALID_ARG, "NULL argument");
    return guarded([&] { *out = count_local_maxima(g->data, to_neighborhood(neighborhood)); });
}

void pl_grid_free(pl_grid* g) { delete g; }

pl_status pl_sweep(const pl_series* s, const pl_strategy* strategy, const int* resolutions,
                   size_t count, int neighborhood, double domain_scale, double initial_cash,
                   long* out_maxima) {
    if (bad_arg(s) || bad_arg(strategy) || bad_arg(resolutions) || bad_arg(out_maxima)) {
        return fail(PL_ERR_INVALID_ARG, "NULL argument");
    }
    return guarded([&] {
        const SweepResult sweep =
            sweep_resolutions(s->data, to_strategy(*strategy), {resolutions, count},
                              to_neighborhood(neighborhood), domain_scale, initial_cash);
        for (size_t k = 0; k < count; ++k) out_maxima[k] = sweep.maxima[k];
    });
}

pl_status pl_sweep_save_csv(const int* resolutions, const long* maxima, size_t count,
                            const char* path) {
    if (bad_arg(resolutions) || bad_arg(maxima) || bad_arg(path)) {
        return fail(PL_ERR_INVALID_ARG, "NULL argument");
    }
    return guarded([&] {
        SweepResult sweep;
        sweep.resolutions.assign(resolutions, resolutions + count);
        sweep.maxima.assign(maxima, maxima + count);
        save_sweep_csv(sweep, path);
    });
}

pl_status pl_fit_exponent(const double* n_values, const double* m_values, size_t count,
                          size_t window, pl_fit* out) {
    if (bad_arg(n_values) || bad_arg(m_values) || bad_arg(out)) {
        return fail(PL_ERR_INVALID_ARG, "NULL argument");
    }
    return guarded([&] {
        std::vector<std::pair<double, double>> points(count);
        for (size_t k = 0; k < count; ++k) points[k] = {n_values[k], m_values[k]};
        const ScalingFit fit = fit_exponent(points, window);
        out->a = fit.a;
        out->log_intercept = fit.log_intercept;
        out->stderr_a = fit.stderr_a;
        out->r_squared = fit.r_squared;
    });
}

pl_status pl_fit_sweep_csv(const char* csv_path, size_t window, const char* label,
                           char** json_out) {
    if (bad_arg(csv_path) || bad_arg(json_out)) return fail(PL_ERR_INVALID_ARG, "NULL argument");
    return guarded([&] {
        std::ifstream in(csv_path);
        if (!in) throw IoError(std::string("cannot open '") + csv_path + "' for reading");
        std::string line;
        std::size_t line_no = 0;
        std::vector<std::pair<double, double>> points;
        while (std::getline(in, line)) {
            ++line_no;
            while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
            if (line.empty() || (line_no == 1 && line.rfind("N,", 0) == 0)) continue;
            const std::size_t comma = line.find(',');
            if (comma == std::string::npos) {
                throw ParseError(std::string("'") + csv_path + "' line " +
                                 std::to_string(line_no) + ": expected 'N,M'");
            }
            try {
                points.emplace_back(std::stod(line.substr(0, comma)),
                                    std::stod(line.substr(comma + 1)));
            } catch (const std::exception&) {
                throw ParseError(std::string("'") + csv_path + "' line " +
                                 std::to_string(line_no) + ": bad number");
            }
        }
        const ScalingFit fit = fit_exponent(points, window);
        *json_out = copy_string(fit_report_json(label ? label : "sweep", fit, points));
    });
}

pl_status pl_run_experiment(const char* config_json, const char* output_dir_override,
                            const uint64_t* seed_override, int jobs, char** summary_out) {
    if (bad_arg(config_json) || bad_arg(summary_out)) {
        return fail(PL_ERR_INVALID_ARG, "NULL argument");
    }
    return guarded([&] {
        const auto reports =
            run_config(config_json, output_dir_override ? output_dir_override : "",
                       seed_override ? *seed_override : 0, seed_override != nullptr, jobs);
        *summary_out = copy_string(batch_summary_json(reports));
    });
}

void pl_string_free(char* s) { delete[] s; }

}  // extern "C"
