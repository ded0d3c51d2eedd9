#include "profitscape/backtest.hpp"

#include <cmath>
#include <string>

#include "profitscape/errors.hpp"

namespace profitscape {

void validate_strategy(const StrategyParams& sp, std::size_t series_length) {
    if (!(sp.p >= 0.0) || !(sp.q >= 0.0)) {
        throw ValidationError("strategy: thresholds p, q must be >= 0");
    }
    if (!(sp.buy_fraction >= 0.0 && sp.buy_fraction <= 1.0) ||
        !(sp.sell_fraction >= 0.0 && sp.sell_fraction <= 1.0)) {
        throw ValidationError("strategy: fractions must lie in [0, 1]");
    }
    if (!(sp.fee >= 0.0)) throw ValidationError("strategy: fee must be >= 0");
    if (sp.lag < 1) throw ValidationError("strategy: lag must be >= 1");
    if (sp.lag >= series_length) {
        throw ConfigError("strategy: lag " + std::to_string(sp.lag) +
                          " leaves no trading days on a series of length " +
                          std::to_string(series_length));
    }
}

namespace detail {

ProfitResult run_prepared(std::span<const double> prices, std::span<const double> lag_returns,
                          const StrategyParams& sp, double p, double q, double initial_cash) {
    Portfolio pf{initial_cash, 0.0, 0};
    const std::size_t lag = sp.lag;
    const bool swap = sp.kind == StrategyKind::S2;
    for (std::size_t k = 0; k < lag_returns.size(); ++k) {
        const double r = lag_returns[k];
        if (r > p) {
            const double price = prices[lag + k];
            if (swap) {
                pf.buy(price, sp.buy_fraction, sp.fee);
            } else {
                pf.sell(price, sp.sell_fraction, sp.fee);
            }
        } else if (r < -q) {
            const double price = prices[lag + k];
            if (swap) {
                pf.sell(price, sp.sell_fraction, sp.fee);
            } else {
                pf.buy(price, sp.buy_fraction, sp.fee);
            }
        }
    }
    return pf.result(prices.back(), initial_cash);
}

}  // namespace detail

ProfitResult run_strategy(const PriceSeries& s, const StrategyParams& sp, double initial_cash) {
    validate_prices(s);
    validate_strategy(sp, s.values.size());
    if (!(initial_cash > 0.0)) throw ValidationError("run_strategy: initial cash must be > 0");

    const std::size_t T = s.values.size();
    std::vector<double> lag_returns(T - sp.lag);
    for (std::size_t k = 0; k < lag_returns.size(); ++k) {
        lag_returns[k] = std::log(s.values[sp.lag + k] / s.values[k]);
    }
    return detail::run_prepared(s.values, lag_returns, sp, sp.p, sp.q, initial_cash);
}

double profit_at(const PriceSeries& s, const StrategyParams& sp_template, double p, double q,
                 double initial_cash) {
    StrategyParams sp = sp_template;
    sp.p = p;
    sp.q = q;
    return run_strategy(s, sp, initial_cash).pi;
}

}  // namespace profitscape
