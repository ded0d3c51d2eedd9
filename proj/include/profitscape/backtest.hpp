#pragma once

#include <cstddef>
#include <span>

#include "profitscape/series.hpp"

namespace profitscape {

// S1 sells when the lag return exceeds p and buys when it drops below -q;
// S2 swaps the two actions. Boundary equality triggers no trade.
enum class StrategyKind { S1, S2 };

struct StrategyParams {
    StrategyKind kind = StrategyKind::S1;
    double p = 0.0;               // sell threshold (S1), >= 0
    double q = 0.0;               // buy threshold (S1), >= 0
    std::size_t lag = 1;          // d, days between the compared prices
    double buy_fraction = 0.5;    // f_b, fraction of cash committed per buy
    double sell_fraction = 0.5;   // f_s, fraction of shares sold per sell
    double fee = 0.001;           // commission rate per transaction
};

struct ProfitResult {
    double pi = 0.0;          // (m_T + n_T S_T - m_1) / m_1
    double final_cash = 0.0;
    double final_shares = 0.0;
    long trade_count = 0;
};

inline constexpr double kDefaultInitialCash = 1e9;

// Throws ValidationError on bad fractions/thresholds, ConfigError when
// lag >= T.
void validate_strategy(const StrategyParams& sp, std::size_t series_length);

// Runs the strategy over t = lag+1 .. T (1-based), trading at the daily
// close, and marks to market at S_T. Cash and shares never go negative;
// a triggered trade moving zero cash/shares is a no-op and is not counted.
ProfitResult run_strategy(const PriceSeries& s, const StrategyParams& sp,
                          double initial_cash = kDefaultInitialCash);

// run_strategy with (p, q) substituted into the template; returns pi only.
double profit_at(const PriceSeries& s, const StrategyParams& sp_template,
                 double p, double q, double initial_cash = kDefaultInitialCash);

namespace detail {

// Trade arithmetic shared by the scanning engine and the event-driven
// landscape builder so both produce bit-identical results.
struct Portfolio {
    double cash = 0.0;
    double shares = 0.0;
    long trades = 0;

    void buy(double price, double buy_fraction, double fee) {
        const double dm = buy_fraction * cash;
        if (dm > 0.0) {
            cash -= dm;
            shares += dm / (price * (1.0 + fee));
            ++trades;
        }
    }

    void sell(double price, double sell_fraction, double fee) {
        const double dn = sell_fraction * shares;
        if (dn > 0.0) {
            shares -= dn;
            cash += dn * price * (1.0 - fee);
            ++trades;
        }
    }

    ProfitResult result(double final_price, double initial_cash) const {
        return {(cash + shares * final_price - initial_cash) / initial_cash,
                cash, shares, trades};
    }
};

// Core loop over precomputed lag returns; lag_returns[k] is the return used
// on day t = lag + k (0-based), traded at prices[lag + k].
ProfitResult run_prepared(std::span<const double> prices,
                          std::span<const double> lag_returns,
                          const StrategyParams& sp, double p, double q,
                          double initial_cash);

}  // namespace detail

}  // namespace profitscape
