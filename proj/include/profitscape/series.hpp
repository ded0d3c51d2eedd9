#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "profitscape/rng.hpp"

namespace profitscape {

// Daily closing prices, strictly positive, at least two of them.
// t is always the 1-based trading-day index; calendar gaps are ignored.
struct PriceSeries {
    std::vector<double> values;
    std::string label;

    std::size_t length() const { return values.size(); }
};

// Log-returns ln(S_{k+lag}/S_k) for k = 1..T-lag.
struct ReturnSeries {
    std::vector<double> values;
    std::size_t lag = 1;
};

// Daily drift and volatility, the GBM calibration pair.
struct DriftVol {
    double mu = 0.0;
    double sigma = 0.0;
};

// Throws ValidationError unless length >= 2 and every value > 0 and finite.
void validate_prices(const PriceSeries& s);

// ln(S_t / S_{t-lag}) with 1-based t; requires lag >= 1 and lag < t <= T.
double log_return(const PriceSeries& s, std::size_t t, std::size_t lag);

ReturnSeries to_returns(const PriceSeries& s, std::size_t lag);

// Rebuilds prices from lag-1 returns: S_1 = s0, S_{t+1} = S_t * exp(r_t).
PriceSeries from_returns(double s0, const ReturnSeries& r);

// Uniform random permutation (Fisher-Yates) of the return values; the
// output holds exactly the same doubles in a new order.
ReturnSeries shuffle_return_values(const ReturnSeries& r, Seed seed);

// from_returns(S_1, shuffle_return_values(to_returns(s, 1))): destroys all
// temporal correlations while keeping the return distribution intact; the
// last price is preserved because a permutation preserves the return sum.
PriceSeries shuffle_returns(const PriceSeries& s, Seed seed);

// sigma is the n-1 sample standard deviation of lag-1 log-returns and
// mu = mean + sigma^2/2, so gen_gbm fed with the result reproduces the
// sample's return mean and stddev.
DriftVol estimate_drift_vol(const PriceSeries& s);

// Same estimator applied to the pooled returns of several series. Used as
// the default generator calibration when a whole dataset is available.
DriftVol pooled_drift_vol(const std::vector<PriceSeries>& series);

// CSV schema: header "DATE,CLOSE", ISO-8601 dates in chronological order,
// strictly positive closes. UTF-8, LF or CRLF.
PriceSeries load_price_csv(const std::string& path);

// Loads a single CSV file or every *.csv in a directory (sorted by filename;
// the filename stem becomes the label).
std::vector<PriceSeries> load_prices(const std::string& path);

// Writes the schema above with synthetic dates starting 1999-01-04.
void save_price_csv(const PriceSeries& s, const std::string& path);

}  // namespace profitscape
