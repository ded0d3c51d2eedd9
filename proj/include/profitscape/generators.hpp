#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "profitscape/rng.hpp"
#include "profitscape/series.hpp"

namespace profitscape {

// All generators step one trading day at a time and are pure functions of
// (params, seed): same inputs, bit-identical series.

struct GbmParams {
    double mu = 0.0004;     // drift per day
    double sigma = 0.025;   // volatility per sqrt(day)
    double s0 = 1000.0;
    std::size_t length = 2918;
};

struct FbmParams {
    double hurst = 0.7;     // in (0, 1]
    double mu = 0.0;
    double sigma = 0.025;
    double s0 = 1000.0;
    std::size_t length = 2918;
};

struct LevyParams {
    double alpha = 1.7;             // stability index in (0, 2]
    double scale = 0.0;             // per-day increment scale; 0 => calibrated
    double calibration_sigma = 0.025;  // IQR target used when scale == 0
    double s0 = 1000.0;
    std::size_t length = 2918;
};

struct MsmParams {
    double m0 = 1.4;          // multiplier value in [1, 2); states are {m0, 2-m0}
    int components = 8;       // K
    double gamma_high = 0.5;  // switching probability of the fastest component
    double growth = 2.0;      // frequency growth factor b
    double sigma_bar = 0.025; // base volatility
    double s0 = 1000.0;
    std::size_t length = 2918;
};

// Exact log-Euler scheme, dt = 1 day:
//   S_{t+1} = S_t * exp((mu - sigma^2/2) + sigma * Z_t).
PriceSeries gen_gbm(const GbmParams& p, Seed seed);

enum class FgnMethod {
    Auto,       // circulant embedding, dense fallback on negative spectrum
    Circulant,  // fail instead of falling back (mostly for tests)
    Cholesky,   // dense factorization, O(n^2) memory - small n only
};

// Stationary fractional Gaussian noise: zero mean, unit variance,
// autocovariance gamma(k) = ((k+1)^{2H} - 2k^{2H} + |k-1|^{2H}) / 2.
// Circulant embedding is exact and O(n log n); spectral values below -1e-10
// trigger the dense square-root fallback, values in [-1e-10, 0] are treated
// as zero.
ReturnSeries gen_fgn(double hurst, std::size_t n, Seed seed, FgnMethod method = FgnMethod::Auto);

// The fGn autocovariance above; exposed because tests and calibration both
// need it.
double fgn_autocovariance(double hurst, std::size_t k);

// Log-Euler pricing on fGn increments: S_{t+1} = S_t * exp(mu + sigma * g_t).
PriceSeries gen_fbm_price(const FbmParams& p, Seed seed);

// One draw from the standard symmetric alpha-stable law via the
// Chambers-Mallows-Stuck transform. At alpha = 2 this is Normal(0, 2).
double sample_stable(double alpha, Pcg64& rng);
double sample_stable(double alpha, Seed seed);

// Population interquartile range of the standard symmetric alpha-stable law,
// estimated once by a fixed-seed Monte Carlo order statistic (deterministic).
double stable_interquartile_range(double alpha);

// Resolves LevyParams::scale: explicit value if nonzero, otherwise the scale
// that makes the IQR of the daily increments equal calibration_sigma.
double levy_scale_for(const LevyParams& p);

// S_t = s0 * exp(X_t - X_1) with X increments scale * stable(alpha).
PriceSeries gen_levy_price(const LevyParams& p, Seed seed);

// Binomial Markov-switching multifractal: K volatility components in
// {m0, 2-m0}, component k redrawn each day with probability
//   gamma_k = 1 - (1 - gamma_high)^(growth^(k-K)),
// sigma(M_t) = sigma_bar * sqrt(prod_k M_{k,t}), R_t = sigma(M_t) * eps_t.
PriceSeries gen_msm_price(const MsmParams& p, Seed seed);

// Same simulation keeping the volatility path and the component states
// (bit k of mask t set when component k+1 sits in the m0 state).
struct MsmPath {
    PriceSeries prices;
    std::vector<double> volatility;        // sigma(M_t) per return step
    std::vector<std::uint32_t> state_mask; // one mask per return step
};
MsmPath gen_msm_path(const MsmParams& p, Seed seed);

}  // namespace profitscape
