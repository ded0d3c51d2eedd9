#include "profitscape/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "profitscape/detail/fft.hpp"
#include "profitscape/errors.hpp"

namespace profitscape {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

void check_price_params(double s0, std::size_t length, const char* who) {
    require(s0 > 0.0 && std::isfinite(s0), std::string(who) + ": s0 must be > 0");
    require(length >= 2, std::string(who) + ": length must be >= 2");
}

PriceSeries prices_from_increments(double s0, const std::vector<double>& increments,
                                   const std::string& label, const char* who) {
    PriceSeries s;
    s.label = label;
    s.values.reserve(increments.size() + 1);
    s.values.push_back(s0);
    double price = s0;
    for (const double dx : increments) {
        price *= std::exp(dx);
        if (!std::isfinite(price) || price <= 0.0) {
            throw ValidationError(std::string(who) + ": price path left the representable range; "
                                  "reduce the increment scale");
        }
        s.values.push_back(price);
    }
    return s;
}

}  // namespace

PriceSeries gen_gbm(const GbmParams& p, Seed seed) {
    check_price_params(p.s0, p.length, "gen_gbm");
    require(p.sigma >= 0.0 && std::isfinite(p.mu), "gen_gbm: need sigma >= 0 and finite mu");
    Pcg64 rng(seed);
    const double drift = p.mu - 0.5 * p.sigma * p.sigma;
    std::vector<double> increments(p.length - 1);
    for (auto& dx : increments) dx = drift + p.sigma * rng.normal();
    return prices_from_increments(p.s0, increments, "gbm", "gen_gbm");
}

double fgn_autocovariance(double hurst, std::size_t k) {
    if (k == 0) return 1.0;
    const double twoH = 2.0 * hurst;
    const double kd = static_cast<double>(k);
    return 0.5 * (std::pow(kd + 1.0, twoH) - 2.0 * std::pow(kd, twoH) + std::pow(kd - 1.0, twoH));
}

namespace {

// Exact spectral (circulant-embedding) sampler. The first row of the
// embedding is gamma(0..m), gamma(m-1), ..., gamma(1) with m the padded
// half-size; its FFT gives the eigenvalues.
bool fgn_circulant(double hurst, std::size_t n, Pcg64& rng, std::vector<double>& out,
                   bool allow_negative_failure) {
    const std::size_t m = detail::next_pow2(std::max<std::size_t>(n, 2));
    const std::size_t M = 2 * m;

    std::vector<std::complex<double>> row(M);
    for (std::size_t j = 0; j <= m; ++j) row[j] = fgn_autocovariance(hurst, j);
    for (std::size_t j = m + 1; j < M; ++j) row[j] = row[M - j];
    detail::fft(row);

    std::vector<double> lambda(M);
    for (std::size_t k = 0; k < M; ++k) {
        const double v = row[k].real();
        if (v < -1e-10) {
            if (allow_negative_failure) return false;
            throw Error("gen_fgn: circulant embedding produced a negative eigenvalue");
        }
        lambda[k] = v < 0.0 ? 0.0 : v;
    }

    // Hybrid Gaussian spectrum with conjugate symmetry; 2m normals, fixed
    // draw order k = 0, 1, ..., m.
    std::vector<std::complex<double>> spec(M);
    spec[0] = std::sqrt(lambda[0]) * rng.normal();
    for (std::size_t k = 1; k < m; ++k) {
        const double amp = std::sqrt(0.5 * lambda[k]);
        const double re = amp * rng.normal();
        const double im = amp * rng.normal();
        spec[k] = {re, im};
        spec[M - k] = {re, -im};
    }
    spec[m] = std::sqrt(lambda[m]) * rng.normal();

    detail::fft(spec);
    const double norm = 1.0 / std::sqrt(static_cast<double>(M));
    out.resize(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = spec[j].real() * norm;
    return true;
}

// Dense fallback: Cholesky square root of the n x n covariance matrix.
void fgn_cholesky(double hurst, std::size_t n, Pcg64& rng, std::vector<double>& out) {
    std::vector<double> cov(n);
    for (std::size_t k = 0; k < n; ++k) cov[k] = fgn_autocovariance(hurst, k);

    // Lower-triangular factor, row-packed.
    std::vector<double> L(n * (n + 1) / 2, 0.0);
    auto at = [&L](std::size_t i, std::size_t j) -> double& { return L[i * (i + 1) / 2 + j]; };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = cov[i - j];
            for (std::size_t k = 0; k < j; ++k) sum -= at(i, k) * at(j, k);
            if (i == j) {
                at(i, j) = sum > 0.0 ? std::sqrt(sum) : 0.0;
            } else {
                const double d = at(j, j);
                at(i, j) = d > 0.0 ? sum / d : 0.0;
            }
        }
    }

    std::vector<double> z(n);
    for (auto& v : z) v = rng.normal();
    out.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j <= i; ++j) sum += at(i, j) * z[j];
        out[i] = sum;
    }
}

}  // namespace

ReturnSeries gen_fgn(double hurst, std::size_t n, Seed seed, FgnMethod method) {
    require(hurst > 0.0 && hurst <= 1.0, "gen_fgn: Hurst exponent must be in (0, 1]");
    require(n >= 1, "gen_fgn: need n >= 1");
    Pcg64 rng(seed);
    ReturnSeries r;
    r.lag = 1;
    switch (method) {
        case FgnMethod::Circulant:
            fgn_circulant(hurst, n, rng, r.values, false);
            break;
        case FgnMethod::Cholesky:
            fgn_cholesky(hurst, n, rng, r.values);
            break;
        case FgnMethod::Auto:
            if (!fgn_circulant(hurst, n, rng, r.values, true)) {
                Pcg64 fresh(seed);  // the failed attempt consumed no draws
                fgn_cholesky(hurst, n, fresh, r.values);
            }
            break;
    }
    return r;
}

PriceSeries gen_fbm_price(const FbmParams& p, Seed seed) {
    check_price_params(p.s0, p.length, "gen_fbm_price");
    require(p.hurst > 0.0 && p.hurst <= 1.0, "gen_fbm_price: Hurst exponent must be in (0, 1]");
    require(p.sigma >= 0.0 && std::isfinite(p.mu), "gen_fbm_price: need sigma >= 0 and finite mu");
    const ReturnSeries g = gen_fgn(p.hurst, p.length - 1, seed);
    std::vector<double> increments(p.length - 1);
    for (std::size_t k = 0; k < increments.size(); ++k) {
        increments[k] = p.mu + p.sigma * g.values[k];
    }
    return prices_from_increments(p.s0, increments, "fbm", "gen_fbm_price");
}

double sample_stable(double alpha, Pcg64& rng) {
    // Chambers-Mallows-Stuck for the symmetric case. U uniform on
    // (-pi/2, pi/2), E standard exponential:
    //   X = sin(alpha U) / cos(U)^{1/alpha} * (cos((1-alpha) U) / E)^{(1-alpha)/alpha}.
    const double u = kPi * (rng.uniform01() - 0.5);
    const double e = rng.exponential();
    if (alpha == 1.0) return std::tan(u);  // exponent is exactly 0: Cauchy
    const double t = std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha);
    const double s = std::pow(std::cos((1.0 - alpha) * u) / e, (1.0 - alpha) / alpha);
    return t * s;
}

double sample_stable(double alpha, Seed seed) {
    require(alpha > 0.0 && alpha <= 2.0, "sample_stable: alpha must be in (0, 2]");
    Pcg64 rng(seed);
    return sample_stable(alpha, rng);
}

double stable_interquartile_range(double alpha) {
    require(alpha > 0.0 && alpha <= 2.0, "stable_interquartile_range: alpha must be in (0, 2]");
    // Monte Carlo order statistics with a fixed internal seed; deterministic
    // and accurate to ~0.3%, which is plenty for a calibration default.
    static std::mutex mutex;
    static std::map<double, double> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        if (const auto it = cache.find(alpha); it != cache.end()) return it->second;
    }
    constexpr std::size_t n = 400001;
    Pcg64 rng(Seed{0x14B5EEDCA11Bu, 0x51AB1Eu});
    std::vector<double> draws(n);
    for (auto& d : draws) d = sample_stable(alpha, rng);
    auto q25 = draws.begin() + (n - 1) / 4;
    std::nth_element(draws.begin(), q25, draws.end());
    const double lo = *q25;
    auto q75 = draws.begin() + 3 * (n - 1) / 4;
    std::nth_element(draws.begin(), q75, draws.end());
    const double hi = *q75;
    const double iqr = hi - lo;
    std::lock_guard<std::mutex> lock(mutex);
    cache[alpha] = iqr;
    return iqr;
}

double levy_scale_for(const LevyParams& p) {
    if (p.scale != 0.0) {
        require(p.scale > 0.0, "gen_levy_price: scale must be >= 0");
        return p.scale;
    }
    require(p.calibration_sigma > 0.0, "gen_levy_price: calibration_sigma must be > 0");
    return p.calibration_sigma / stable_interquartile_range(p.alpha);
}

PriceSeries gen_levy_price(const LevyParams& p, Seed seed) {
    check_price_params(p.s0, p.length, "gen_levy_price");
    require(p.alpha > 0.0 && p.alpha <= 2.0, "gen_levy_price: alpha must be in (0, 2]");
    require(p.scale >= 0.0, "gen_levy_price: scale must be >= 0");
    // scale == 0 with a calibration sigma of 0 is the degenerate flat series.
    const double c = (p.scale == 0.0 && p.calibration_sigma == 0.0) ? 0.0 : levy_scale_for(p);
    Pcg64 rng(seed);
    std::vector<double> increments(p.length - 1);
    for (auto& dx : increments) dx = c * sample_stable(p.alpha, rng);
    PriceSeries s = prices_from_increments(p.s0, increments, "levy", "gen_levy_price");
    return s;
}

namespace {

struct MsmCore {
    const MsmParams& p;
    Pcg64 rng;
    std::vector<double> switch_prob;  // gamma_k, k = 1..K
    std::vector<double> multiplier;   // current state per component

    MsmCore(const MsmParams& params, Seed seed) : p(params), rng(seed) {
        switch_prob.resize(p.components);
        for (int k = 1; k <= p.components; ++k) {
            const double expo = std::pow(p.growth, static_cast<double>(k - p.components));
            switch_prob[k - 1] = 1.0 - std::pow(1.0 - p.gamma_high, expo);
        }
        multiplier.resize(p.components);
        for (auto& m : multiplier) m = draw_state();
    }

    double draw_state() { return rng.uniform01() < 0.5 ? p.m0 : 2.0 - p.m0; }

    void step_states() {
        for (int k = 0; k < p.components; ++k) {
            if (rng.uniform01() < switch_prob[k]) multiplier[k] = draw_state();
        }
    }

    double sigma() const {
        double prod = 1.0;
        for (const double m : multiplier) prod *= m;
        return p.sigma_bar * std::sqrt(prod);
    }

    std::uint32_t mask() const {
        std::uint32_t m = 0;
        for (int k = 0; k < p.components; ++k) {
            if (multiplier[k] == p.m0) m |= (1u << k);
        }
        return m;
    }
};

void check_msm(const MsmParams& p) {
    check_price_params(p.s0, p.length, "gen_msm_price");
    require(p.m0 >= 1.0 && p.m0 < 2.0, "gen_msm_price: m0 must be in [1, 2)");
    require(p.components >= 1 && p.components <= 32, "gen_msm_price: components must be in [1, 32]");
    require(p.gamma_high > 0.0 && p.gamma_high < 1.0, "gen_msm_price: gamma_high must be in (0, 1)");
    require(p.growth > 1.0, "gen_msm_price: growth must be > 1");
    require(p.sigma_bar > 0.0, "gen_msm_price: sigma_bar must be > 0");
}

MsmPath msm_simulate(const MsmParams& p, Seed seed, bool keep_trace) {
    check_msm(p);
    MsmCore core(p, seed);
    const std::size_t steps = p.length - 1;
    MsmPath path;
    if (keep_trace) {
        path.volatility.reserve(steps);
        path.state_mask.reserve(steps);
    }
    std::vector<double> increments(steps);
    for (std::size_t t = 0; t < steps; ++t) {
        if (t > 0) core.step_states();  // initial states cover the first return
        const double vol = core.sigma();
        increments[t] = vol * core.rng.normal();
        if (keep_trace) {
            path.volatility.push_back(vol);
            path.state_mask.push_back(core.mask());
        }
    }
    path.prices = prices_from_increments(p.s0, increments, "msm", "gen_msm_price");
    return path;
}

}  // namespace

PriceSeries gen_msm_price(const MsmParams& p, Seed seed) {
    return msm_simulate(p, seed, false).prices;
}

MsmPath gen_msm_path(const MsmParams& p, Seed seed) {
    return msm_simulate(p, seed, true);
}

}  // namespace profitscape
