#include "profitscape/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "profitscape/errors.hpp"

namespace profitscape {

ScalingFit fit_exponent(std::span<const std::pair<double, double>> points, std::size_t window) {
    if (points.empty()) throw InsufficientDataError("fit_exponent: no points");

    std::vector<std::pair<double, double>> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    if (window == 0) window = (sorted.size() + 1) / 2;  // largest half by default
    window = std::min(window, sorted.size());

    std::vector<std::pair<double, double>> used;
    for (std::size_t k = sorted.size() - window; k < sorted.size(); ++k) {
        if (sorted[k].second > 0.0) used.push_back(sorted[k]);
    }
    if (used.size() < 3) {
        throw InsufficientDataError("fit_exponent: need >= 3 points with M > 0 in the window, have " +
                                    std::to_string(used.size()));
    }

    const std::size_t n = used.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t k = 0; k < n; ++k) {
        xs[k] = std::log(used[k].first);
        ys[k] = std::log(used[k].second);
        sx += xs[k];
        sy += ys[k];
    }
    const double xbar = sx / n;
    const double ybar = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double dx = xs[k] - xbar;
        const double dy = ys[k] - ybar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw InsufficientDataError("fit_exponent: all N values coincide");

    ScalingFit fit;
    fit.a = sxy / sxx;
    fit.log_intercept = ybar - fit.a * xbar;
    double sse = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double resid = ys[k] - (fit.log_intercept + fit.a * xs[k]);
        sse += resid * resid;
    }
    fit.stderr_a = n > 2 ? std::sqrt(std::max(sse, 0.0) / (n - 2) / sxx) : 0.0;
    fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    fit.fit_ns.reserve(n);
    for (const auto& [x, y] : used) fit.fit_ns.push_back(x);
    return fit;
}

ExponentComparison compare_exponents(const std::vector<LabeledFit>& fits) {
    if (fits.empty()) throw ValidationError("compare_exponents: no fits");
    ExponentComparison cmp;
    cmp.rows.reserve(fits.size());
    for (const auto& f : fits) cmp.rows.push_back({f.label, f.fit.a, f.fit.stderr_a});
    std::sort(cmp.rows.begin(), cmp.rows.end(),
              [](const auto& l, const auto& r) { return l.label < r.label; });

    cmp.strictly_increasing = fits.size() > 1;
    cmp.strictly_decreasing = fits.size() > 1;
    for (std::size_t k = 1; k < fits.size(); ++k) {
        if (!(fits[k].fit.a > fits[k - 1].fit.a)) cmp.strictly_increasing = false;
        if (!(fits[k].fit.a < fits[k - 1].fit.a)) cmp.strictly_decreasing = false;
    }
    return cmp;
}

std::string fit_report_json(const std::string& label, const ScalingFit& fit,
                            std::span<const std::pair<double, double>> points) {
    nlohmann::json j;
    j["label"] = label;
    j["a"] = fit.a;
    j["stderr_a"] = fit.stderr_a;
    j["r_squared"] = fit.r_squared;
    j["fit_Ns"] = fit.fit_ns;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [n, m] : points) {
        pts.push_back({{"N", n}, {"M", m}});
    }
    j["points"] = pts;
    return j.dump(2) + "\n";
}

}  // namespace profitscape
