#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace profitscape {

// Power-law fit M ~ N^a by ordinary least squares of ln M on ln N.
struct ScalingFit {
    double a = 0.0;
    double log_intercept = 0.0;
    double stderr_a = 0.0;
    double r_squared = 0.0;
    std::vector<double> fit_ns;  // the N values that entered the fit
};

// Fits over the `window` largest N values (0 means the default: the largest
// ceil(k/2) of the k available points). Points with M <= 0 are discarded;
// fewer than three surviving points raise InsufficientDataError.
ScalingFit fit_exponent(std::span<const std::pair<double, double>> points,
                        std::size_t window = 0);

struct LabeledFit {
    std::string label;
    double param = 0.0;   // sweep parameter when meaningful
    bool has_param = false;
    ScalingFit fit;
};

// Tabulates fits; rows are sorted by label, monotonicity flags are evaluated
// in the input order (callers pass parameter-ordered fits).
struct ExponentComparison {
    struct Row {
        std::string label;
        double a;
        double stderr_a;
    };
    std::vector<Row> rows;
    bool strictly_increasing = false;
    bool strictly_decreasing = false;
};

ExponentComparison compare_exponents(const std::vector<LabeledFit>& fits);

// JSON report: {label, a, stderr_a, r_squared, fit_Ns, points:[{N,M}]}.
std::string fit_report_json(const std::string& label, const ScalingFit& fit,
                            std::span<const std::pair<double, double>> points);

}  // namespace profitscape
