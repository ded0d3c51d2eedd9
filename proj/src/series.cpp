#include "profitscape/series.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "profitscape/errors.hpp"

namespace profitscape {

namespace {

std::string where(const PriceSeries& s) {
    return s.label.empty() ? std::string("price series") : "series '" + s.label + "'";
}

}  // namespace

void validate_prices(const PriceSeries& s) {
    if (s.values.size() < 2) {
        throw ValidationError(where(s) + ": need at least 2 prices, got " +
                              std::to_string(s.values.size()));
    }
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double v = s.values[i];
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ValidationError(where(s) + ": non-positive price " + std::to_string(v) +
                                  " at day " + std::to_string(i + 1));
        }
    }
}

double log_return(const PriceSeries& s, std::size_t t, std::size_t lag) {
    const std::size_t T = s.values.size();
    if (lag < 1) throw RangeError("log_return: lag must be >= 1");
    if (t > T || t <= lag) {
        throw RangeError("log_return: need lag < t <= T, got t=" + std::to_string(t) +
                         ", lag=" + std::to_string(lag) + ", T=" + std::to_string(T));
    }
    return std::log(s.values[t - 1] / s.values[t - 1 - lag]);
}

ReturnSeries to_returns(const PriceSeries& s, std::size_t lag) {
    const std::size_t T = s.values.size();
    if (lag < 1 || lag >= T) {
        throw RangeError("to_returns: need 1 <= lag < T, got lag=" + std::to_string(lag) +
                         ", T=" + std::to_string(T));
    }
    ReturnSeries r;
    r.lag = lag;
    r.values.resize(T - lag);
    for (std::size_t k = 0; k < T - lag; ++k) {
        r.values[k] = std::log(s.values[k + lag] / s.values[k]);
    }
    return r;
}

PriceSeries from_returns(double s0, const ReturnSeries& r) {
    if (!(s0 > 0.0)) throw ValidationError("from_returns: initial price must be > 0");
    if (r.lag != 1) throw ValidationError("from_returns: returns must have lag 1");
    PriceSeries s;
    s.values.reserve(r.values.size() + 1);
    s.values.push_back(s0);
    double price = s0;
    for (const double ret : r.values) {
        price *= std::exp(ret);
        s.values.push_back(price);
    }
    return s;
}

ReturnSeries shuffle_return_values(const ReturnSeries& r, Seed seed) {
    ReturnSeries out = r;
    Pcg64 rng(seed);
    // Fisher-Yates, high index downward.
    for (std::size_t i = out.values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_below(i));
        std::swap(out.values[i - 1], out.values[j]);
    }
    return out;
}

PriceSeries shuffle_returns(const PriceSeries& s, Seed seed) {
    validate_prices(s);
    if (s.values.size() < 3) throw ValidationError("shuffle_returns: need at least 3 prices");
    PriceSeries out = from_returns(s.values.front(), shuffle_return_values(to_returns(s, 1), seed));
    out.label = s.label;
    return out;
}

DriftVol estimate_drift_vol(const PriceSeries& s) {
    validate_prices(s);
    if (s.values.size() < 3) throw ValidationError("estimate_drift_vol: need at least 3 prices");
    const ReturnSeries r = to_returns(s, 1);
    const std::size_t n = r.values.size();
    const double mean = std::accumulate(r.values.begin(), r.values.end(), 0.0) / n;
    double ss = 0.0;
    for (const double v : r.values) ss += (v - mean) * (v - mean);
    const double sigma = std::sqrt(ss / (n - 1));
    return {mean + 0.5 * sigma * sigma, sigma};
}

DriftVol pooled_drift_vol(const std::vector<PriceSeries>& series) {
    std::vector<double> pooled;
    for (const auto& s : series) {
        validate_prices(s);
        const ReturnSeries r = to_returns(s, 1);
        pooled.insert(pooled.end(), r.values.begin(), r.values.end());
    }
    if (pooled.size() < 2) throw ValidationError("pooled_drift_vol: need at least 2 pooled returns");
    const std::size_t n = pooled.size();
    const double mean = std::accumulate(pooled.begin(), pooled.end(), 0.0) / n;
    double ss = 0.0;
    for (const double v : pooled) ss += (v - mean) * (v - mean);
    const double sigma = std::sqrt(ss / (n - 1));
    return {mean + 0.5 * sigma * sigma, sigma};
}

namespace {

bool parse_iso_date(const std::string& text, int& serial) {
    // YYYY-MM-DD, strictly.
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
    int y = 0, m = 0, d = 0;
    auto num = [](const char* first, const char* last, int& out) {
        const auto res = std::from_chars(first, last, out);
        return res.ec == std::errc() && res.ptr == last;
    };
    const char* p = text.data();
    if (!num(p, p + 4, y) || !num(p + 5, p + 7, m) || !num(p + 8, p + 10, d)) return false;
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                          std::chrono::day{unsigned(d)}};
    if (!ymd.ok()) return false;
    serial = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return true;
}

std::string trim_cr(std::string line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    return line;
}

}  // namespace

PriceSeries load_price_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    PriceSeries s;
    s.label = std::filesystem::path(path).stem().string();

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("'" + path + "': empty file");
    ++line_no;
    line = trim_cr(line);
    // Tolerate a UTF-8 BOM on the header.
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line != "DATE,CLOSE") {
        throw ParseError("'" + path + "' line 1: expected header 'DATE,CLOSE', got '" + line + "'");
    }

    int prev_serial = 0;
    bool have_prev = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim_cr(line);
        if (line.empty()) continue;
        const auto at = [&] { return "'" + path + "' line " + std::to_string(line_no); };
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw ParseError(at() + ": expected 'DATE,CLOSE' row");
        const std::string date = line.substr(0, comma);
        const std::string close = line.substr(comma + 1);
        int serial = 0;
        if (!parse_iso_date(date, serial)) {
            throw ParseError(at() + ": bad ISO-8601 date '" + date + "'");
        }
        if (close.empty()) throw ParseError(at() + ": missing price");
        double value = 0.0;
        const auto res = std::from_chars(close.data(), close.data() + close.size(), value);
        if (res.ec != std::errc() || res.ptr != close.data() + close.size()) {
            throw ParseError(at() + ": bad price '" + close + "'");
        }
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw ValidationError(at() + ": non-positive price " + close);
        }
        if (have_prev && serial <= prev_serial) {
            throw ValidationError(at() + ": dates must be strictly increasing");
        }
        prev_serial = serial;
        have_prev = true;
        s.values.push_back(value);
    }
    if (s.values.empty()) throw ParseError("'" + path + "': no data rows");
    validate_prices(s);
    return s;
}

std::vector<PriceSeries> load_prices(const std::string& path) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file() && entry.path().extension() == ".csv") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw ConfigError("no .csv files in directory '" + path + "'");
        std::vector<PriceSeries> out;
        out.reserve(files.size());
        for (const auto& f : files) out.push_back(load_price_csv(f.string()));
        return out;
    }
    if (!fs::exists(path, ec)) throw IoError("no such file or directory: '" + path + "'");
    return {load_price_csv(path)};
}

void save_price_csv(const PriceSeries& s, const std::string& path) {
    validate_prices(s);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "DATE,CLOSE\n";
    using namespace std::chrono;
    sys_days day{year{1999} / January / 4};
    char buf[64];
    for (const double v : s.values) {
        const year_month_day ymd{day};
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u,%.17g\n", int(ymd.year()),
                      unsigned(ymd.month()), unsigned(ymd.day()), v);
        out << buf;
        day += days{1};
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace profitscape
