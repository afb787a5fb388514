#pragma once
//
// Output helpers for the study harness: bounded parallel sweeps, error CSVs,
// summary statistics and minimal SVG line charts.
//

#include "../errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

namespace parasep::experiment {

/// Worker count from PARASEP_THREADS, else the hardware concurrency.
inline std::size_t worker_count() {
    if (const char* env = std::getenv("PARASEP_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0)
            return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) on at most `workers` threads. If several calls
/// throw, the exception from the lowest index is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t workers = worker_count()) {
    workers = std::max<std::size_t>(1, std::min(workers, n));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

struct Stats {
    double max = 0.0;
    double median = 0.0;
    double argmax = 0.0;  // parameter at which the max occurs
};

inline Stats stats(const std::vector<double>& mu, const std::vector<double>& err) {
    Stats s;
    if (err.empty())
        return s;
    const auto it = std::max_element(err.begin(), err.end());
    s.max = *it;
    s.argmax = mu[static_cast<std::size_t>(it - err.begin())];
    std::vector<double> sorted = err;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t k = sorted.size() / 2;
    s.median = sorted.size() % 2 ? sorted[k] : 0.5 * (sorted[k - 1] + sorted[k]);
    return s;
}

inline std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Header line then one "mu,value[,extra...]" row per entry.
inline void write_columns(const std::filesystem::path& path, const std::vector<std::string>& header,
                          const std::vector<std::vector<double>>& columns) {
    std::ofstream os(path);
    if (!os)
        throw Error("cannot write '" + path.string() + "'");
    for (std::size_t c = 0; c < header.size(); ++c)
        os << (c ? "," : "") << header[c];
    os << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns[0].size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            os << (c ? "," : "") << format17(columns[c][r]);
        os << '\n';
    }
    if (!os)
        throw Error("failed writing '" + path.string() + "'");
}

/// log10(error) against mu as a single polyline.
inline void write_svg(const std::filesystem::path& path, const std::string& title, const std::vector<double>& mu,
                      const std::vector<double>& err) {
    constexpr double width = 640, height = 400, left = 60, right = 20, top = 40, bottom = 50;
    std::vector<double> y(err.size());
    for (std::size_t i = 0; i < err.size(); ++i)
        y[i] = std::log10(std::max(err[i], 1e-300));
    const double x0 = mu.empty() ? 0.0 : mu.front();
    const double x1 = mu.empty() ? 1.0 : std::max(mu.back(), x0 + 1e-12);
    double y0 = y.empty() ? -16.0 : std::floor(*std::min_element(y.begin(), y.end()));
    double y1 = y.empty() ? 0.0 : std::ceil(*std::max_element(y.begin(), y.end()));
    if (y1 <= y0)
        y1 = y0 + 1.0;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (width - left - right); };
    auto py = [&](double v) { return top + (y1 - v) / (y1 - y0) * (height - top - bottom); };

    std::ofstream os(path);
    if (!os)
        throw Error("cannot write '" + path.string() + "'");
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
       << title << "</text>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
       << height - bottom << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
       << "\" stroke=\"black\"/>\n";
    for (double t = y0; t <= y1 + 1e-9; t += 1.0) {
        os << "<text x=\"" << left - 6 << "\" y=\"" << py(t) + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">1e" << static_cast<int>(t)
           << "</text>\n";
    }
    os << "<text x=\"" << left << "\" y=\"" << height - bottom + 16 << "\" font-family=\"sans-serif\" font-size=\"10\">"
       << format17(x0) << "</text>\n";
    os << "<text x=\"" << width - right << "\" y=\"" << height - bottom + 16
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << format17(x1) << "</text>\n";
    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < mu.size(); ++i)
        os << px(mu[i]) << ',' << py(y[i]) << ' ';
    os << "\"/>\n</svg>\n";
}

}  // namespace parasep::experiment
