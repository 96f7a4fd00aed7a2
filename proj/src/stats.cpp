#include "kwt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kwt/error.hpp"

namespace kwt::stats {

double mean(std::span<const double> x) {
    if (x.empty()) throw ParameterError("mean of an empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double stdev(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double quantile(std::vector<double> x, double prob) {
    if (x.empty()) throw ParameterError("quantile of an empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw ParameterError("quantile probability outside [0, 1]");
    const double pos = prob * static_cast<double>(x.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(lo), x.end());
    const double below = x[lo];
    if (frac == 0.0 || lo + 1 >= x.size()) return below;
    const double above = *std::min_element(x.begin() + static_cast<std::ptrdiff_t>(lo) + 1, x.end());
    return below + frac * (above - below);
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ParameterError("least squares needs two equal-length samples of size >= 2");
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw DegenerateError("least squares with constant abscissa");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

}  // namespace kwt::stats
