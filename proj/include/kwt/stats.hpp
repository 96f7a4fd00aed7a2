#pragma once

#include <span>
#include <vector>

namespace kwt::stats {

double mean(std::span<const double> x);
// Sample (n-1) standard deviation; 0 for fewer than two values.
double stdev(std::span<const double> x);
// Linear-interpolated quantile (R type 7 / numpy default), prob in [0, 1].
double quantile(std::vector<double> x, double prob);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace kwt::stats
