#include "kwt/strategy.hpp"

#include <cmath>

#include "kwt/error.hpp"

namespace kwt {
namespace {

void require_usable(const ReturnPath& path, const Theta& theta) {
    if (path.size() < 2) throw ParameterError("path must hold at least 2 observations");
    if (theta.theta2 && !path.has_volatility())
        throw ParameterError("volatility strategy needs a path with nu");
}

}  // namespace

std::string to_string(Direction d) { return d == Direction::above ? "above" : "below"; }

std::string to_string(StrategyKind k) {
    return k == StrategyKind::univariate ? "univariate" : "volatility";
}

Direction parse_direction(const std::string& s) {
    if (s == "above") return Direction::above;
    if (s == "below") return Direction::below;
    throw ParameterError("unknown direction '" + s + "'");
}

StrategyKind parse_strategy_kind(const std::string& s) {
    if (s == "univariate") return StrategyKind::univariate;
    if (s == "volatility") return StrategyKind::volatility;
    throw ParameterError("unknown strategy kind '" + s + "'");
}

int decide_univariate(double x_prev, const Theta& theta) {
    if (theta.direction == Direction::above) return x_prev > theta.theta1 ? 1 : 0;
    return x_prev < theta.theta1 ? 1 : 0;
}

int decide_volatility(double h_prev, double nu_prev, const Theta& theta) {
    if (!theta.theta2) throw ParameterError("volatility decision needs theta2");
    const double signal = h_prev + *theta.theta2 * std::exp(nu_prev);
    if (theta.direction == Direction::above) return signal > theta.theta1 ? 1 : 0;
    return signal < theta.theta1 ? 1 : 0;
}

int decide_at(const ReturnPath& path, std::size_t t, const Theta& theta) {
    if (theta.theta2) return decide_volatility(path.h[t - 1], path.nu[t], theta);
    return decide_univariate(path.h[t - 1], theta);
}

double realized_growth(const ReturnPath& path, const Theta& theta) {
    require_usable(path, theta);
    double sum = 0.0;
    for (std::size_t t = 1; t < path.size(); ++t)
        sum += growth_increment(path.h[t], decide_at(path, t, theta));
    return sum / static_cast<double>(path.size() - 1);
}

std::vector<double> wealth_path(const ReturnPath& path, const Theta& theta) {
    require_usable(path, theta);
    std::vector<double> log_wealth(path.size(), 0.0);
    for (std::size_t t = 1; t < path.size(); ++t)
        log_wealth[t] = log_wealth[t - 1] + growth_increment(path.h[t], decide_at(path, t, theta));
    return log_wealth;
}

}  // namespace kwt
