#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kwt/dynamics.hpp"

namespace kwt {

// Which side of the threshold holds the stock.
enum class Direction { above, below };

// univariate:  pi_t = 1{H_{t-1} > theta1}
// volatility:  pi_t = 1{H_{t-1} + theta2 e^{nu_{t-1}} > theta1}
enum class StrategyKind { univariate, volatility };

struct Theta {
    double theta1 = 0.0;
    std::optional<double> theta2;
    Direction direction = Direction::above;

    StrategyKind kind() const noexcept {
        return theta2 ? StrategyKind::volatility : StrategyKind::univariate;
    }
};

std::string to_string(Direction d);
std::string to_string(StrategyKind k);
Direction parse_direction(const std::string& s);
StrategyKind parse_strategy_kind(const std::string& s);

/// Strict comparison: a tie with the threshold never buys.
int decide_univariate(double x_prev, const Theta& theta);
int decide_volatility(double h_prev, double nu_prev, const Theta& theta);

/// log(1 - pi + pi e^h) for pi in {0, 1}, which is exactly pi * h.
inline double growth_increment(double h, int pi) noexcept { return pi == 1 ? h : 0.0; }

/// Position held during step t (0-based, t >= 1): h[t-1] and, for the
/// volatility kind, the prediction nu[t], both known before h[t].
int decide_at(const ReturnPath& path, std::size_t t, const Theta& theta);

/// Time-averaged log growth (1/(T-1)) sum_{t=2..T} pi_t H_t.
double realized_growth(const ReturnPath& path, const Theta& theta);

/// Log wealth, starting at 0 for the first observation; size T.
std::vector<double> wealth_path(const ReturnPath& path, const Theta& theta);

}  // namespace kwt
