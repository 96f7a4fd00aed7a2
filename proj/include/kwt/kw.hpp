#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kwt/dynamics.hpp"
#include "kwt/strategy.hpp"

namespace kwt {

/// a_t = k t^-p (gain), c_t = k t^-q (finite-difference half-width).
struct StepSchedule {
    double k = 1.0;
    double p = 1.0;
    double q = 1.0 / 3.0;

    double gain(double t) const;
    double width(double t) const;
};

/// The four classical Kiefer-Wolfowitz conditions for power-law steps.
struct ScheduleReport {
    double p = 0.0;
    double q = 0.0;
    bool width_vanishes = false;     // c_t -> 0               <=> q > 0
    bool gain_diverges = false;      // sum a_t = inf          <=> p <= 1
    bool product_summable = false;   // sum a_t c_t < inf      <=> p + q > 1
    bool ratio_summable = false;     // sum a_t^2 / c_t^2 < inf <=> 2(p - q) > 1

    bool all_satisfied() const noexcept;
    std::vector<int> failed_conditions() const;  // 1-based condition numbers
    std::string describe() const;
};

ScheduleReport validate_schedule(double p, double q);

enum class ScalingMode { none, stdev, stdev5 };

std::string to_string(ScalingMode m);
ScalingMode parse_scaling_mode(const std::string& s);

struct ScaleFactor {
    double k = 1.0;
    bool degenerate = false;  // zero-variance path: fell back to k = 1
};

/// 1, sd(H) or 5 sd(H), with sd the sample deviation over the whole path.
ScaleFactor scale_factor(const ReturnPath& path, ScalingMode mode);

inline constexpr std::size_t warmup_length = 10;

/// theta1 = mean of the warmup sample; theta2 = 0 for the volatility kind.
Theta init_theta(std::span<const double> warmup, StrategyKind kind = StrategyKind::univariate,
                 Direction direction = Direction::above);

/// Where the schedule counter starts. `time_index` evaluates a_t, c_t at the
/// time index of the observation being processed (11 for the first step
/// after a 10-point warmup); `first_step` restarts the count at 1.
enum class CounterOrigin { time_index, first_step };

std::string to_string(CounterOrigin o);
CounterOrigin parse_counter_origin(const std::string& s);

struct Interval {
    double lo = -100.0;
    double hi = 100.0;
};

struct KwState {
    Theta theta;
    std::int64_t t = 1;  // schedule counter of the next step
    double h_min = 0.0;
    double h_max = 0.0;
    bool initialized = false;
};

KwState init_state(std::span<const double> warmup, StrategyKind kind = StrategyKind::univariate,
                   Direction direction = Direction::above,
                   CounterOrigin origin = CounterOrigin::time_index);

/// One range-form update on observation h_t with signal x_prev, followed by
/// projection onto the running [min H, max H] (h_t included).
KwState step_univariate(KwState state, double h_t, double x_prev, const StepSchedule& schedule);

/// Simultaneous update of (theta1, theta2) for the volatility strategy. Both
/// indicators read the incoming theta; theta1 is projected onto the running
/// H range and theta2 onto `theta2_box`.
KwState step_bivariate(KwState state, double h_t, double h_prev, double nu_prev,
                       const StepSchedule& schedule1, const StepSchedule& schedule2,
                       Interval theta2_box = {});

struct LearnConfig {
    StrategyKind kind = StrategyKind::univariate;
    Direction direction = Direction::above;
    StepSchedule schedule1;
    StepSchedule schedule2;
    ScalingMode mode = ScalingMode::none;
    CounterOrigin origin = CounterOrigin::time_index;
    Interval theta2_box;
};

/// theta after the warmup (entry 0, time 10) and after every later step.
struct Trajectory {
    std::vector<double> theta1;
    std::vector<double> theta2;  // empty for the univariate kind
    double k = 1.0;
    bool degenerate_scale = false;

    std::size_t size() const noexcept { return theta1.size(); }
    // Time index (1-based) of entry i.
    static constexpr std::size_t time_of(std::size_t i) noexcept { return warmup_length + i; }
};

Trajectory run(const ReturnPath& path, const LearnConfig& config);

}  // namespace kwt
