#include "kwt/kw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "kwt/error.hpp"
#include "kwt/stats.hpp"

namespace kwt {
namespace {

// Sign of the growth gradient along a fired window: for the `above` side,
// raising the threshold drops the step, so its return counts negatively.
double ascent_sign(Direction d) { return d == Direction::above ? -1.0 : 1.0; }

void require_ready(const KwState& state) {
    if (!state.initialized) throw StateError("learner state is not initialized");
}

void observe(KwState& state, double h_t) {
    state.h_min = std::min(state.h_min, h_t);
    state.h_max = std::max(state.h_max, h_t);
}

}  // namespace

double StepSchedule::gain(double t) const { return k * std::pow(t, -p); }
double StepSchedule::width(double t) const { return k * std::pow(t, -q); }

bool ScheduleReport::all_satisfied() const noexcept {
    return width_vanishes && gain_diverges && product_summable && ratio_summable;
}

std::vector<int> ScheduleReport::failed_conditions() const {
    std::vector<int> failed;
    if (!width_vanishes) failed.push_back(1);
    if (!gain_diverges) failed.push_back(2);
    if (!product_summable) failed.push_back(3);
    if (!ratio_summable) failed.push_back(4);
    return failed;
}

std::string ScheduleReport::describe() const {
    std::ostringstream out;
    auto line = [&](int n, bool ok, const char* what, const char* rule, double value) {
        out << "condition " << n << " (" << what << "): " << (ok ? "pass" : "FAIL") << "  [" << rule
            << ", value " << value << "]\n";
    };
    out << "schedule a_t = K t^-" << p << ", c_t = K t^-" << q << "\n";
    line(1, width_vanishes, "c_t -> 0", "q > 0", q);
    line(2, gain_diverges, "sum a_t = inf", "p <= 1", p);
    line(3, product_summable, "sum a_t c_t < inf", "p + q > 1", p + q);
    line(4, ratio_summable, "sum a_t^2 c_t^-2 < inf", "2(p - q) > 1", 2.0 * (p - q));
    out << (all_satisfied() ? "all conditions satisfied" : "some conditions violated") << "\n";
    return out.str();
}

ScheduleReport validate_schedule(double p, double q) {
    ScheduleReport r;
    r.p = p;
    r.q = q;
    r.width_vanishes = q > 0.0;
    r.gain_diverges = p <= 1.0;
    r.product_summable = p + q > 1.0;
    r.ratio_summable = 2.0 * (p - q) > 1.0;
    return r;
}

std::string to_string(ScalingMode m) {
    switch (m) {
        case ScalingMode::none: return "none";
        case ScalingMode::stdev: return "stdev";
        default: return "stdev5";
    }
}

ScalingMode parse_scaling_mode(const std::string& s) {
    if (s == "none") return ScalingMode::none;
    if (s == "stdev") return ScalingMode::stdev;
    if (s == "stdev5") return ScalingMode::stdev5;
    throw ParameterError("unknown scaling mode '" + s + "'");
}

ScaleFactor scale_factor(const ReturnPath& path, ScalingMode mode) {
    if (path.size() < 2) throw ParameterError("scaling needs at least 2 observations");
    if (mode == ScalingMode::none) return {1.0, false};
    const auto [lo, hi] = std::minmax_element(path.h.begin(), path.h.end());
    if (*lo == *hi) return {1.0, true};
    const double sd = stats::stdev(path.h);
    if (!(sd > 0.0) || !std::isfinite(sd)) return {1.0, true};
    return {mode == ScalingMode::stdev ? sd : 5.0 * sd, false};
}

Theta init_theta(std::span<const double> warmup, StrategyKind kind, Direction direction) {
    if (warmup.size() != warmup_length)
        throw ParameterError("warmup must hold exactly " + std::to_string(warmup_length) +
                             " values, got " + std::to_string(warmup.size()));
    Theta theta;
    theta.theta1 = std::accumulate(warmup.begin(), warmup.end(), 0.0) /
                   static_cast<double>(warmup.size());
    if (kind == StrategyKind::volatility) theta.theta2 = 0.0;
    theta.direction = direction;
    return theta;
}

std::string to_string(CounterOrigin o) {
    return o == CounterOrigin::time_index ? "time_index" : "first_step";
}

CounterOrigin parse_counter_origin(const std::string& s) {
    if (s == "time_index") return CounterOrigin::time_index;
    if (s == "first_step") return CounterOrigin::first_step;
    throw ParameterError("unknown counter origin '" + s + "'");
}

KwState init_state(std::span<const double> warmup, StrategyKind kind, Direction direction,
                   CounterOrigin origin) {
    KwState state;
    state.theta = init_theta(warmup, kind, direction);
    const auto [lo, hi] = std::minmax_element(warmup.begin(), warmup.end());
    state.h_min = *lo;
    state.h_max = *hi;
    state.t = origin == CounterOrigin::time_index
                  ? static_cast<std::int64_t>(warmup_length) + 1
                  : 1;
    state.initialized = true;
    return state;
}

KwState step_univariate(KwState state, double h_t, double x_prev, const StepSchedule& schedule) {
    require_ready(state);
    const double t = static_cast<double>(state.t);
    const double a = schedule.gain(t);
    const double c = schedule.width(t);
    double& theta = state.theta.theta1;

    if (std::abs(x_prev - theta) <= c) theta += ascent_sign(state.theta.direction) * a * h_t / c;

    observe(state, h_t);
    theta = std::clamp(theta, state.h_min, state.h_max);
    ++state.t;
    return state;
}

KwState step_bivariate(KwState state, double h_t, double h_prev, double nu_prev,
                       const StepSchedule& schedule1, const StepSchedule& schedule2,
                       Interval theta2_box) {
    require_ready(state);
    if (!state.theta.theta2) throw ParameterError("bivariate step needs theta2");
    if (!std::isfinite(nu_prev)) throw ParameterError("bivariate step needs a finite nu");

    const double t = static_cast<double>(state.t);
    const double vol = std::exp(nu_prev);
    const double theta1 = state.theta.theta1;
    const double theta2 = *state.theta.theta2;
    const double center = theta1 - theta2 * vol;
    const double sign = ascent_sign(state.theta.direction);

    const double a1 = schedule1.gain(t), c1 = schedule1.width(t);
    const double a2 = schedule2.gain(t), c2 = schedule2.width(t);
    const bool fire1 = std::abs(h_prev - center) <= c1;
    const bool fire2 = std::abs(h_prev - center) <= c2 * vol;

    double next1 = fire1 ? theta1 + sign * a1 * h_t / c1 : theta1;
    double next2 = fire2 ? theta2 - sign * a2 * h_t / c2 : theta2;

    observe(state, h_t);
    state.theta.theta1 = std::clamp(next1, state.h_min, state.h_max);
    state.theta.theta2 = std::clamp(next2, theta2_box.lo, theta2_box.hi);
    ++state.t;
    return state;
}

Trajectory run(const ReturnPath& path, const LearnConfig& config) {
    if (path.size() <= warmup_length)
        throw ParameterError("learning needs more than " + std::to_string(warmup_length) +
                             " observations");
    const bool bivariate = config.kind == StrategyKind::volatility;
    if (bivariate && !path.has_volatility())
        throw ParameterError("volatility strategy needs a path with nu");
    if (config.theta2_box.lo > config.theta2_box.hi)
        throw ParameterError("theta2 box is empty");

    const auto scale = scale_factor(path, config.mode);
    StepSchedule s1 = config.schedule1;
    StepSchedule s2 = config.schedule2;
    s1.k *= scale.k;
    s2.k *= scale.k;

    Trajectory out;
    out.k = scale.k;
    out.degenerate_scale = scale.degenerate;
    const std::size_t steps = path.size() - warmup_length;
    out.theta1.reserve(steps + 1);
    if (bivariate) out.theta2.reserve(steps + 1);

    auto state = init_state(std::span(path.h).first(warmup_length), config.kind,
                            config.direction, config.origin);
    auto record = [&] {
        out.theta1.push_back(state.theta.theta1);
        if (bivariate) out.theta2.push_back(*state.theta.theta2);
    };
    record();
    for (std::size_t i = warmup_length; i < path.size(); ++i) {
        if (bivariate)
            state = step_bivariate(state, path.h[i], path.h[i - 1], path.nu[i], s1, s2,
                                   config.theta2_box);
        else
            state = step_univariate(state, path.h[i], path.h[i - 1], s1);
        record();
    }
    return out;
}

}  // namespace kwt
