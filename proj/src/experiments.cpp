#include "kwt/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "kwt/error.hpp"
#include "kwt/parallel.hpp"
#include "kwt/random.hpp"
#include "kwt/stats.hpp"

namespace kwt {
namespace {

constexpr std::uint64_t oracle_stream = 0x6f7261636c65ULL;

double squared_error(const Theta& star, double theta1, const double* theta2) {
    const double d1 = theta1 - star.theta1;
    double err = d1 * d1;
    if (theta2 && star.theta2) {
        const double d2 = *theta2 - *star.theta2;
        err += d2 * d2;
    }
    return err;
}

}  // namespace

DynamicsSpec DatasetPreset::spec(const std::string& model, std::size_t lags) const {
    if (model == "ar1") return ar1();
    if (model == "ma") return ma(lags);
    if (model == "dgsv") return dgsv(lags);
    throw ParameterError("unknown dynamics model '" + model + "'");
}

DatasetPreset dataset_preset(const std::string& name) {
    if (name == "dataset1") return {"dataset1", 0.01, 0.5, 0.05, -0.2, 0.4, 0.7};
    if (name == "dataset2") return {"dataset2", 0.005, 0.2, 0.05, -0.2, 0.4, 0.7};
    throw ParameterError("unknown dataset preset '" + name + "'");
}

std::string to_string(ThetaStarSource s) {
    return s == ThetaStarSource::analytic ? "analytic" : "monte_carlo";
}

ThetaStarSource parse_theta_star_source(const std::string& s) {
    if (s == "analytic") return ThetaStarSource::analytic;
    if (s == "monte_carlo") return ThetaStarSource::monte_carlo;
    throw ParameterError("unknown theta* source '" + s + "'");
}

ThetaStarSource default_theta_star_source(const DynamicsSpec& spec, StrategyKind kind) {
    if (kind == StrategyKind::univariate && std::holds_alternative<Ar1Params>(spec))
        return ThetaStarSource::analytic;
    return ThetaStarSource::monte_carlo;
}

Direction default_direction(const DynamicsSpec& spec) {
    if (const auto* p = std::get_if<Ar1Params>(&spec); p && p->alpha < 0.0) return Direction::below;
    if (const auto* p = std::get_if<DgsvParams>(&spec); p && p->alpha < 0.0) return Direction::below;
    return Direction::above;
}

ThetaStar resolve_theta_star(const DynamicsSpec& spec, StrategyKind kind, Direction direction,
                             ThetaStarSource source, const OracleOptions& oracle,
                             std::uint64_t base_seed, unsigned workers) {
    ThetaStar out;
    if (source == ThetaStarSource::analytic) {
        const auto* p = std::get_if<Ar1Params>(&spec);
        if (!p || kind != StrategyKind::univariate)
            throw ParameterError("analytic theta* exists only for the univariate AR(1) strategy");
        const auto opt = optimal_theta_ar1(p->mu, p->alpha);
        if (opt.direction != direction)
            out.warnings.push_back("configured direction disagrees with the sign of alpha");
        out.theta.theta1 = opt.theta;
        out.theta.direction = opt.direction;
        return out;
    }

    McSettings mc = oracle.mc;
    mc.seed = oracle.seed.value_or(mix64(base_seed ^ oracle_stream));
    mc.workers = workers;
    if (kind == StrategyKind::univariate) {
        const auto opt = mc_optimal_theta(mc_growth_curve(spec, mc, oracle.grid_size, direction));
        out.theta.theta1 = opt.theta;
        out.theta.direction = direction;
        if (opt.boundary)
            out.warnings.push_back("Monte-Carlo theta* at the grid boundary; widen the grid");
        return out;
    }
    const auto vol = mc_volatility_optimum(spec, mc, oracle.surface, direction);
    out.theta = vol.optimum.theta;
    if (vol.optimum.boundary)
        out.warnings.push_back("Monte-Carlo theta* at the surface boundary; widen the grid");
    return out;
}

std::vector<std::size_t> log_thinned(std::size_t count, std::size_t max_points) {
    if (count == 0) return {};
    if (max_points < 2) return {count - 1};
    std::vector<std::size_t> idx;
    idx.reserve(max_points);
    const double span = std::log(static_cast<double>(count));
    for (std::size_t k = 0; k < max_points; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(max_points - 1);
        const auto e = static_cast<std::size_t>(std::llround(std::exp(span * frac))) - 1;
        const auto clamped = std::min(e, count - 1);
        if (idx.empty() || clamped > idx.back()) idx.push_back(clamped);
    }
    if (idx.back() != count - 1) idx.push_back(count - 1);
    return idx;
}

ConvergenceResult run_convergence(const ExperimentConfig& config) {
    if (config.n_realizations < 1) throw ParameterError("n_realizations must be at least 1");
    if (config.t_len <= warmup_length)
        throw ParameterError("t_len must exceed the " + std::to_string(warmup_length) +
                             "-point warmup");
    validate(config.spec);

    const auto source =
        config.theta_star_source.value_or(default_theta_star_source(config.spec, config.learn.kind));
    auto star = resolve_theta_star(config.spec, config.learn.kind, config.learn.direction, source,
                                   config.oracle, config.base_seed, config.workers);

    const std::size_t entries = config.t_len - warmup_length + 1;
    const auto idx = log_thinned(entries, config.max_points);
    const bool bivariate = config.learn.kind == StrategyKind::volatility;

    std::vector<std::vector<double>> errors(config.n_realizations);
    std::vector<Trajectory> kept(config.keep_trajectories ? config.n_realizations : 0);
    std::vector<char> degenerate(config.n_realizations, 0);
    parallel_for(config.n_realizations, config.workers, [&](std::size_t i) {
        const auto path = simulate(config.spec, config.t_len, derive_seed(config.base_seed, i));
        auto traj = run(path, config.learn);
        std::vector<double> row(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const auto e = idx[k];
            row[k] = squared_error(star.theta, traj.theta1[e], bivariate ? &traj.theta2[e] : nullptr);
        }
        errors[i] = std::move(row);
        degenerate[i] = traj.degenerate_scale ? 1 : 0;
        if (config.keep_trajectories) kept[i] = std::move(traj);
    });

    ConvergenceResult out;
    out.theta_star = star.theta;
    out.warnings = std::move(star.warnings);
    if (std::any_of(degenerate.begin(), degenerate.end(), [](char d) { return d != 0; }))
        out.warnings.push_back("zero-variance path: scaling fell back to K = 1");
    out.trajectories = std::move(kept);

    auto& s = out.series;
    s.n = config.n_realizations;
    s.theta_star.push_back(star.theta.theta1);
    if (star.theta.theta2) s.theta_star.push_back(*star.theta.theta2);
    s.t.resize(idx.size());
    s.mse.assign(idx.size(), 0.0);
    for (std::size_t k = 0; k < idx.size(); ++k) s.t[k] = Trajectory::time_of(idx[k]);
    for (const auto& row : errors)
        for (std::size_t k = 0; k < idx.size(); ++k) s.mse[k] += row[k];
    for (auto& m : s.mse) m /= static_cast<double>(config.n_realizations);
    return out;
}

double fit_power_law(const MseSeries& series, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw ParameterError("tail_fraction must lie in (0, 1]");
    if (series.t.size() != series.mse.size()) throw ParameterError("t and mse lengths differ");
    const std::size_t n = series.t.size();
    const auto count = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n)));
    if (count < 10)
        throw ParameterError("power-law fit needs at least 10 points in the tail window");
    std::vector<double> x, y;
    for (std::size_t k = n - count; k < n; ++k) {
        if (!(series.mse[k] > 0.0)) throw DegenerateError("zero MSE inside the fit window");
        x.push_back(std::log(static_cast<double>(series.t[k])));
        y.push_back(std::log(series.mse[k]));
    }
    return stats::least_squares(x, y).slope;
}

ScalingTable run_scaling_table(const TableConfig& config) {
    if (config.n_realizations < 1) throw ParameterError("n_realizations must be at least 1");
    if (config.t_len <= warmup_length) throw ParameterError("t_len must exceed the warmup");
    ScalingTable table;
    for (const auto& model : config.dynamics) {
        for (const auto& name : config.datasets) {
            const auto preset = dataset_preset(name);
            const auto spec = preset.spec(model, config.lags);
            const auto direction = default_direction(spec);
            auto star = resolve_theta_star(spec, StrategyKind::univariate, direction,
                                           default_theta_star_source(spec, StrategyKind::univariate),
                                           config.oracle, config.base_seed, config.workers);
            for (auto& w : star.warnings)
                table.warnings.push_back(model + "/" + name + ": " + w);

            const std::size_t m = config.modes.size();
            std::vector<std::vector<double>> finals(config.n_realizations);
            parallel_for(config.n_realizations, config.workers, [&](std::size_t i) {
                const auto path = simulate(spec, config.t_len, derive_seed(config.base_seed, i));
                std::vector<double> row(m);
                for (std::size_t j = 0; j < m; ++j) {
                    LearnConfig learn;
                    learn.direction = direction;
                    learn.schedule1 = config.schedule;
                    learn.mode = config.modes[j];
                    learn.origin = config.origin;
                    const double theta = run(path, learn).theta1.back();
                    row[j] = (theta - star.theta.theta1) * (theta - star.theta.theta1);
                }
                finals[i] = std::move(row);
            });
            for (std::size_t j = 0; j < m; ++j) {
                double mse = 0.0;
                for (const auto& row : finals) mse += row[j];
                table.rows.push_back({model, name, config.modes[j],
                                      mse / static_cast<double>(config.n_realizations),
                                      star.theta.theta1});
            }
        }
    }
    return table;
}

}  // namespace kwt
