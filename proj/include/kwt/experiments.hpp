#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kwt/dynamics.hpp"
#include "kwt/kw.hpp"
#include "kwt/oracle.hpp"
#include "kwt/strategy.hpp"

namespace kwt {

/// Parameter sets shared by the AR(1) and DGSV experiments.
struct DatasetPreset {
    std::string name;
    double mu = 0.0;
    double alpha = 0.0;
    double sigma = 0.0;
    double rho = 0.0;
    double b0 = 0.0;
    double b = 0.0;

    Ar1Params ar1() const { return {mu, alpha, sigma}; }
    MaParams ma(std::size_t lags = 1000) const { return {mu, b0, b, lags}; }
    DgsvParams dgsv(std::size_t lags = 1000) const { return {mu, alpha, sigma, rho, b0, b, lags}; }
    DynamicsSpec spec(const std::string& model, std::size_t lags = 1000) const;
};

/// "dataset1" or "dataset2".
DatasetPreset dataset_preset(const std::string& name);

enum class ThetaStarSource { analytic, monte_carlo };

std::string to_string(ThetaStarSource s);
ThetaStarSource parse_theta_star_source(const std::string& s);

struct OracleOptions {
    McSettings mc;  // mc.seed is replaced by `seed` or a value derived from base_seed
    std::optional<std::uint64_t> seed;
    std::size_t grid_size = 201;
    SurfaceSettings surface;
};

/// Default theta* source: analytic for AR(1), Monte-Carlo otherwise.
ThetaStarSource default_theta_star_source(const DynamicsSpec& spec, StrategyKind kind);

/// Side to buy on when none is configured: `below` for AR(1) with alpha < 0.
Direction default_direction(const DynamicsSpec& spec);

struct ThetaStar {
    Theta theta;
    std::vector<std::string> warnings;
};

ThetaStar resolve_theta_star(const DynamicsSpec& spec, StrategyKind kind, Direction direction,
                             ThetaStarSource source, const OracleOptions& oracle,
                             std::uint64_t base_seed, unsigned workers);

struct ExperimentConfig {
    DynamicsSpec spec = Ar1Params{0.01, 0.5, 0.05};
    LearnConfig learn;
    std::size_t n_realizations = 25;
    std::size_t t_len = 50000;
    std::uint64_t base_seed = 1;
    unsigned workers = 1;
    std::optional<ThetaStarSource> theta_star_source;
    OracleOptions oracle;
    std::size_t max_points = 1000;
    bool keep_trajectories = false;
};

struct MseSeries {
    std::vector<std::size_t> t;
    std::vector<double> mse;
    std::size_t n = 0;
    std::vector<double> theta_star;
};

struct ConvergenceResult {
    MseSeries series;
    Theta theta_star;
    std::vector<Trajectory> trajectories;  // only with keep_trajectories
    std::vector<std::string> warnings;
};

/// Entry indices (0-based, ascending, last included) of at most max_points
/// log-spaced samples out of `count` trajectory entries.
std::vector<std::size_t> log_thinned(std::size_t count, std::size_t max_points);

/// MSE_t = (1/N) sum_i |theta_t^(i) - theta*|^2 on log-thinned t.
ConvergenceResult run_convergence(const ExperimentConfig& config);

/// Least-squares slope of log(mse) on log(t) over the last tail_fraction of points.
double fit_power_law(const MseSeries& series, double tail_fraction = 0.5);

struct TableConfig {
    std::vector<std::string> dynamics{"ar1", "dgsv"};
    std::vector<std::string> datasets{"dataset1", "dataset2"};
    std::vector<ScalingMode> modes{ScalingMode::none, ScalingMode::stdev, ScalingMode::stdev5};
    std::size_t t_len = 100000;
    std::size_t n_realizations = 25;
    std::uint64_t base_seed = 1;
    unsigned workers = 1;
    std::size_t lags = 1000;
    StepSchedule schedule;
    CounterOrigin origin = CounterOrigin::time_index;
    OracleOptions oracle;
};

struct TableRow {
    std::string dynamics;
    std::string dataset;
    ScalingMode mode = ScalingMode::none;
    double mse_at_t = 0.0;
    double theta_star = 0.0;
};

struct ScalingTable {
    std::vector<TableRow> rows;
    std::vector<std::string> warnings;
};

/// Final-time MSE for every (dynamics, dataset, scaling) cell. Within one
/// (dynamics, dataset) pair all scalings learn on the same realizations.
ScalingTable run_scaling_table(const TableConfig& config);

}  // namespace kwt
