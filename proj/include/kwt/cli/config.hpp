#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "kwt/dynamics.hpp"
#include "kwt/experiments.hpp"
#include "kwt/kw.hpp"
#include "kwt/oracle.hpp"

namespace kwt::cli {

/// Bad or missing configuration value; `field` is the dotted JSON path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Every setting any subcommand reads, with defaults filled in.
struct RunConfig {
    std::string model = "ar1";
    std::optional<std::string> preset;
    DynamicsSpec spec = Ar1Params{0.01, 0.5, 0.05};
    std::size_t t_len = 0;  // 0: the command's own default
    std::uint64_t seed = 1;
    unsigned workers = 1;

    StrategyKind kind = StrategyKind::univariate;
    std::optional<Direction> direction;  // unset: from the sign of alpha
    StepSchedule schedule;
    StepSchedule schedule2;
    ScalingMode scaling = ScalingMode::none;
    CounterOrigin origin = CounterOrigin::time_index;
    Interval theta2_box;

    std::size_t realizations = 25;
    std::optional<ThetaStarSource> theta_star;
    OracleOptions oracle;
    std::size_t max_points = 1000;
    bool dump_trajectories = false;

    std::vector<std::string> table_dynamics{"ar1", "dgsv"};
    std::vector<std::string> table_datasets{"dataset1", "dataset2"};
    std::vector<ScalingMode> table_modes{ScalingMode::none, ScalingMode::stdev, ScalingMode::stdev5};

    Direction effective_direction() const;
    ExperimentConfig experiment(std::size_t default_t_len) const;
    TableConfig table(std::size_t default_t_len) const;
    LearnConfig learn() const;
};

/// Parse a configuration document; missing keys take defaults.
RunConfig parse_config(const nlohmann::json& doc);

/// Fully expanded form, suitable for a manifest; parse_config inverts it.
nlohmann::json to_json(const RunConfig& config);

nlohmann::json read_json_file(const std::string& path);

}  // namespace kwt::cli
