#include "kwt/cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "kwt/cli/config.hpp"
#include "kwt/csv.hpp"
#include "kwt/error.hpp"

namespace kwt::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonOptions {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::string from_manifest;
    bool strict = false;
};

struct Outcome {
    std::vector<std::string> artifacts;
    std::vector<std::string> warnings;
};

void write_atomic(const fs::path& target, const std::function<void(std::ostream&)>& body) {
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        body(file);
        file.flush();
        if (!file) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

Outcome cmd_simulate(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const std::size_t t_len = cfg.t_len ? cfg.t_len : 1000;
    const auto path = simulate(cfg.spec, t_len, cfg.seed);
    write_atomic(dir / "path.csv", [&](std::ostream& o) { csv::write_path(o, path); });
    out << "simulated " << t_len << " steps of " << cfg.model << " (seed " << cfg.seed << ")\n";
    return {{"path.csv"}, {}};
}

Outcome cmd_hill(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    McSettings mc = cfg.oracle.mc;
    mc.seed = cfg.seed;
    mc.workers = cfg.workers;
    if (cfg.t_len) mc.t_len = cfg.t_len;
    const auto direction = cfg.effective_direction();
    Outcome result;
    if (cfg.kind == StrategyKind::volatility) {
        const auto surface = mc_growth_surface(cfg.spec, mc, cfg.oracle.surface, direction);
        const auto opt = mc_optimal_theta(surface);
        write_atomic(dir / "surface.csv", [&](std::ostream& o) { csv::write_surface(o, surface); });
        result.artifacts.push_back("surface.csv");
        out << "argmax theta1 = " << csv::format(opt.theta.theta1)
            << ", theta2 = " << csv::format(*opt.theta.theta2) << "\n";
        if (opt.boundary) result.warnings.push_back("surface argmax on the grid boundary");
        return result;
    }
    const auto curve = mc_growth_curve(cfg.spec, mc, cfg.oracle.grid_size, direction);
    const auto opt = mc_optimal_theta(curve);
    write_atomic(dir / "curve.csv", [&](std::ostream& o) { csv::write_curve(o, curve); });
    result.artifacts.push_back("curve.csv");
    out << "argmax theta = " << csv::format(opt.theta) << " (grid step "
        << csv::format(opt.resolution) << ")\n";
    if (opt.boundary) result.warnings.push_back("curve argmax on the grid boundary; widen the grid");
    return result;
}

Outcome cmd_learn(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const std::size_t t_len = cfg.t_len ? cfg.t_len : 100000;
    const auto path = simulate(cfg.spec, t_len, cfg.seed);
    const auto traj = run(path, cfg.learn());
    write_atomic(dir / "trajectory.csv", [&](std::ostream& o) { csv::write_trajectory(o, traj); });
    out << "final theta1 = " << csv::format(traj.theta1.back());
    if (!traj.theta2.empty()) out << ", theta2 = " << csv::format(traj.theta2.back());
    out << " (K = " << csv::format(traj.k) << ")\n";
    Outcome result{{"trajectory.csv"}, {}};
    if (traj.degenerate_scale)
        result.warnings.push_back("zero-variance path: scaling fell back to K = 1");
    return result;
}

Outcome cmd_converge(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const auto result = run_convergence(cfg.experiment(50000));
    Outcome outcome{{"mse.csv"}, result.warnings};
    write_atomic(dir / "mse.csv", [&](std::ostream& o) { csv::write_mse(o, result.series); });
    if (cfg.dump_trajectories) {
        fs::create_directories(dir / "trajectories");
        for (std::size_t i = 0; i < result.trajectories.size(); ++i) {
            std::ostringstream name;
            name << "trajectories/realization_" << std::setw(4) << std::setfill('0') << i << ".csv";
            write_atomic(dir / name.str(),
                         [&](std::ostream& o) { csv::write_trajectory(o, result.trajectories[i]); });
            outcome.artifacts.push_back(name.str());
        }
    }
    out << "theta* = " << csv::format(result.theta_star.theta1);
    if (result.theta_star.theta2) out << ", " << csv::format(*result.theta_star.theta2);
    out << "\nfinal MSE = " << csv::format(result.series.mse.back()) << " at t = "
        << result.series.t.back() << "\n";
    try {
        out << "tail power-law slope = " << csv::format(fit_power_law(result.series)) << "\n";
    } catch (const std::exception& e) {
        outcome.warnings.push_back(std::string("power-law fit skipped: ") + e.what());
    }
    return outcome;
}

Outcome cmd_table(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const auto table = run_scaling_table(cfg.table(100000));
    write_atomic(dir / "table.csv", [&](std::ostream& o) { csv::write_table(o, table); });
    for (const auto& r : table.rows)
        out << std::left << std::setw(6) << r.dynamics << std::setw(10) << r.dataset << std::setw(8)
            << to_string(r.mode) << csv::format(r.mse_at_t) << "\n";
    return {{"table.csv"}, table.warnings};
}

using Command = Outcome (*)(const RunConfig&, const fs::path&, std::ostream&);

int execute(const std::string& name, Command command, const CommonOptions& opts,
            std::ostream& out, std::ostream& err) {
    json doc;
    fs::path out_dir = opts.out;
    if (!opts.from_manifest.empty()) {
        const auto manifest = read_json_file(opts.from_manifest);
        if (!manifest.contains("command") || !manifest.contains("config"))
            throw ConfigError("", "'" + opts.from_manifest + "' is not a run manifest");
        if (manifest.at("command") != name)
            throw ConfigError("command", "manifest was written by '" +
                                             manifest.at("command").get<std::string>() + "'");
        doc = manifest.at("config");
        if (out_dir.empty()) out_dir = fs::path(opts.from_manifest).parent_path();
    } else if (!opts.config.empty()) {
        doc = read_json_file(opts.config);
    } else {
        doc = json::object();
    }
    if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
    if (opts.seed) doc["seed"] = *opts.seed;
    if (opts.workers) doc["workers"] = *opts.workers;
    if (out_dir.empty()) throw ConfigError("--out", "an output directory is required");

    const RunConfig cfg = parse_config(doc);
    fs::create_directories(out_dir);

    const auto start = std::chrono::steady_clock::now();
    const Outcome outcome = command(cfg, out_dir, out);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    json manifest{{"tool", "kwt"},
                  {"version", version},
                  {"command", name},
                  {"config", to_json(cfg)},
                  {"base_seed", cfg.seed},
                  {"artifacts", outcome.artifacts},
                  {"warnings", outcome.warnings},
                  {"finished_at", utc_now()},
                  {"wall_clock_seconds", elapsed.count()}};
    write_atomic(out_dir / "manifest.json", [&](std::ostream& o) { o << manifest.dump(2) << "\n"; });

    for (const auto& w : outcome.warnings) err << "warning: " << w << "\n";
    if (opts.strict && !outcome.warnings.empty()) return strict_warning;
    return success;
}

void add_common(CLI::App* sub, CommonOptions& opts) {
    sub->add_option("--config", opts.config, "JSON configuration file");
    sub->add_option("--out", opts.out, "output directory");
    sub->add_option("--seed", opts.seed, "base seed (overrides the config)");
    sub->add_option("--workers", opts.workers, "worker threads (output is independent of it)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--from-manifest", opts.from_manifest, "re-run from a manifest.json");
    sub->add_flag("--strict", opts.strict, "exit with code 4 when a warning is raised");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kiefer-Wolfowitz threshold-strategy learner and experiment runner", "kwt"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version);

    CommonOptions opts;
    struct Entry {
        const char* name;
        const char* help;
        Command command;
    };
    const Entry entries[] = {
        {"simulate", "simulate a return path -> path.csv", cmd_simulate},
        {"hill", "Monte-Carlo growth curve theta -> g(theta) -> curve.csv", cmd_hill},
        {"learn", "run the learner on one path -> trajectory.csv", cmd_learn},
        {"converge", "MSE convergence over realizations -> mse.csv", cmd_converge},
        {"table", "final MSE per dynamics/dataset/scaling -> table.csv", cmd_table},
    };
    std::vector<std::pair<CLI::App*, const Entry*>> subs;
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, opts);
        subs.emplace_back(sub, &e);
    }

    double p = 0.0, q = 0.0;
    bool strict_schedule = false;
    auto* validate_cmd = app.add_subcommand("validate-schedule", "check a_t = K t^-p, c_t = K t^-q");
    validate_cmd->add_option("p", p, "gain exponent")->required();
    validate_cmd->add_option("q", q, "width exponent")->required();
    validate_cmd->add_flag("--strict", strict_schedule, "accepted for symmetry; no effect");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        // --help / --version
        std::ostringstream help_out, help_err;
        app.exit(e, help_out, help_err);
        out << help_out.str() << help_err.str();
        return success;
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, eo;
        app.exit(e, o, eo);
        err << o.str() << eo.str();
        return config_error;
    }

    try {
        if (validate_cmd->parsed()) {
            const auto report = validate_schedule(p, q);
            out << report.describe();
            return report.all_satisfied() ? success : check_failed;
        }
        for (const auto& [sub, entry] : subs)
            if (sub->parsed()) return execute(entry->name, entry->command, opts, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return runtime_failure;
    }
    return config_error;
}

}  // namespace kwt::cli
