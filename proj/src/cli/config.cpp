#include "kwt/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "kwt/error.hpp"

namespace kwt::cli {
namespace {

using nlohmann::json;

std::string join_path(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

void only_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.contains(key)) throw ConfigError(join_path(path, key), "unknown key");
}

std::string type_name(const json& v) { return v.type_name(); }

double number(const json& obj, const std::string& path, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(join_path(path, key), "expected a number, got " + type_name(v));
    return v.get<double>();
}

std::uint64_t unsigned_int(const json& obj, const std::string& path, const std::string& key,
                           std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    const bool non_negative =
        v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
    if (!non_negative)
        throw ConfigError(join_path(path, key),
                          "expected a non-negative integer, got " + v.dump());
    return v.get<std::uint64_t>();
}

std::string text(const json& obj, const std::string& path, const std::string& key,
                 const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(join_path(path, key), "expected a string, got " + type_name(v));
    return v.get<std::string>();
}

bool boolean(const json& obj, const std::string& path, const std::string& key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError(join_path(path, key), "expected true or false");
    return v.get<bool>();
}

std::optional<Interval> interval(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(join_path(path, key), "expected [lo, hi]");
    Interval r{v[0].get<double>(), v[1].get<double>()};
    if (!(r.lo < r.hi)) throw ConfigError(join_path(path, key), "expected lo < hi");
    return r;
}

std::vector<std::string> strings(const json& obj, const std::string& path, const std::string& key,
                                 std::vector<std::string> fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_array()) throw ConfigError(join_path(path, key), "expected a list of strings");
    std::vector<std::string> out;
    for (const auto& item : v) {
        if (!item.is_string()) throw ConfigError(join_path(path, key), "expected a list of strings");
        out.push_back(item.get<std::string>());
    }
    if (out.empty()) throw ConfigError(join_path(path, key), "list must not be empty");
    return out;
}

// Run a parser for an enum-like string, reporting failures against the field.
template <class Fn>
auto parse_field(const std::string& field, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ParameterError& e) {
        throw ConfigError(field, e.what());
    }
}

const std::set<std::string> ar1_keys{"model", "preset", "mu", "alpha", "sigma"};
const std::set<std::string> ma_keys{"model", "preset", "mu", "b0", "b", "lags"};
const std::set<std::string> dgsv_keys{"model", "preset", "mu", "alpha", "sigma", "rho", "b0", "b", "lags"};

void parse_dynamics(const json& obj, RunConfig& cfg) {
    const std::string path = "dynamics";
    cfg.model = text(obj, path, "model", "ar1");
    if (cfg.model != "ar1" && cfg.model != "ma" && cfg.model != "dgsv")
        throw ConfigError("dynamics.model", "expected ar1, ma or dgsv, got '" + cfg.model + "'");
    only_keys(obj, path, cfg.model == "ar1" ? ar1_keys : cfg.model == "ma" ? ma_keys : dgsv_keys);
    if (obj.contains("preset")) cfg.preset = text(obj, path, "preset", "");
    const auto base = parse_field("dynamics.preset",
                                  [&] { return dataset_preset(cfg.preset.value_or("dataset1")); });
    const auto lags =
        static_cast<std::size_t>(unsigned_int(obj, path, "lags", 1000));

    if (cfg.model == "ar1") {
        Ar1Params p = base.ar1();
        p.mu = number(obj, path, "mu", p.mu);
        p.alpha = number(obj, path, "alpha", p.alpha);
        p.sigma = number(obj, path, "sigma", p.sigma);
        cfg.spec = p;
    } else if (cfg.model == "ma") {
        MaParams p = base.ma(lags);
        p.mu = number(obj, path, "mu", p.mu);
        p.b0 = number(obj, path, "b0", p.b0);
        p.b = number(obj, path, "b", p.b);
        cfg.spec = p;
    } else {
        DgsvParams p = base.dgsv(lags);
        p.mu = number(obj, path, "mu", p.mu);
        p.alpha = number(obj, path, "alpha", p.alpha);
        p.sigma = number(obj, path, "sigma", p.sigma);
        p.rho = number(obj, path, "rho", p.rho);
        p.b0 = number(obj, path, "b0", p.b0);
        p.b = number(obj, path, "b", p.b);
        cfg.spec = p;
    }
    parse_field(path, [&] {
        validate(cfg.spec);
        return 0;
    });
}

StepSchedule parse_schedule(const json& obj, const std::string& path) {
    only_keys(obj, path, {"k", "p", "q"});
    StepSchedule s;
    s.k = number(obj, path, "k", s.k);
    s.p = number(obj, path, "p", s.p);
    s.q = number(obj, path, "q", s.q);
    if (!(s.k > 0.0)) throw ConfigError(join_path(path, "k"), "must be positive");
    return s;
}

void parse_oracle(const json& obj, RunConfig& cfg) {
    const std::string path = "oracle";
    only_keys(obj, path,
              {"grid_size", "paths", "t_len", "seed", "grid1_size", "grid2_size", "theta1_range",
               "theta2_range", "zoom_rounds"});
    auto& o = cfg.oracle;
    o.grid_size = unsigned_int(obj, path, "grid_size", o.grid_size);
    o.mc.n_paths = unsigned_int(obj, path, "paths", o.mc.n_paths);
    o.mc.t_len = unsigned_int(obj, path, "t_len", o.mc.t_len);
    if (obj.contains("seed") && !obj.at("seed").is_null())
        o.seed = unsigned_int(obj, path, "seed", 0);
    o.surface.grid1_size = unsigned_int(obj, path, "grid1_size", o.surface.grid1_size);
    o.surface.grid2_size = unsigned_int(obj, path, "grid2_size", o.surface.grid2_size);
    o.surface.theta1_range = interval(obj, path, "theta1_range");
    o.surface.theta2_range = interval(obj, path, "theta2_range");
    o.surface.zoom_rounds = unsigned_int(obj, path, "zoom_rounds", o.surface.zoom_rounds);
    if (o.grid_size < 3) throw ConfigError("oracle.grid_size", "must be at least 3");
    if (o.mc.n_paths < 1) throw ConfigError("oracle.paths", "must be at least 1");
    if (o.mc.t_len < 2) throw ConfigError("oracle.t_len", "must be at least 2");
    if (o.surface.grid1_size < 3) throw ConfigError("oracle.grid1_size", "must be at least 3");
    if (o.surface.grid2_size < 3) throw ConfigError("oracle.grid2_size", "must be at least 3");
}

void parse_table(const json& obj, RunConfig& cfg) {
    const std::string path = "table";
    only_keys(obj, path, {"dynamics", "datasets", "modes"});
    cfg.table_dynamics = strings(obj, path, "dynamics", cfg.table_dynamics);
    for (const auto& d : cfg.table_dynamics)
        if (d != "ar1" && d != "dgsv") throw ConfigError("table.dynamics", "expected ar1 or dgsv, got '" + d + "'");
    cfg.table_datasets = strings(obj, path, "datasets", cfg.table_datasets);
    for (const auto& d : cfg.table_datasets)
        parse_field("table.datasets", [&] { return dataset_preset(d); });
    if (obj.contains("modes")) {
        cfg.table_modes.clear();
        for (const auto& m : strings(obj, path, "modes", {}))
            cfg.table_modes.push_back(parse_field("table.modes", [&] { return parse_scaling_mode(m); }));
    }
}

}  // namespace

Direction RunConfig::effective_direction() const {
    return direction.value_or(default_direction(spec));
}

LearnConfig RunConfig::learn() const {
    LearnConfig l;
    l.kind = kind;
    l.direction = effective_direction();
    l.schedule1 = schedule;
    l.schedule2 = schedule2;
    l.mode = scaling;
    l.origin = origin;
    l.theta2_box = theta2_box;
    return l;
}

ExperimentConfig RunConfig::experiment(std::size_t default_t_len) const {
    ExperimentConfig e;
    e.spec = spec;
    e.learn = learn();
    e.n_realizations = realizations;
    e.t_len = t_len ? t_len : default_t_len;
    e.base_seed = seed;
    e.workers = workers;
    e.theta_star_source = theta_star;
    e.oracle = oracle;
    e.max_points = max_points;
    e.keep_trajectories = dump_trajectories;
    return e;
}

TableConfig RunConfig::table(std::size_t default_t_len) const {
    TableConfig t;
    t.dynamics = table_dynamics;
    t.datasets = table_datasets;
    t.modes = table_modes;
    t.t_len = t_len ? t_len : default_t_len;
    t.n_realizations = realizations;
    t.base_seed = seed;
    t.workers = workers;
    if (const auto* p = std::get_if<DgsvParams>(&spec)) t.lags = p->lags;
    t.schedule = schedule;
    t.origin = origin;
    t.oracle = oracle;
    return t;
}

RunConfig parse_config(const json& doc) {
    only_keys(doc, "",
              {"dynamics", "t_len", "seed", "workers", "strategy", "schedule", "schedule2", "scaling",
               "counter_origin", "theta2_box", "realizations", "theta_star", "oracle",
               "max_points", "dump_trajectories", "table"});
    RunConfig cfg;
    if (doc.contains("dynamics")) parse_dynamics(doc.at("dynamics"), cfg);
    else parse_dynamics(json::object(), cfg);

    cfg.t_len = unsigned_int(doc, "", "t_len", 0);
    cfg.seed = unsigned_int(doc, "", "seed", cfg.seed);
    cfg.workers = static_cast<unsigned>(unsigned_int(doc, "", "workers", cfg.workers));
    if (cfg.workers < 1) throw ConfigError("workers", "must be at least 1");

    if (doc.contains("strategy")) {
        const auto& s = doc.at("strategy");
        only_keys(s, "strategy", {"kind", "direction"});
        const auto kind = text(s, "strategy", "kind", "univariate");
        cfg.kind = parse_field("strategy.kind", [&] { return parse_strategy_kind(kind); });
        const auto dir = text(s, "strategy", "direction", "auto");
        if (dir != "auto")
            cfg.direction = parse_field("strategy.direction", [&] { return parse_direction(dir); });
    }
    if (cfg.kind == StrategyKind::volatility && cfg.model != "dgsv")
        throw ConfigError("strategy.kind", "the volatility strategy needs dgsv dynamics");

    if (doc.contains("schedule")) cfg.schedule = parse_schedule(doc.at("schedule"), "schedule");
    if (doc.contains("schedule2")) cfg.schedule2 = parse_schedule(doc.at("schedule2"), "schedule2");
    const auto scaling = text(doc, "", "scaling", "none");
    cfg.scaling = parse_field("scaling", [&] { return parse_scaling_mode(scaling); });
    const auto origin = text(doc, "", "counter_origin", "time_index");
    cfg.origin = parse_field("counter_origin", [&] { return parse_counter_origin(origin); });
    if (auto box = interval(doc, "", "theta2_box")) cfg.theta2_box = *box;

    cfg.realizations = unsigned_int(doc, "", "realizations", cfg.realizations);
    if (cfg.realizations < 1) throw ConfigError("realizations", "must be at least 1");
    const auto star = text(doc, "", "theta_star", "auto");
    if (star != "auto")
        cfg.theta_star = parse_field("theta_star", [&] { return parse_theta_star_source(star); });
    if (doc.contains("oracle")) parse_oracle(doc.at("oracle"), cfg);
    cfg.max_points = unsigned_int(doc, "", "max_points", cfg.max_points);
    if (cfg.max_points < 2) throw ConfigError("max_points", "must be at least 2");
    cfg.dump_trajectories = boolean(doc, "", "dump_trajectories", false);
    if (doc.contains("table")) parse_table(doc.at("table"), cfg);
    return cfg;
}

nlohmann::json to_json(const RunConfig& c) {
    json dyn;
    dyn["model"] = c.model;
    if (c.preset) dyn["preset"] = *c.preset;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            dyn["mu"] = p.mu;
            if constexpr (std::is_same_v<T, Ar1Params>) {
                dyn["alpha"] = p.alpha;
                dyn["sigma"] = p.sigma;
            } else if constexpr (std::is_same_v<T, MaParams>) {
                dyn["b0"] = p.b0;
                dyn["b"] = p.b;
                dyn["lags"] = p.lags;
            } else {
                dyn["alpha"] = p.alpha;
                dyn["sigma"] = p.sigma;
                dyn["rho"] = p.rho;
                dyn["b0"] = p.b0;
                dyn["b"] = p.b;
                dyn["lags"] = p.lags;
            }
        },
        c.spec);

    auto schedule = [](const StepSchedule& s) { return json{{"k", s.k}, {"p", s.p}, {"q", s.q}}; };
    json oracle{{"grid_size", c.oracle.grid_size},
                {"paths", c.oracle.mc.n_paths},
                {"t_len", c.oracle.mc.t_len},
                {"grid1_size", c.oracle.surface.grid1_size},
                {"grid2_size", c.oracle.surface.grid2_size},
                {"zoom_rounds", c.oracle.surface.zoom_rounds}};
    if (c.oracle.seed) oracle["seed"] = *c.oracle.seed;
    if (auto r = c.oracle.surface.theta1_range) oracle["theta1_range"] = {r->lo, r->hi};
    if (auto r = c.oracle.surface.theta2_range) oracle["theta2_range"] = {r->lo, r->hi};

    json modes = json::array();
    for (auto m : c.table_modes) modes.push_back(to_string(m));

    json doc;
    doc["dynamics"] = dyn;
    if (c.t_len) doc["t_len"] = c.t_len;
    doc["seed"] = c.seed;
    doc["workers"] = c.workers;
    doc["strategy"] = {{"kind", to_string(c.kind)},
                       {"direction", c.direction ? to_string(*c.direction) : "auto"}};
    doc["schedule"] = schedule(c.schedule);
    doc["schedule2"] = schedule(c.schedule2);
    doc["scaling"] = to_string(c.scaling);
    doc["counter_origin"] = to_string(c.origin);
    doc["theta2_box"] = {c.theta2_box.lo, c.theta2_box.hi};
    doc["realizations"] = c.realizations;
    doc["theta_star"] = c.theta_star ? to_string(*c.theta_star) : "auto";
    doc["oracle"] = oracle;
    doc["max_points"] = c.max_points;
    doc["dump_trajectories"] = c.dump_trajectories;
    doc["table"] = {{"dynamics", c.table_dynamics}, {"datasets", c.table_datasets}, {"modes", modes}};
    return doc;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", path + ": " + e.what());
    }
}

}  // namespace kwt::cli
