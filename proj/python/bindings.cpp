#include <algorithm>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kwt/dynamics.hpp"
#include "kwt/error.hpp"
#include "kwt/experiments.hpp"
#include "kwt/kw.hpp"
#include "kwt/oracle.hpp"
#include "kwt/strategy.hpp"

namespace py = pybind11;
using namespace kwt;

namespace {

py::array_t<double> as_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Theta make_theta(double theta1, std::optional<double> theta2, const std::string& direction) {
    Theta t;
    t.theta1 = theta1;
    t.theta2 = theta2;
    t.direction = parse_direction(direction);
    return t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Kiefer-Wolfowitz learning of log-optimal threshold trading strategies";

    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<StateError>(m, "StateError", PyExc_RuntimeError);
    py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_ArithmeticError);

    py::class_<Ar1Params>(m, "Ar1Params")
        .def(py::init([](double mu, double alpha, double sigma) { return Ar1Params{mu, alpha, sigma}; }),
             py::arg("mu"), py::arg("alpha"), py::arg("sigma"))
        .def_readwrite("mu", &Ar1Params::mu)
        .def_readwrite("alpha", &Ar1Params::alpha)
        .def_readwrite("sigma", &Ar1Params::sigma);

    py::class_<MaParams>(m, "MaParams")
        .def(py::init([](double mu, double b0, double b, std::size_t lags) {
                 return MaParams{mu, b0, b, lags};
             }),
             py::arg("mu"), py::arg("b0"), py::arg("b"), py::arg("lags") = 1000)
        .def_readwrite("mu", &MaParams::mu)
        .def_readwrite("b0", &MaParams::b0)
        .def_readwrite("b", &MaParams::b)
        .def_readwrite("lags", &MaParams::lags);

    py::class_<DgsvParams>(m, "DgsvParams")
        .def(py::init([](double mu, double alpha, double sigma, double rho, double b0, double b,
                         std::size_t lags) { return DgsvParams{mu, alpha, sigma, rho, b0, b, lags}; }),
             py::arg("mu"), py::arg("alpha"), py::arg("sigma"), py::arg("rho"), py::arg("b0"),
             py::arg("b"), py::arg("lags") = 1000)
        .def_readwrite("mu", &DgsvParams::mu)
        .def_readwrite("alpha", &DgsvParams::alpha)
        .def_readwrite("sigma", &DgsvParams::sigma)
        .def_readwrite("rho", &DgsvParams::rho)
        .def_readwrite("b0", &DgsvParams::b0)
        .def_readwrite("b", &DgsvParams::b)
        .def_readwrite("lags", &DgsvParams::lags);

    py::class_<ReturnPath>(m, "ReturnPath")
        .def_property_readonly("h", [](const ReturnPath& p) { return as_array(p.h); })
        .def_property_readonly("eps", [](const ReturnPath& p) { return as_array(p.eps); })
        .def_property_readonly("eta", [](const ReturnPath& p) { return as_array(p.eta); })
        .def_property_readonly("nu", [](const ReturnPath& p) { return as_array(p.nu); })
        .def_property_readonly("log_vol", [](const ReturnPath& p) { return as_array(p.log_vol); })
        .def_readonly("seed", &ReturnPath::seed)
        .def("__len__", &ReturnPath::size);

    m.def("ma_coefficients", &ma_coefficients, py::arg("b0"), py::arg("b"), py::arg("lags"));
    m.def("stationary_moments_ar1", [](const Ar1Params& p) {
        const auto mo = stationary_moments_ar1(p);
        return py::make_tuple(mo.mean, mo.variance);
    });
    m.def("simulate", &simulate, py::arg("spec"), py::arg("t_len"), py::arg("seed"));

    m.def(
        "realized_growth",
        [](const ReturnPath& path, double theta1, std::optional<double> theta2,
           const std::string& direction) {
            return realized_growth(path, make_theta(theta1, theta2, direction));
        },
        py::arg("path"), py::arg("theta1"), py::arg("theta2") = py::none(),
        py::arg("direction") = "above");
    m.def(
        "wealth_path",
        [](const ReturnPath& path, double theta1, std::optional<double> theta2,
           const std::string& direction) {
            return as_array(wealth_path(path, make_theta(theta1, theta2, direction)));
        },
        py::arg("path"), py::arg("theta1"), py::arg("theta2") = py::none(),
        py::arg("direction") = "above");

    m.def(
        "validate_schedule",
        [](double p, double q) {
            const auto r = validate_schedule(p, q);
            py::dict d;
            d["all_satisfied"] = r.all_satisfied();
            d["failed"] = r.failed_conditions();
            d["report"] = r.describe();
            return d;
        },
        py::arg("p"), py::arg("q"));

    m.def(
        "learn",
        [](const ReturnPath& path, const std::string& kind, const std::string& direction,
           double p, double q, const std::string& scaling, const std::string& origin) {
            LearnConfig cfg;
            cfg.kind = parse_strategy_kind(kind);
            cfg.direction = parse_direction(direction);
            cfg.schedule1 = cfg.schedule2 = StepSchedule{1.0, p, q};
            cfg.mode = parse_scaling_mode(scaling);
            cfg.origin = parse_counter_origin(origin);
            const auto traj = run(path, cfg);
            py::dict d;
            d["theta1"] = as_array(traj.theta1);
            d["theta2"] = as_array(traj.theta2);
            d["k"] = traj.k;
            return d;
        },
        py::arg("path"), py::arg("kind") = "univariate", py::arg("direction") = "above",
        py::arg("p") = 1.0, py::arg("q") = 1.0 / 3.0, py::arg("scaling") = "none",
        py::arg("origin") = "time_index");

    m.def("optimal_theta_ar1", [](double mu, double alpha) {
        const auto o = optimal_theta_ar1(mu, alpha);
        return py::make_tuple(o.theta, to_string(o.direction));
    });

    m.def(
        "mc_growth_curve",
        [](const DynamicsSpec& spec, std::size_t n_paths, std::size_t t_len, std::uint64_t seed,
           std::size_t grid_size, const std::string& direction) {
            const auto c = mc_growth_curve(spec, McSettings{n_paths, t_len, seed, 1}, grid_size,
                                           parse_direction(direction));
            const auto opt = mc_optimal_theta(c);
            py::dict d;
            d["theta"] = as_array(c.grid);
            d["g_hat"] = as_array(c.g_hat);
            d["se"] = as_array(c.se);
            d["argmax"] = opt.theta;
            d["boundary"] = opt.boundary;
            return d;
        },
        py::arg("spec"), py::arg("n_paths") = 200, py::arg("t_len") = 10000, py::arg("seed") = 1,
        py::arg("grid_size") = 201, py::arg("direction") = "above");

    m.def(
        "run_convergence",
        [](const DynamicsSpec& spec, std::size_t n_realizations, std::size_t t_len,
           std::uint64_t seed, const std::string& scaling, unsigned workers) {
            ExperimentConfig cfg;
            cfg.spec = spec;
            cfg.learn.direction = default_direction(spec);
            cfg.learn.mode = parse_scaling_mode(scaling);
            cfg.n_realizations = n_realizations;
            cfg.t_len = t_len;
            cfg.base_seed = seed;
            cfg.workers = workers;
            const auto r = run_convergence(cfg);
            py::dict d;
            d["t"] = r.series.t;
            d["mse"] = as_array(r.series.mse);
            d["theta_star"] = r.series.theta_star;
            return d;
        },
        py::arg("spec"), py::arg("n_realizations") = 25, py::arg("t_len") = 50000,
        py::arg("seed") = 1, py::arg("scaling") = "none", py::arg("workers") = 1);

    m.def(
        "fit_power_law",
        [](std::vector<std::size_t> t, std::vector<double> mse, double tail_fraction) {
            MseSeries s;
            s.t = std::move(t);
            s.mse = std::move(mse);
            return fit_power_law(s, tail_fraction);
        },
        py::arg("t"), py::arg("mse"), py::arg("tail_fraction") = 0.5);

    m.def("dataset_preset", [](const std::string& name) {
        const auto p = dataset_preset(name);
        py::dict d;
        d["mu"] = p.mu;
        d["alpha"] = p.alpha;
        d["sigma"] = p.sigma;
        d["rho"] = p.rho;
        d["b0"] = p.b0;
        d["b"] = p.b;
        return d;
    });
}
