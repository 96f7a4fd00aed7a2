#include "kwt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "kwt/error.hpp"
#include "kwt/parallel.hpp"
#include "kwt/random.hpp"
#include "kwt/stats.hpp"

namespace kwt {
namespace {

void check_mc(const McSettings& mc) {
    if (mc.n_paths < 1) throw ParameterError("n_paths must be at least 1");
    if (mc.t_len < 2) throw ParameterError("t_len must be at least 2");
}

std::vector<ReturnPath> simulate_paths(const DynamicsSpec& spec, const McSettings& mc) {
    validate(spec);
    std::vector<ReturnPath> paths(mc.n_paths);
    parallel_for(mc.n_paths, mc.workers, [&](std::size_t i) {
        paths[i] = simulate(spec, mc.t_len, derive_seed(mc.seed, i));
    });
    return paths;
}

Interval pooled_range(const std::vector<ReturnPath>& paths) {
    std::vector<double> pooled;
    pooled.reserve(paths.size() * paths.front().size());
    for (const auto& p : paths) pooled.insert(pooled.end(), p.h.begin(), p.h.end());
    return {stats::quantile(pooled, 0.01), stats::quantile(pooled, 0.99)};
}

std::vector<double> linspace(Interval range, std::size_t n) {
    std::vector<double> grid(n);
    const double step = (range.hi - range.lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) grid[i] = range.lo + step * static_cast<double>(i);
    grid.back() = range.hi;
    return grid;
}

// Growth of the threshold rule at every grid value on one path, given the
// signal x[t] observed before return y[t]. Adds into `out` (size grid).
void accumulate_curve(std::vector<std::pair<double, double>>& pairs,
                      const std::vector<double>& grid, Direction direction, double* out) {
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t n = pairs.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + pairs[i].second;

    auto key_less = [](double v, const auto& p) { return v < p.first; };
    auto less_key = [](const auto& p, double v) { return p.first < v; };
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double sum;
        if (direction == Direction::above) {
            // strictly greater than theta
            const auto it = std::upper_bound(pairs.begin(), pairs.end(), grid[g], key_less);
            sum = prefix[n] - prefix[static_cast<std::size_t>(it - pairs.begin())];
        } else {
            const auto it = std::lower_bound(pairs.begin(), pairs.end(), grid[g], less_key);
            sum = prefix[static_cast<std::size_t>(it - pairs.begin())];
        }
        out[g] = sum / static_cast<double>(n);
    }
}

// Mean and standard error across paths, reduced in path order.
void summarize(const std::vector<std::vector<double>>& per_path, std::vector<double>& mean,
               std::vector<double>& se) {
    const std::size_t cells = per_path.front().size();
    const double n = static_cast<double>(per_path.size());
    mean.assign(cells, 0.0);
    se.assign(cells, 0.0);
    for (const auto& row : per_path)
        for (std::size_t c = 0; c < cells; ++c) mean[c] += row[c];
    for (auto& m : mean) m /= n;
    if (per_path.size() < 2) return;
    for (const auto& row : per_path)
        for (std::size_t c = 0; c < cells; ++c) se[c] += (row[c] - mean[c]) * (row[c] - mean[c]);
    for (auto& s : se) s = std::sqrt(s / (n - 1.0) / n);
}

// Offset of the vertex of the parabola through (-1, 0, +1) steps, within one step.
double parabola_offset(double left, double mid, double right) {
    const double curvature = left - 2.0 * mid + right;
    if (!(curvature < 0.0)) return 0.0;
    return std::clamp(0.5 * (left - right) / curvature, -1.0, 1.0);
}

GrowthSurface evaluate_surface(const std::vector<ReturnPath>& paths, std::vector<double> grid1,
                               std::vector<double> grid2, Direction direction,
                               unsigned workers) {
    const std::size_t n1 = grid1.size(), n2 = grid2.size();
    std::vector<std::vector<double>> per_path(paths.size());
    parallel_for(paths.size(), workers, [&](std::size_t i) {
        const auto& path = paths[i];
        const std::size_t n = path.size() - 1;
        std::vector<double> vol(n);
        for (std::size_t t = 0; t < n; ++t) vol[t] = std::exp(path.nu[t + 1]);
        std::vector<double> row(n1 * n2);
        std::vector<std::pair<double, double>> pairs(n);
        for (std::size_t j = 0; j < n2; ++j) {
            for (std::size_t t = 0; t < n; ++t)
                pairs[t] = {path.h[t] + grid2[j] * vol[t], path.h[t + 1]};
            accumulate_curve(pairs, grid1, direction, row.data() + j * n1);
        }
        per_path[i] = std::move(row);
    });
    GrowthSurface s;
    s.grid1 = std::move(grid1);
    s.grid2 = std::move(grid2);
    s.n_samples = paths.size();
    summarize(per_path, s.g_hat, s.se);
    return s;
}

std::pair<std::size_t, std::size_t> surface_argmax(const GrowthSurface& s) {
    const auto it = std::max_element(s.g_hat.begin(), s.g_hat.end());
    const auto flat = static_cast<std::size_t>(it - s.g_hat.begin());
    return {flat % s.grid1.size(), flat / s.grid1.size()};
}

void check_surface_settings(const SurfaceSettings& settings) {
    if (settings.grid1_size < 3 || settings.grid2_size < 3)
        throw ParameterError("surface grids need at least 3 points per axis");
    for (const auto& r : {settings.theta1_range, settings.theta2_range})
        if (r && !(r->lo < r->hi)) throw ParameterError("surface range must satisfy lo < hi");
}

GrowthSurface first_surface(const std::vector<ReturnPath>& paths, const SurfaceSettings& settings,
                            Direction direction, unsigned workers) {
    const Interval h_range = pooled_range(paths);
    const double width = h_range.hi - h_range.lo;
    const Interval r1 = settings.theta1_range.value_or(h_range);
    const Interval r2 = settings.theta2_range.value_or(Interval{-width, width});
    return evaluate_surface(paths, linspace(r1, settings.grid1_size),
                            linspace(r2, settings.grid2_size), direction, workers);
}

}  // namespace

ThresholdOptimum optimal_theta_ar1(double mu, double alpha) {
    if (alpha == 0.0)
        throw ParameterError("alpha = 0: the conditional mean is constant and has no root");
    return {-mu / alpha, alpha > 0.0 ? Direction::above : Direction::below};
}

double phi_ar1(double x, const Ar1Params& p) { return p.mu + p.alpha * x; }

GrowthCurve mc_growth_curve(const DynamicsSpec& spec, const McSettings& mc,
                            std::size_t grid_size, Direction direction) {
    if (grid_size < 3) throw ParameterError("grid_size must be at least 3");
    check_mc(mc);
    const auto paths = simulate_paths(spec, mc);

    GrowthCurve curve;
    curve.grid = linspace(pooled_range(paths), grid_size);
    curve.n_samples = paths.size();
    std::vector<std::vector<double>> per_path(paths.size());
    parallel_for(paths.size(), mc.workers, [&](std::size_t i) {
        const auto& h = paths[i].h;
        std::vector<std::pair<double, double>> pairs(h.size() - 1);
        for (std::size_t t = 0; t + 1 < h.size(); ++t) pairs[t] = {h[t], h[t + 1]};
        std::vector<double> row(grid_size);
        accumulate_curve(pairs, curve.grid, direction, row.data());
        per_path[i] = std::move(row);
    });
    summarize(per_path, curve.g_hat, curve.se);
    return curve;
}

CurveOptimum mc_optimal_theta(const GrowthCurve& curve) {
    const std::size_t n = curve.grid.size();
    if (n < 3 || curve.g_hat.size() != n) throw ParameterError("curve needs at least 3 points");
    const auto [lo, hi] = std::minmax_element(curve.g_hat.begin(), curve.g_hat.end());
    if (*lo == *hi) throw DegenerateError("flat growth curve has no optimum");

    CurveOptimum opt;
    opt.argmax = static_cast<std::size_t>(hi - curve.g_hat.begin());
    opt.resolution = curve.grid[1] - curve.grid[0];
    opt.theta = curve.grid[opt.argmax];
    opt.boundary = opt.argmax == 0 || opt.argmax == n - 1;
    if (!opt.boundary) {
        const auto i = opt.argmax;
        opt.theta += opt.resolution *
                     parabola_offset(curve.g_hat[i - 1], curve.g_hat[i], curve.g_hat[i + 1]);
    }
    return opt;
}

GrowthSurface mc_growth_surface(const DynamicsSpec& spec, const McSettings& mc,
                                const SurfaceSettings& settings, Direction direction) {
    if (!std::holds_alternative<DgsvParams>(spec))
        throw ParameterError("the volatility strategy needs DGSV dynamics");
    check_surface_settings(settings);
    check_mc(mc);
    const auto paths = simulate_paths(spec, mc);
    return first_surface(paths, settings, direction, mc.workers);
}

SurfaceOptimum mc_optimal_theta(const GrowthSurface& s) {
    const std::size_t n1 = s.grid1.size(), n2 = s.grid2.size();
    if (n1 < 3 || n2 < 3) throw ParameterError("surface needs at least 3 points per axis");
    const auto [i1, i2] = surface_argmax(s);

    SurfaceOptimum opt;
    opt.resolution1 = s.grid1[1] - s.grid1[0];
    opt.resolution2 = s.grid2[1] - s.grid2[0];
    opt.boundary = i1 == 0 || i1 == n1 - 1 || i2 == 0 || i2 == n2 - 1;
    double theta1 = s.grid1[i1];
    double theta2 = s.grid2[i2];
    if (i1 > 0 && i1 + 1 < n1)
        theta1 += opt.resolution1 * parabola_offset(s.at(i1 - 1, i2), s.at(i1, i2), s.at(i1 + 1, i2));
    if (i2 > 0 && i2 + 1 < n2)
        theta2 += opt.resolution2 * parabola_offset(s.at(i1, i2 - 1), s.at(i1, i2), s.at(i1, i2 + 1));
    opt.theta.theta1 = theta1;
    opt.theta.theta2 = theta2;
    return opt;
}

VolatilityOracle mc_volatility_optimum(const DynamicsSpec& spec, const McSettings& mc,
                                       const SurfaceSettings& settings, Direction direction) {
    if (!std::holds_alternative<DgsvParams>(spec))
        throw ParameterError("the volatility strategy needs DGSV dynamics");
    check_surface_settings(settings);
    check_mc(mc);
    const auto paths = simulate_paths(spec, mc);

    VolatilityOracle out;
    out.surface = first_surface(paths, settings, direction, mc.workers);
    out.optimum = mc_optimal_theta(out.surface);
    for (std::size_t round = 0; round < settings.zoom_rounds && !out.optimum.boundary; ++round) {
        const auto [i1, i2] = surface_argmax(out.surface);
        const double c1 = out.surface.grid1[i1], c2 = out.surface.grid2[i2];
        const double w1 = 2.0 * out.optimum.resolution1, w2 = 2.0 * out.optimum.resolution2;
        out.surface = evaluate_surface(paths, linspace({c1 - w1, c1 + w1}, settings.grid1_size),
                                       linspace({c2 - w2, c2 + w2}, settings.grid2_size),
                                       direction, mc.workers);
        out.optimum = mc_optimal_theta(out.surface);
        // The zoomed window sits inside the coarse grid; its edges are not
        // a boundary of the search.
        out.optimum.boundary = false;
    }
    out.optimum.theta.direction = direction;
    return out;
}

std::vector<GradientEstimate> mc_gradient_check(const DynamicsSpec& spec, const Theta& theta,
                                                double delta, const McSettings& mc) {
    if (!(delta > 0.0)) throw ParameterError("delta must be positive");
    check_mc(mc);
    if (theta.theta2 && !std::holds_alternative<DgsvParams>(spec))
        throw ParameterError("the volatility strategy needs DGSV dynamics");
    const std::size_t dims = theta.theta2 ? 2 : 1;
    validate(spec);

    std::vector<std::vector<double>> per_path(mc.n_paths);
    parallel_for(mc.n_paths, mc.workers, [&](std::size_t i) {
        const auto path = simulate(spec, mc.t_len, derive_seed(mc.seed, i));
        std::vector<double> row(dims);
        for (std::size_t d = 0; d < dims; ++d) {
            Theta plus = theta, minus = theta;
            if (d == 0) {
                plus.theta1 += delta;
                minus.theta1 -= delta;
            } else {
                *plus.theta2 += delta;
                *minus.theta2 -= delta;
            }
            row[d] = (realized_growth(path, plus) - realized_growth(path, minus)) / (2.0 * delta);
        }
        per_path[i] = std::move(row);
    });
    std::vector<double> mean, se;
    summarize(per_path, mean, se);
    std::vector<GradientEstimate> out(dims);
    for (std::size_t d = 0; d < dims; ++d) out[d] = {mean[d], se[d]};
    return out;
}

}  // namespace kwt
