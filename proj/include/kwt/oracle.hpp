#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "kwt/dynamics.hpp"
#include "kwt/kw.hpp"
#include "kwt/strategy.hpp"

namespace kwt {

struct ThresholdOptimum {
    double theta = 0.0;
    Direction direction = Direction::above;
};

/// Root of phi(x) = mu + alpha x, with the buying side that makes it a maximum.
ThresholdOptimum optimal_theta_ar1(double mu, double alpha);

/// E[H_t | H_{t-1} = x] for AR(1).
double phi_ar1(double x, const Ar1Params& p);

/// Monte-Carlo sample sizes. Path i uses derive_seed(seed, i).
struct McSettings {
    std::size_t n_paths = 200;
    std::size_t t_len = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

/// theta -> g(theta) estimated on a grid spanning the pooled 1%-99% range of H.
struct GrowthCurve {
    std::vector<double> grid;
    std::vector<double> g_hat;
    std::vector<double> se;
    std::size_t n_samples = 0;
};

GrowthCurve mc_growth_curve(const DynamicsSpec& spec, const McSettings& mc,
                            std::size_t grid_size = 201, Direction direction = Direction::above);

struct CurveOptimum {
    double theta = 0.0;
    double resolution = 0.0;  // grid step
    std::size_t argmax = 0;
    bool boundary = false;  // argmax on the first or last grid point
};

/// Grid argmax, refined by the vertex of the parabola through it and its neighbours.
CurveOptimum mc_optimal_theta(const GrowthCurve& curve);

/// (theta1, theta2) -> g for the volatility strategy; g_hat[i2 * grid1.size() + i1].
struct GrowthSurface {
    std::vector<double> grid1;
    std::vector<double> grid2;
    std::vector<double> g_hat;
    std::vector<double> se;
    std::size_t n_samples = 0;

    double at(std::size_t i1, std::size_t i2) const { return g_hat[i2 * grid1.size() + i1]; }
};

struct SurfaceSettings {
    std::size_t grid1_size = 61;
    std::size_t grid2_size = 41;
    // Defaults: theta1 over the pooled 1%-99% range of H; theta2 over
    // [-w, w] with w the width of that range.
    std::optional<Interval> theta1_range;
    std::optional<Interval> theta2_range;
    // Regrid this many times around the current argmax (+-2 steps).
    std::size_t zoom_rounds = 1;
};

GrowthSurface mc_growth_surface(const DynamicsSpec& spec, const McSettings& mc,
                                const SurfaceSettings& settings = {},
                                Direction direction = Direction::above);

struct SurfaceOptimum {
    Theta theta;
    double resolution1 = 0.0;
    double resolution2 = 0.0;
    bool boundary = false;
};

SurfaceOptimum mc_optimal_theta(const GrowthSurface& surface);

/// Surface over the final zoom round, its refined optimum and the warning flag.
struct VolatilityOracle {
    GrowthSurface surface;
    SurfaceOptimum optimum;
};

VolatilityOracle mc_volatility_optimum(const DynamicsSpec& spec, const McSettings& mc,
                                       const SurfaceSettings& settings = {},
                                       Direction direction = Direction::above);

struct GradientEstimate {
    double value = 0.0;
    double se = 0.0;
};

/// Central differences (g(theta + delta e_i) - g(theta - delta e_i)) / (2 delta)
/// of realized growth, both sides evaluated on the same paths. One entry per
/// coordinate of theta.
std::vector<GradientEstimate> mc_gradient_check(const DynamicsSpec& spec, const Theta& theta,
                                                double delta, const McSettings& mc);

}  // namespace kwt
