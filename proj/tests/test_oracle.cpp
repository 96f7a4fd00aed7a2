#include <algorithm>
#include <cmath>
#include <string>

#include "doctest.h"
#include "kwt/error.hpp"
#include "kwt/experiments.hpp"
#include "kwt/oracle.hpp"
#include "kwt/random.hpp"
#include "test_support.hpp"

using namespace kwt;

namespace {

// Count interior local maxima of the 5-point moving average.
int smoothed_peaks(const std::vector<double>& g) {
    std::vector<double> s;
    for (std::size_t i = 2; i + 2 < g.size(); ++i)
        s.push_back((g[i - 2] + g[i - 1] + g[i] + g[i + 1] + g[i + 2]) / 5.0);
    int peaks = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const bool left = i == 0 || s[i] > s[i - 1];
        const bool right = i + 1 == s.size() || s[i] > s[i + 1];
        if (left && right) ++peaks;
    }
    return peaks;
}

// For DGSV, E[H_t | past] = mu + alpha H_{t-1} + sigma rho b0 e^{b0^2/2} e^{nu},
// so the volatility rule with theta1 = -mu/alpha and theta2 = kappa/alpha
// buys exactly when the conditional mean is positive.
Theta dgsv_bivariate_optimum(const DgsvParams& p) {
    const double kappa = p.sigma * p.rho * p.b0 * std::exp(0.5 * p.b0 * p.b0);
    return Theta{-p.mu / p.alpha, kappa / p.alpha, Direction::above};
}

}  // namespace

TEST_CASE("closed-form AR(1) threshold") {
    const auto d1 = optimal_theta_ar1(0.01, 0.5);
    CHECK(d1.theta == doctest::Approx(-0.02).epsilon(1e-15));
    CHECK(d1.direction == Direction::above);
    const auto d2 = optimal_theta_ar1(0.005, 0.2);
    CHECK(d2.theta == doctest::Approx(-0.025).epsilon(1e-15));
    CHECK(d2.direction == Direction::above);
    CHECK(optimal_theta_ar1(0.0, 0.3).theta == 0.0);
    CHECK(optimal_theta_ar1(0.0, -0.3).direction == Direction::below);
    CHECK_THROWS_AS(optimal_theta_ar1(0.01, 0.0), ParameterError);

    const Ar1Params p{0.01, 0.5, 0.05};
    CHECK(phi_ar1(-0.02, p) == 0.0);
    CHECK(phi_ar1(0.0, p) == 0.01);
    CHECK(phi_ar1(1.0, p) == doctest::Approx(0.51).epsilon(1e-15));
}

TEST_CASE("growth curve shape and consistency with realized growth") {
    const DynamicsSpec spec = dataset_preset("dataset1").ar1();
    const McSettings one{1, 2000, 9, 1};
    const auto curve = mc_growth_curve(spec, one, 7);
    REQUIRE(curve.grid.size() == 7);
    REQUIRE(curve.g_hat.size() == 7);
    REQUIRE(curve.se.size() == 7);
    CHECK(curve.n_samples == 1);
    CHECK(std::is_sorted(curve.grid.begin(), curve.grid.end()));
    CHECK(std::adjacent_find(curve.grid.begin(), curve.grid.end()) == curve.grid.end());

    const auto path = simulate(spec, one.t_len, derive_seed(one.seed, 0));
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        CHECK(curve.g_hat[i] ==
              doctest::Approx(realized_growth(path, Theta{curve.grid[i]})).epsilon(1e-12));

    const auto below = mc_growth_curve(spec, one, 7, Direction::below);
    for (std::size_t i = 0; i < below.grid.size(); ++i)
        CHECK(below.g_hat[i] ==
              doctest::Approx(realized_growth(path, Theta{below.grid[i], std::nullopt,
                                                          Direction::below}))
                  .epsilon(1e-12));

    CHECK_THROWS_AS(mc_growth_curve(spec, one, 2), ParameterError);
    CHECK_THROWS_AS(mc_growth_curve(spec, McSettings{0, 100, 1, 1}, 5), ParameterError);
}

TEST_CASE("growth curve is independent of the worker count") {
    const DynamicsSpec spec = dataset_preset("dataset2").dgsv(100);
    const auto a = mc_growth_curve(spec, McSettings{12, 1000, 4, 1}, 31);
    const auto b = mc_growth_curve(spec, McSettings{12, 1000, 4, 3}, 31);
    CHECK(a.grid == b.grid);
    CHECK(a.g_hat == b.g_hat);
    CHECK(a.se == b.se);
}

TEST_CASE("AR(1) curve end points follow the Gaussian truncated moments") {
    // With X = H_{t-1} ~ N(m, s^2), E[H_t 1{X > q}] = (mu + alpha m) P(X > q) + alpha s phi(z).
    for (const std::string name : {"dataset1", "dataset2"}) {
        const auto p = dataset_preset(name).ar1();
        const auto mom = stationary_moments_ar1(p);
        const double m = mom.mean, sd = std::sqrt(mom.variance);
        auto expected = [&](double q) {
            const double z = (q - m) / sd;
            const double tail = 0.5 * std::erfc(z / std::sqrt(2.0));
            const double density = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
            return (p.mu + p.alpha * m) * tail + p.alpha * sd * density;
        };
        const auto curve = mc_growth_curve(p, McSettings{});
        CAPTURE(name);
        CHECK(std::abs(curve.g_hat.front() - expected(curve.grid.front())) < 3.0 * curve.se.front());
        CHECK(std::abs(curve.g_hat.back() - expected(curve.grid.back())) < 3.0 * curve.se.back());
    }
}

TEST_CASE("curve optimum refinement") {
    GrowthCurve parabola;
    for (int i = 0; i < 11; ++i) {
        const double x = 0.1 * i;
        parabola.grid.push_back(x);
        parabola.g_hat.push_back(-(x - 0.437) * (x - 0.437));
        parabola.se.push_back(0.0);
    }
    const auto opt = mc_optimal_theta(parabola);
    CHECK(opt.theta == doctest::Approx(0.437).epsilon(1e-12));
    CHECK(opt.argmax == 4);
    CHECK_FALSE(opt.boundary);
    CHECK(opt.resolution == doctest::Approx(0.1));

    GrowthCurve falling = parabola;
    for (std::size_t i = 0; i < falling.g_hat.size(); ++i) falling.g_hat[i] = -double(i);
    const auto edge = mc_optimal_theta(falling);
    CHECK(edge.boundary);
    CHECK(edge.argmax == 0);
    CHECK(edge.theta == 0.0);

    GrowthCurve flat = parabola;
    std::fill(flat.g_hat.begin(), flat.g_hat.end(), 1.0);
    CHECK_THROWS_AS(mc_optimal_theta(flat), DegenerateError);
}

TEST_CASE("hill curves have a single smoothed peak") {
    const McSettings mc{};  // 200 x 10000
    for (const std::string name : {"dataset1", "dataset2"}) {
        const auto preset = dataset_preset(name);
        for (const auto& spec : {DynamicsSpec{preset.ar1()}, DynamicsSpec{preset.dgsv()}}) {
            CAPTURE(name);
            CAPTURE(model_name(spec));
            const auto curve = mc_growth_curve(spec, mc);
            CHECK(smoothed_peaks(curve.g_hat) == 1);
            const auto opt = mc_optimal_theta(curve);
            CHECK_FALSE(opt.boundary);
        }
    }
}

TEST_CASE("AR(1) gradient check") {
    const DynamicsSpec spec = dataset_preset("dataset1").ar1();
    const McSettings mc{200, 10000, 31, 1};
    const auto at_opt = mc_gradient_check(spec, Theta{-0.02}, 0.005, mc);
    REQUIRE(at_opt.size() == 1);
    CHECK(std::abs(at_opt[0].value) < 3.0 * at_opt[0].se);

    const auto left = mc_gradient_check(spec, Theta{-0.07}, 0.005, mc);
    const auto right = mc_gradient_check(spec, Theta{0.03}, 0.005, mc);
    CHECK(left[0].value > 3.0 * left[0].se);
    CHECK(right[0].value < -3.0 * right[0].se);

    const auto again = mc_gradient_check(spec, Theta{-0.07}, 0.005, mc);
    CHECK(again[0].value == left[0].value);
    CHECK(again[0].se == left[0].se);

    CHECK_THROWS_AS(mc_gradient_check(spec, Theta{0.0}, 0.0, mc), ParameterError);
    CHECK_THROWS_AS(mc_gradient_check(spec, Theta{0.0, 0.1}, 0.01, mc), ParameterError);
}

TEST_CASE("DGSV conditional-mean rule is stationary for the growth") {
    for (const std::string name : {"dataset1", "dataset2"}) {
        const DynamicsSpec spec = dataset_preset(name).dgsv();
        const auto exact = dgsv_bivariate_optimum(std::get<DgsvParams>(spec));
        const auto grad = mc_gradient_check(spec, exact, 0.005, McSettings{200, 10000, 77, 1});
        REQUIRE(grad.size() == 2);
        CAPTURE(name);
        CHECK(std::abs(grad[0].value) < 3.0 * grad[0].se);
        CHECK(std::abs(grad[1].value) < 3.0 * grad[1].se);
    }
}

TEST_CASE("bivariate Monte-Carlo optimum earns what the exact rule earns") {
    const DynamicsSpec spec = dataset_preset("dataset1").dgsv();
    const auto oracle = mc_volatility_optimum(spec, McSettings{100, 10000, 5, 1});
    CHECK_FALSE(oracle.optimum.boundary);
    CHECK(oracle.surface.g_hat.size() == oracle.surface.grid1.size() * oracle.surface.grid2.size());
    const auto exact = dgsv_bivariate_optimum(std::get<DgsvParams>(spec));

    // Paired growth difference on fresh paths.
    std::vector<double> diff;
    for (std::size_t i = 0; i < 100; ++i) {
        const auto path = simulate(spec, 10000, derive_seed(999, i));
        diff.push_back(realized_growth(path, exact) - realized_growth(path, oracle.optimum.theta));
    }
    const double m = kwt::testing::plain_mean(diff);
    double ss = 0.0;
    for (double d : diff) ss += (d - m) * (d - m);
    const double se = std::sqrt(ss / 99.0 / 100.0);
    CHECK(m > -3.0 * se);
    CHECK(std::abs(m) < 1e-4);
}

TEST_CASE("surface errors") {
    const DynamicsSpec ar = dataset_preset("dataset1").ar1();
    CHECK_THROWS_AS(mc_growth_surface(ar, McSettings{2, 100, 1, 1}), ParameterError);
    SurfaceSettings tiny;
    tiny.grid2_size = 2;
    CHECK_THROWS_AS(mc_growth_surface(dataset_preset("dataset1").dgsv(10), McSettings{2, 100, 1, 1}, tiny),
                    ParameterError);
}
