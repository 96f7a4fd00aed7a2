#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "kwt/dynamics.hpp"
#include "kwt/error.hpp"
#include "kwt/experiments.hpp"
#include "kwt/random.hpp"
#include "test_support.hpp"

using namespace kwt;
using kwt::testing::batch_means_se;
using kwt::testing::plain_mean;
using kwt::testing::uniform;

TEST_CASE("ma_coefficients follows b0 (1+j)^-b") {
    const auto beta = ma_coefficients(0.4, 0.7, 5);
    CHECK(beta[0] == 0.4);
    // 0.4 * 2^-0.7 evaluated at 30 digits
    CHECK(beta[1] == doctest::Approx(0.246228882668983257).epsilon(1e-14));
    CHECK(std::is_sorted(beta.rbegin(), beta.rend()));
    CHECK(std::adjacent_find(beta.begin(), beta.end()) == beta.end());

    CHECK(ma_coefficients(0.4, 0.0, 3) == std::vector<double>{0.4, 0.4, 0.4});

    CHECK_THROWS_AS(ma_coefficients(0.0, 0.7, 3), ParameterError);
    CHECK_THROWS_AS(ma_coefficients(-1.0, 0.7, 3), ParameterError);
    CHECK_THROWS_AS(ma_coefficients(0.4, 0.7, 0), ParameterError);
}

TEST_CASE("stationary AR(1) moments") {
    const auto m = stationary_moments_ar1({0.01, 0.5, 0.05});
    CHECK(m.mean == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(m.variance == doctest::Approx(0.0025 / 0.75).epsilon(1e-15));

    const auto white = stationary_moments_ar1({0.0, 0.0, 1.0});
    CHECK(white.mean == 0.0);
    CHECK(white.variance == 1.0);

    CHECK_THROWS_AS(stationary_moments_ar1({0.0, 1.0, 1.0}), ParameterError);
    CHECK_THROWS_AS(stationary_moments_ar1({0.0, -1.0, 1.0}), ParameterError);
    CHECK_THROWS_AS(stationary_moments_ar1({0.0, 1.5, 1.0}), ParameterError);
}

TEST_CASE("noiseless AR(1) sits at its fixed point") {
    const auto path = simulate_ar1({0.01, 0.5, 0.0}, 200, 99);
    for (double h : path.h) CHECK(h == doctest::Approx(0.02).epsilon(1e-15));
}

TEST_CASE("AR(1) rejects a unit root") {
    CHECK_THROWS_AS(simulate_ar1({0.0, 1.0, 0.05}, 10, 1), ParameterError);
    CHECK_THROWS_AS(simulate_ar1({0.0, 0.5, 0.05}, 0, 1), ParameterError);
}

TEST_CASE("AR(1) sample moments match the stationary moments") {
    const Ar1Params p = dataset_preset("dataset1").ar1();
    const auto path = simulate_ar1(p, 1'000'000, 7);
    const auto m = stationary_moments_ar1(p);

    const double mean = plain_mean(path.h);
    const double mean_se = batch_means_se(path.h, 1000);
    CHECK(std::abs(mean - m.mean) < 3.0 * mean_se);

    const auto sq = kwt::testing::squared_deviations(path.h, m.mean);
    const double var = plain_mean(sq);
    const double var_se = batch_means_se(sq, 1000);
    CHECK(std::abs(var - m.variance) < 4.0 * var_se);
}

TEST_CASE("simulators are deterministic in (params, t_len, seed)") {
    const auto p = dataset_preset("dataset1");
    for (const auto& spec : {DynamicsSpec{p.ar1()}, DynamicsSpec{p.ma(50)}, DynamicsSpec{p.dgsv(50)}}) {
        const auto a = simulate(spec, 500, 42);
        const auto b = simulate(spec, 500, 42);
        const auto c = simulate(spec, 500, 43);
        CHECK(a.h == b.h);
        CHECK(a.eps == b.eps);
        CHECK(a.nu == b.nu);
        CHECK(a.h != c.h);
        CHECK(a.seed == 42);
    }
}

TEST_CASE("single-lag MA is a scaled white noise") {
    const auto path = simulate_ma({0.0, 0.4, 0.7, 1}, 200'000, 3);
    for (std::size_t i = 0; i < path.size(); ++i) REQUIRE(path.h[i] == 0.4 * path.eps[i]);
    const auto sq = kwt::testing::squared_deviations(path.h, 0.0);
    CHECK(std::abs(plain_mean(sq) - 0.16) < 4.0 * batch_means_se(sq, 200));
    CHECK(path.eta.empty());
    CHECK(path.nu.empty());
}

TEST_CASE("MA mean and lag-1 autocovariance") {
    const MaParams p{0.005, 0.4, 0.7, 50};
    const auto path = simulate_ma(p, 1'000'000, 11);

    CHECK(std::abs(plain_mean(path.h) - 0.005) < 3.0 * batch_means_se(path.h, 100));

    // Analytic gamma(1) = b0^2 sum_j (1+j)^-b (2+j)^-b over the retained lags.
    double gamma1 = 0.0;
    for (std::size_t j = 0; j + 1 < p.lags; ++j)
        gamma1 += p.b0 * p.b0 * std::pow(1.0 + j, -p.b) * std::pow(2.0 + j, -p.b);
    std::vector<double> products(path.size() - 1);
    for (std::size_t t = 0; t + 1 < path.size(); ++t)
        products[t] = (path.h[t] - p.mu) * (path.h[t + 1] - p.mu);
    CHECK(std::abs(plain_mean(products) - gamma1) < 4.0 * batch_means_se(products, 100));
}

TEST_CASE("MA truncation: doubling lags moves H by at most the dropped tail") {
    const std::size_t lags = 40;
    auto pre_engine = Engine{5};
    const auto long_pre = standard_normals(pre_engine, 2 * lags - 1);
    const auto eps = standard_normals(pre_engine, 300);
    const std::vector<double> short_pre(long_pre.end() - (lags - 1), long_pre.end());

    const MaParams shorter{0.0, 0.4, 0.7, lags};
    const MaParams longer{0.0, 0.4, 0.7, 2 * lags};
    const auto a = ma_from_shocks(shorter, short_pre, eps);
    const auto b = ma_from_shocks(longer, long_pre, eps);

    const auto beta = ma_coefficients(0.4, 0.7, 2 * lags);
    double tail = 0.0;
    for (std::size_t j = lags; j < 2 * lags; ++j) tail += beta[j];
    double max_shock = 0.0;
    for (double e : long_pre) max_shock = std::max(max_shock, std::abs(e));
    for (double e : eps) max_shock = std::max(max_shock, std::abs(e));

    for (std::size_t t = 0; t < eps.size(); ++t)
        CHECK(std::abs(a.h[t] - b.h[t]) <= tail * max_shock * (1 + 1e-12));
}

TEST_CASE("DGSV with b0 = 0 and rho = 1 reproduces AR(1) exactly") {
    for (int trial = 0; trial < 20; ++trial) {
        const double mu = uniform(-0.02, 0.02), alpha = uniform(-0.9, 0.9), sigma = uniform(0.01, 0.2);
        const auto seed = static_cast<std::uint64_t>(trial) * 7919u + 1u;
        const auto ar = simulate_ar1({mu, alpha, sigma}, 2000, seed);
        const auto sv = simulate_dgsv({mu, alpha, sigma, 1.0, 0.0, 0.7, 30}, 2000, seed);
        REQUIRE(ar.eps == sv.eps);
        CHECK(ar.h == sv.h);
    }
}

TEST_CASE("DGSV: realized minus predicted log-volatility is beta0 * eps") {
    for (int trial = 0; trial < 10; ++trial) {
        const DgsvParams p{0.01, 0.5, 0.05, uniform(-1, 1), uniform(0.1, 1.0), uniform(0.55, 0.95), 200};
        const auto path = simulate_dgsv(p, 3000, 100 + trial);
        REQUIRE(path.nu.size() == path.size());
        REQUIRE(path.log_vol.size() == path.size());
        REQUIRE(path.eta.size() == path.size());
        for (std::size_t t = 0; t < path.size(); ++t) {
            const double gap = path.log_vol[t] - path.nu[t];
            const double ulp = std::numeric_limits<double>::epsilon() *
                               std::max({1.0, std::abs(path.log_vol[t]), std::abs(path.nu[t])});
            REQUIRE(std::abs(gap - p.b0 * path.eps[t]) <= 2.0 * ulp);
        }
    }
}

TEST_CASE("DGSV Dataset-1 path is well formed") {
    const auto path = simulate_dgsv(dataset_preset("dataset1").dgsv(), 20000, 2);
    CHECK(path.size() == 20000);
    CHECK(std::all_of(path.h.begin(), path.h.end(), [](double h) { return std::isfinite(h); }));
    // Leverage: returns and the contemporaneous volatility shock are negatively correlated.
    double cov = 0.0;
    for (std::size_t t = 1; t < path.size(); ++t)
        cov += (path.h[t] - 0.5 * path.h[t - 1]) * path.eps[t];
    CHECK(cov < 0.0);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate(DynamicsSpec{Ar1Params{0.0, 1.2, 0.1}}), ParameterError);
    CHECK_THROWS_AS(validate(DynamicsSpec{Ar1Params{0.0, 0.5, -0.1}}), ParameterError);
    CHECK_THROWS_AS(validate(DynamicsSpec{MaParams{0.0, 0.4, 0.4, 10}}), ParameterError);
    CHECK_THROWS_AS(validate(DynamicsSpec{MaParams{0.0, 0.4, 0.7, 0}}), ParameterError);
    CHECK_THROWS_AS(validate(DynamicsSpec{MaParams{0.0, 0.0, 0.7, 10}}), ParameterError);
    CHECK_THROWS_AS(validate(DynamicsSpec{DgsvParams{0.0, 0.5, 0.05, 1.5, 0.4, 0.7, 10}}), ParameterError);
    CHECK_THROWS_AS(validate(DynamicsSpec{DgsvParams{0.0, 0.5, 0.05, 0.0, 0.4, 1.0, 10}}), ParameterError);
    CHECK_NOTHROW(validate(DynamicsSpec{dataset_preset("dataset2").dgsv()}));
    CHECK(model_name(DynamicsSpec{MaParams{}}) == "ma");
}

TEST_CASE("derived seeds do not collide across neighbouring bases") {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t base = 0; base < 8; ++base)
        for (std::uint64_t i = 0; i < 8; ++i) seeds.push_back(derive_seed(base, i));
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}
