#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "kwt/dynamics.hpp"
#include "kwt/error.hpp"
#include "kwt/experiments.hpp"
#include "kwt/strategy.hpp"
#include "test_support.hpp"

using namespace kwt;
using kwt::testing::uniform;

namespace {

ReturnPath path_of(std::vector<double> h) {
    ReturnPath p;
    p.h = std::move(h);
    p.eps.assign(p.h.size(), 0.0);
    return p;
}

Theta above(double t1) { return Theta{t1, std::nullopt, Direction::above}; }

}  // namespace

TEST_CASE("univariate decisions") {
    CHECK(decide_univariate(0.05, above(0.02)) == 1);
    CHECK(decide_univariate(0.02, above(0.02)) == 0);
    CHECK(decide_univariate(-0.03, Theta{-0.02, std::nullopt, Direction::below}) == 1);
    CHECK(decide_univariate(-0.02, Theta{-0.02, std::nullopt, Direction::below}) == 0);
    CHECK(decide_univariate(0.0, Theta{-0.02, std::nullopt, Direction::below}) == 0);
}

TEST_CASE("volatility decisions") {
    CHECK(decide_volatility(0.0, 0.0, Theta{0.02, 0.05, Direction::above}) == 1);
    // 0.01 + 0.01 * 2 lands exactly on 0.03 in binary64, so the strict test fails.
    CHECK(decide_volatility(0.01, std::log(2.0), Theta{0.03, 0.01, Direction::above}) == 0);
    CHECK_THROWS_AS(decide_volatility(0.0, 0.0, above(0.0)), ParameterError);

    for (int i = 0; i < 200; ++i) {
        const double h = uniform(-0.1, 0.1), nu = uniform(-2, 2), t1 = uniform(-0.1, 0.1);
        for (auto d : {Direction::above, Direction::below})
            REQUIRE(decide_volatility(h, nu, Theta{t1, 0.0, d}) ==
                    decide_univariate(h, Theta{t1, std::nullopt, d}));
    }
}

TEST_CASE("growth increment is pi * h") {
    CHECK(growth_increment(0.05, 0) == 0.0);
    CHECK(growth_increment(0.05, 1) == 0.05);
    CHECK(growth_increment(-0.1, 1) == -0.1);
    for (int i = 0; i < 1000; ++i) {
        const double h = uniform(-0.5, 0.5);
        REQUIRE(growth_increment(h, 1) == h);
        REQUIRE(growth_increment(h, 0) == 0.0);
        // log(1 - pi + pi e^h) agrees up to libm rounding
        REQUIRE(std::log(std::exp(h)) == doctest::Approx(h).epsilon(1e-12));
    }
}

TEST_CASE("realized growth on a three-point path") {
    // Decision at step 2 reads H1 = 0.1 > 0 and collects H2 = -0.2; decision
    // at step 3 reads H2 < 0 and holds the bond.
    const auto p = path_of({0.1, -0.2, 0.3});
    CHECK(realized_growth(p, above(0.0)) == doctest::Approx(-0.1).epsilon(1e-15));
    const auto w = wealth_path(p, above(0.0));
    REQUIRE(w.size() == 3);
    CHECK(w[0] == 0.0);
    CHECK(w[1] == -0.2);
    CHECK(w[2] == -0.2);
}

TEST_CASE("all-bond and all-stock surrogates") {
    const auto path = simulate_ar1(dataset_preset("dataset1").ar1(), 5000, 4);
    const auto [lo, hi] = std::minmax_element(path.h.begin(), path.h.end());

    CHECK(realized_growth(path, above(*hi + 1.0)) == 0.0);
    const auto bond = wealth_path(path, above(*hi + 1.0));
    CHECK(std::all_of(bond.begin(), bond.end(), [](double w) { return w == 0.0; }));

    const double tail_mean =
        std::accumulate(path.h.begin() + 1, path.h.end(), 0.0) / (path.size() - 1.0);
    CHECK(realized_growth(path, above(*lo - 1.0)) == doctest::Approx(tail_mean).epsilon(1e-12));
    const auto stock = wealth_path(path, above(*lo - 1.0));
    double cum = 0.0;
    for (std::size_t t = 1; t < path.size(); ++t) {
        cum += path.h[t];
        REQUIRE(stock[t] == cum);
    }
}

TEST_CASE("final wealth equals (T-1) times realized growth") {
    for (int trial = 0; trial < 25; ++trial) {
        const auto path = simulate_ar1({uniform(-0.01, 0.01), uniform(-0.8, 0.8), 0.05}, 500, trial);
        const Theta theta{uniform(-0.05, 0.05), std::nullopt,
                          trial % 2 ? Direction::above : Direction::below};
        const auto w = wealth_path(path, theta);
        double sum = 0;
        for (std::size_t t = 1; t < path.size(); ++t)
            sum += growth_increment(path.h[t], decide_at(path, t, theta));
        CHECK(w.back() == sum);
        CHECK(w.back() == doctest::Approx((path.size() - 1.0) * realized_growth(path, theta))
                              .epsilon(1e-12));
    }
}

TEST_CASE("no look-ahead: changing H_t leaves the decision at t unchanged") {
    const auto base = simulate_dgsv(dataset_preset("dataset1").dgsv(50), 200, 8);
    const Theta uni{0.0, std::nullopt, Direction::above};
    const Theta vol{0.0, 0.01, Direction::above};
    for (std::size_t t = 1; t < base.size(); ++t) {
        auto bumped = base;
        bumped.h[t] += 1.0;
        REQUIRE(decide_at(bumped, t, uni) == decide_at(base, t, uni));
        REQUIRE(decide_at(bumped, t, vol) == decide_at(base, t, vol));
    }
}

TEST_CASE("oracle threshold beats both surrogates on long Dataset-1 paths") {
    const auto path = simulate_ar1(dataset_preset("dataset1").ar1(), 400'000, 12);
    const double g_star = realized_growth(path, above(-0.02));
    const double g_bond = realized_growth(path, above(1e9));
    const double g_stock = realized_growth(path, above(-1e9));
    // Per-step sd of the difference is bounded by sd(H); the difference itself
    // is large compared with 3 sd / sqrt(T).
    const double tol = 3.0 * std::sqrt(0.0025 / 0.75) / std::sqrt(double(path.size()));
    CHECK(g_star > std::max(g_bond, g_stock) + tol);
}

TEST_CASE("strategy errors and names") {
    CHECK_THROWS_AS(realized_growth(path_of({0.1}), above(0)), ParameterError);
    CHECK_THROWS_AS(realized_growth(path_of({0.1, 0.2}), Theta{0, 0.1, Direction::above}),
                    ParameterError);
    CHECK(parse_direction("below") == Direction::below);
    CHECK(to_string(StrategyKind::volatility) == "volatility");
    CHECK_THROWS_AS(parse_direction("sideways"), ParameterError);
    CHECK(Theta{0, 0.1}.kind() == StrategyKind::volatility);
}
