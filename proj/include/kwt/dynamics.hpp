#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace kwt {

/// H_t = mu + alpha H_{t-1} + sigma eps_t
struct Ar1Params {
    double mu = 0.0;
    double alpha = 0.0;
    double sigma = 1.0;
};

/// H_t = mu + sum_{j<lags} beta_j eps_{t-j},  beta_j = b0 (1+j)^-b
struct MaParams {
    double mu = 0.0;
    double b0 = 0.4;
    double b = 0.7;
    std::size_t lags = 1000;
};

/// Discrete Gaussian stochastic volatility with leverage:
///   H_t = mu + alpha H_{t-1} + sigma e^{Y_t} (rho eps_t + sqrt(1-rho^2) eta_t)
///   Y_t = sum_{j<lags} beta_j eps_{t-j}
struct DgsvParams {
    double mu = 0.0;
    double alpha = 0.0;
    double sigma = 1.0;
    double rho = 0.0;
    double b0 = 0.4;
    double b = 0.7;
    std::size_t lags = 1000;
};

using DynamicsSpec = std::variant<Ar1Params, MaParams, DgsvParams>;

// "ar1", "ma" or "dgsv".
std::string model_name(const DynamicsSpec& spec);

/// One simulated trajectory. Element i of every present series belongs to
/// time step i+1. `nu[i]` is the predicted log-volatility E[Y | shocks before
/// step i+1], known before h[i] is revealed; `log_vol[i]` is the realized Y.
/// `eta`, `nu` and `log_vol` are empty unless the path is DGSV.
struct ReturnPath {
    std::vector<double> h;
    std::vector<double> eps;
    std::vector<double> eta;
    std::vector<double> nu;
    std::vector<double> log_vol;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return h.size(); }
    bool has_volatility() const noexcept { return !nu.empty(); }
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

// Throw ParameterError when a field violates its documented range.
void validate(const Ar1Params& p);
void validate(const MaParams& p);
void validate(const DgsvParams& p);
void validate(const DynamicsSpec& spec);

/// beta_j = b0 (1+j)^-b for j = 0..lags-1.
std::vector<double> ma_coefficients(double b0, double b, std::size_t lags);

/// Stationary mean mu/(1-alpha) and variance sigma^2/(1-alpha^2); needs |alpha| < 1.
Moments stationary_moments_ar1(const Ar1Params& p);

// Deterministic recursions on caller-supplied shocks. `presample` holds the
// lags-1 shocks preceding eps[0], oldest first.
std::vector<double> ar1_from_shocks(const Ar1Params& p, std::span<const double> eps);
ReturnPath ma_from_shocks(const MaParams& p, std::span<const double> presample,
                          std::span<const double> eps);
ReturnPath dgsv_from_shocks(const DgsvParams& p, std::span<const double> presample,
                            std::span<const double> eps, std::span<const double> eta);

// Seeded simulators; equal (params, t_len, seed) give bit-identical paths.
ReturnPath simulate_ar1(const Ar1Params& p, std::size_t t_len, std::uint64_t seed);
ReturnPath simulate_ma(const MaParams& p, std::size_t t_len, std::uint64_t seed);
ReturnPath simulate_dgsv(const DgsvParams& p, std::size_t t_len, std::uint64_t seed);
ReturnPath simulate(const DynamicsSpec& spec, std::size_t t_len, std::uint64_t seed);

}  // namespace kwt
