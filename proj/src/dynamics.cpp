#include "kwt/dynamics.hpp"

#include <cmath>
#include <string>

#include "kwt/error.hpp"
#include "kwt/random.hpp"

namespace kwt {
namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ParameterError(message);
}

void check_alpha(double alpha) {
    require(std::isfinite(alpha) && std::abs(alpha) <= 1.0, "alpha must lie in [-1, 1]");
}

void check_stationary(double alpha) {
    require(std::abs(alpha) < 1.0,
            "alpha must satisfy |alpha| < 1 for a stationary-mean start");
}

void check_memory(double b, std::size_t lags) {
    require(b > 0.5 && b < 1.0, "memory exponent b must lie in (0.5, 1)");
    require(lags >= 1, "lags must be at least 1");
}

// sum_k w[k] * x[k]; four interleaved partial sums, fixed order.
double dot(const double* w, const double* x, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        s0 += w[k] * x[k];
        s1 += w[k + 1] * x[k + 1];
        s2 += w[k + 2] * x[k + 2];
        s3 += w[k + 3] * x[k + 3];
    }
    for (; k < n; ++k) s0 += w[k] * x[k];
    return (s0 + s1) + (s2 + s3);
}

// Concatenate presample and main shocks into one oldest-first stream.
std::vector<double> join(std::span<const double> presample, std::span<const double> eps) {
    std::vector<double> full;
    full.reserve(presample.size() + eps.size());
    full.insert(full.end(), presample.begin(), presample.end());
    full.insert(full.end(), eps.begin(), eps.end());
    return full;
}

std::vector<double> reversed(std::vector<double> v) {
    return {v.rbegin(), v.rend()};
}

}  // namespace

std::string model_name(const DynamicsSpec& spec) {
    switch (spec.index()) {
        case 0: return "ar1";
        case 1: return "ma";
        default: return "dgsv";
    }
}

void validate(const Ar1Params& p) {
    check_alpha(p.alpha);
    require(p.sigma >= 0.0 && std::isfinite(p.sigma), "sigma must be non-negative");
    require(std::isfinite(p.mu), "mu must be finite");
}

void validate(const MaParams& p) {
    require(p.b0 > 0.0, "b0 must be positive");
    check_memory(p.b, p.lags);
    require(std::isfinite(p.mu), "mu must be finite");
}

void validate(const DgsvParams& p) {
    check_alpha(p.alpha);
    require(p.sigma >= 0.0 && std::isfinite(p.sigma), "sigma must be non-negative");
    require(std::isfinite(p.rho) && std::abs(p.rho) <= 1.0, "rho must lie in [-1, 1]");
    // b0 = 0 is accepted: constant volatility, the AR(1) special case.
    require(p.b0 >= 0.0, "b0 must be non-negative");
    check_memory(p.b, p.lags);
    require(std::isfinite(p.mu), "mu must be finite");
}

void validate(const DynamicsSpec& spec) {
    std::visit([](const auto& p) { validate(p); }, spec);
}

std::vector<double> ma_coefficients(double b0, double b, std::size_t lags) {
    require(b0 > 0.0, "b0 must be positive");
    require(lags >= 1, "lags must be at least 1");
    std::vector<double> beta(lags);
    for (std::size_t j = 0; j < lags; ++j)
        beta[j] = b0 * std::pow(1.0 + static_cast<double>(j), -b);
    return beta;
}

Moments stationary_moments_ar1(const Ar1Params& p) {
    validate(p);
    check_stationary(p.alpha);
    return {p.mu / (1.0 - p.alpha), p.sigma * p.sigma / (1.0 - p.alpha * p.alpha)};
}

std::vector<double> ar1_from_shocks(const Ar1Params& p, std::span<const double> eps) {
    validate(p);
    check_stationary(p.alpha);
    std::vector<double> h(eps.size());
    double prev = p.mu / (1.0 - p.alpha);
    for (std::size_t t = 0; t < eps.size(); ++t) {
        prev = p.mu + p.alpha * prev + p.sigma * eps[t];
        h[t] = prev;
    }
    return h;
}

ReturnPath ma_from_shocks(const MaParams& p, std::span<const double> presample,
                          std::span<const double> eps) {
    validate(p);
    require(presample.size() == p.lags - 1, "presample must hold lags-1 shocks");
    const auto weights = reversed(ma_coefficients(p.b0, p.b, p.lags));
    const auto full = join(presample, eps);

    ReturnPath path;
    path.h.resize(eps.size());
    for (std::size_t t = 0; t < eps.size(); ++t)
        path.h[t] = p.mu + dot(weights.data(), full.data() + t, p.lags);
    path.eps.assign(eps.begin(), eps.end());
    return path;
}

ReturnPath dgsv_from_shocks(const DgsvParams& p, std::span<const double> presample,
                            std::span<const double> eps, std::span<const double> eta) {
    validate(p);
    check_stationary(p.alpha);
    require(presample.size() == p.lags - 1, "presample must hold lags-1 shocks");
    require(eta.size() == eps.size(), "eps and eta must have equal length");

    // Lagged weights beta_{lags-1} .. beta_1; beta_0 multiplies the current shock.
    std::vector<double> beta = p.b0 > 0.0 ? ma_coefficients(p.b0, p.b, p.lags)
                                          : std::vector<double>(p.lags, 0.0);
    const double beta0 = beta.front();
    const std::vector<double> lagged(beta.rbegin(), beta.rend() - 1);
    const auto full = join(presample, eps);
    const double idio = std::sqrt(1.0 - p.rho * p.rho);

    ReturnPath path;
    const std::size_t n = eps.size();
    path.h.resize(n);
    path.nu.resize(n);
    path.log_vol.resize(n);
    double prev = p.mu / (1.0 - p.alpha);
    for (std::size_t t = 0; t < n; ++t) {
        const double nu = dot(lagged.data(), full.data() + t, p.lags - 1);
        const double y = nu + beta0 * eps[t];
        prev = p.mu + p.alpha * prev + p.sigma * std::exp(y) * (p.rho * eps[t] + idio * eta[t]);
        path.h[t] = prev;
        path.nu[t] = nu;
        path.log_vol[t] = y;
    }
    path.eps.assign(eps.begin(), eps.end());
    path.eta.assign(eta.begin(), eta.end());
    return path;
}

ReturnPath simulate_ar1(const Ar1Params& p, std::size_t t_len, std::uint64_t seed) {
    require(t_len >= 1, "t_len must be at least 1");
    auto eps_engine = make_engine(seed, Stream::eps);
    ReturnPath path;
    path.eps = standard_normals(eps_engine, t_len);
    path.h = ar1_from_shocks(p, path.eps);
    path.seed = seed;
    return path;
}

ReturnPath simulate_ma(const MaParams& p, std::size_t t_len, std::uint64_t seed) {
    require(t_len >= 1, "t_len must be at least 1");
    validate(p);
    auto pre_engine = make_engine(seed, Stream::presample);
    auto eps_engine = make_engine(seed, Stream::eps);
    const auto presample = standard_normals(pre_engine, p.lags - 1);
    const auto eps = standard_normals(eps_engine, t_len);
    auto path = ma_from_shocks(p, presample, eps);
    path.seed = seed;
    return path;
}

ReturnPath simulate_dgsv(const DgsvParams& p, std::size_t t_len, std::uint64_t seed) {
    require(t_len >= 1, "t_len must be at least 1");
    validate(p);
    auto pre_engine = make_engine(seed, Stream::presample);
    auto eps_engine = make_engine(seed, Stream::eps);
    auto eta_engine = make_engine(seed, Stream::eta);
    const auto presample = standard_normals(pre_engine, p.lags - 1);
    const auto eps = standard_normals(eps_engine, t_len);
    const auto eta = standard_normals(eta_engine, t_len);
    auto path = dgsv_from_shocks(p, presample, eps, eta);
    path.seed = seed;
    return path;
}

ReturnPath simulate(const DynamicsSpec& spec, std::size_t t_len, std::uint64_t seed) {
    struct Visitor {
        std::size_t t_len;
        std::uint64_t seed;
        ReturnPath operator()(const Ar1Params& p) const { return simulate_ar1(p, t_len, seed); }
        ReturnPath operator()(const MaParams& p) const { return simulate_ma(p, t_len, seed); }
        ReturnPath operator()(const DgsvParams& p) const { return simulate_dgsv(p, t_len, seed); }
    };
    return std::visit(Visitor{t_len, seed}, spec);
}

}  // namespace kwt
