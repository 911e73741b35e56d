#pragma once

#include "sigpricer/paths.hpp"
#include "sigpricer/tensor_algebra.hpp"

#include <cstdint>

namespace sigpricer {

// Black-Scholes world: dX = r X dt + sigma X dW, spot X0, maturity T years.
struct MarketCondition {
    double spot = 100.0;
    double rate = 0.05;
    double vol = 0.2;
    double maturity = 1.0;

    void validate() const; // spot > 0, vol > 0, maturity > 0
};

struct SimConfig {
    int steps = 252;
    long paths = 100000;
    std::uint64_t seed = 0;

    void validate() const; // steps >= 1, paths >= 1
};

// exp(-rate * maturity)
double discount_factor(const MarketCondition& mc);

// Exact lognormal stepping on a uniform grid: X_{i+1} = X_i * exp((r - s^2/2)dt
// + s*sqrt(dt)*Z_i). The seed fully determines the path; callers derive
// per-path seeds so that path k is identical however paths are scheduled.
SampledPath simulate_gbm_path(const MarketCondition& mc, int steps, std::uint64_t seed);

struct McSignatureEstimate {
    TruncatedTensor mean;
    TruncatedTensor std_error; // per-coordinate standard error of the mean
    McSignatureEstimate(int order) : mean(order), std_error(order) {}
};

// Sample mean and standard error of path_signature(augment(gbm path)) over
// cfg.paths independent paths. Deterministic for fixed (mc, cfg, order).
McSignatureEstimate mc_expected_signature(const MarketCondition& mc, const SimConfig& cfg,
                                          int order);

} // namespace sigpricer
