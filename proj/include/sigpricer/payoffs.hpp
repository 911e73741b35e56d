#pragma once

#include "sigpricer/market.hpp"
#include "sigpricer/paths.hpp"
#include "sigpricer/tensor_algebra.hpp"

#include <cstdint>
#include <string>

namespace sigpricer {

enum class PayoffKind {
    EuropeanCall,
    EuropeanPut,
    AmericanPut,
    AsianArithmeticCall,
    LookbackFloatingCall,
    VarianceSwap,
};

std::string to_string(PayoffKind kind);
PayoffKind payoff_kind_from_string(const std::string& name);

struct PayoffSpec {
    PayoffKind kind = PayoffKind::EuropeanCall;
    double moneyness = 1.0;  // strike = moneyness * spot; unused for lookback
    double vol_strike = 0.2; // variance swap only

    void validate() const;
};

struct GroundTruthConfig {
    int binomial_steps = 1000;
    long mc_paths = 100000;
    int mc_steps = 252;
    std::uint64_t seed = 0;

    void validate() const;
};

struct PriceEstimate {
    double price = 0.0;
    double std_error = 0.0; // zero for closed-form / lattice prices
};

// Payoff of one sampled path. Asian averaging is trapezoidal on the sample
// grid; lookback max runs over all sample points; realized variance is the
// non-centered sum of squared log returns annualized by 1/T. AmericanPut is
// rejected: an exercise policy is not a function of a single path.
double evaluate_payoff(const PayoffSpec& spec, const SampledPath& path,
                       const MarketCondition& mc);

// Reference price: Black-Scholes closed form for European options,
// Cox-Ross-Rubinstein binomial for the American put, discounted Monte Carlo
// over simulate_gbm_path for the path-dependent payoffs (std_error reported).
PriceEstimate ground_truth_price(const PayoffSpec& spec, const MarketCondition& mc,
                                 const GroundTruthConfig& cfg);

double black_scholes_call(double spot, double strike, double rate, double vol,
                          double maturity);
double black_scholes_put(double spot, double strike, double rate, double vol,
                         double maturity);
double crr_american_put(double spot, double strike, double rate, double vol,
                        double maturity, int steps);
double normal_cdf(double x);

// Forward contract X_T - K as a linear functional: -K on (), +1 on (2), +1 on (3).
LinearFunctional forward_functional(double strike, int order);

// Asian forward (1/T) int_0^T X_s ds - K: -K on (), 1/T on (2,1), +1 on (3).
LinearFunctional asian_forward_functional(double strike, double maturity, int order);

} // namespace sigpricer
