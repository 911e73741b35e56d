#pragma once

#include "sigpricer/expected_signature.hpp"
#include "sigpricer/market.hpp"
#include "sigpricer/payoffs.hpp"
#include "sigpricer/tensor_algebra.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace sigpricer {

enum class DatasetMode { Pathwise, Pricewise };

std::string to_string(DatasetMode mode);
DatasetMode dataset_mode_from_string(const std::string& name);

// Sampling box for market conditions; maturity is common to all samples.
struct ConditionRanges {
    double spot_min = 50.0;
    double spot_max = 150.0;
    double rate_min = 0.0;
    double rate_max = 0.05;
    double vol_min = 0.1;
    double vol_max = 0.4;
    double maturity = 1.0;

    void validate() const;
};

// Deterministic draw of n conditions; per-index seed derivation, so sample k
// does not depend on how many samples precede it.
std::vector<MarketCondition> sample_conditions(const ConditionRanges& ranges, int n,
                                               std::uint64_t seed);

struct Dataset {
    DatasetMode mode = DatasetMode::Pricewise;
    int order = 4;
    Eigen::MatrixXd features;       // one row per sample, tensor_dim(order) columns
    Eigen::VectorXd targets;        // payoff per path (pathwise) or price (pricewise)
    Eigen::VectorXd target_errors;  // MC standard errors of targets (pricewise), else 0
    std::vector<MarketCondition> conditions; // per-row market condition
};

// Pathwise: one simulated path per condition; row = signature coordinates of
// the augmented path, target = raw (undiscounted) payoff. Pricewise: row =
// expected-signature coordinates, target = ground-truth price (discounted).
Dataset build_dataset(const PayoffSpec& spec, const std::vector<MarketCondition>& conditions,
                      DatasetMode mode, int order, const SimConfig& sim,
                      const GroundTruthConfig& gt);

struct FitResult {
    LinearFunctional functional;
    double ridge = 0.0;
    double train_r2 = 0.0;
    double residual_norm = 0.0;
};

// Least squares with optional ridge penalty, solved by SVD on max-abs-scaled
// columns (never normal equations); ridge = 0 gives the minimum-norm
// solution. The empty-word column is the intercept; no separate centering.
FitResult fit(const Dataset& ds, double ridge);

// 1 - SS_res/SS_tot; NaN when SS_tot == 0.
double r_squared(const Eigen::VectorXd& truth, const Eigen::VectorXd& prediction);

struct EvalRow {
    long condition_id = 0;
    MarketCondition condition;
    double true_price = 0.0;
    double sig_price = 0.0;
};

struct EvalResult {
    double r2 = 0.0;
    std::vector<EvalRow> rows;
};

// Out-of-sample pricing accuracy: signature price per condition is
// discount * l(phi) for pathwise functionals (raw-payoff scale) and l(phi)
// for pricewise functionals (targets already discounted); true price from
// ground_truth_price.
EvalResult evaluate(const FitResult& fit_result, DatasetMode mode,
                    const std::vector<MarketCondition>& test_conditions,
                    const PayoffSpec& spec, int order, const GroundTruthConfig& gt);

} // namespace sigpricer
