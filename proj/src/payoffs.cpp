#include "sigpricer/payoffs.hpp"

#include "sigpricer/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sigpricer {

std::string to_string(PayoffKind kind) {
    switch (kind) {
        case PayoffKind::EuropeanCall: return "EuropeanCall";
        case PayoffKind::EuropeanPut: return "EuropeanPut";
        case PayoffKind::AmericanPut: return "AmericanPut";
        case PayoffKind::AsianArithmeticCall: return "AsianArithmeticCall";
        case PayoffKind::LookbackFloatingCall: return "LookbackFloatingCall";
        case PayoffKind::VarianceSwap: return "VarianceSwap";
    }
    throw std::invalid_argument("unknown payoff kind");
}

PayoffKind payoff_kind_from_string(const std::string& name) {
    if (name == "EuropeanCall") return PayoffKind::EuropeanCall;
    if (name == "EuropeanPut") return PayoffKind::EuropeanPut;
    if (name == "AmericanPut") return PayoffKind::AmericanPut;
    if (name == "AsianArithmeticCall") return PayoffKind::AsianArithmeticCall;
    if (name == "LookbackFloatingCall") return PayoffKind::LookbackFloatingCall;
    if (name == "VarianceSwap") return PayoffKind::VarianceSwap;
    throw std::invalid_argument("unknown payoff kind: \"" + name + "\"");
}

void PayoffSpec::validate() const {
    const bool uses_strike = kind == PayoffKind::EuropeanCall || kind == PayoffKind::EuropeanPut ||
                             kind == PayoffKind::AmericanPut ||
                             kind == PayoffKind::AsianArithmeticCall;
    if (uses_strike && !(moneyness > 0.0))
        throw std::invalid_argument("moneyness must be > 0");
    if (kind == PayoffKind::VarianceSwap && !(vol_strike > 0.0))
        throw std::invalid_argument("vol_strike must be > 0");
}

void GroundTruthConfig::validate() const {
    if (binomial_steps < 1) throw std::invalid_argument("binomial_steps must be >= 1");
    if (mc_paths < 1) throw std::invalid_argument("mc_paths must be >= 1");
    if (mc_steps < 1) throw std::invalid_argument("mc_steps must be >= 1");
}

double evaluate_payoff(const PayoffSpec& spec, const SampledPath& path,
                       const MarketCondition& mc) {
    spec.validate();
    const double strike = spec.moneyness * mc.spot;
    const std::size_t n = path.values.size();
    switch (spec.kind) {
        case PayoffKind::EuropeanCall:
            return std::max(path.values.back() - strike, 0.0);
        case PayoffKind::EuropeanPut:
            return std::max(strike - path.values.back(), 0.0);
        case PayoffKind::AmericanPut:
            throw std::invalid_argument("AmericanPut is not a path functional");
        case PayoffKind::AsianArithmeticCall: {
            // trapezoidal average of the piecewise-linear path over [0,T]
            double integral = 0.0;
            for (std::size_t i = 1; i < n; ++i)
                integral += 0.5 * (path.values[i] + path.values[i - 1]) *
                            (path.times[i] - path.times[i - 1]);
            const double average = integral / path.times.back();
            return std::max(average - strike, 0.0);
        }
        case PayoffKind::LookbackFloatingCall: {
            const double running_max = *std::max_element(path.values.begin(), path.values.end());
            return running_max - path.values.back();
        }
        case PayoffKind::VarianceSwap: {
            double realized = 0.0;
            for (std::size_t i = 1; i < n; ++i) {
                const double lr = std::log(path.values[i] / path.values[i - 1]);
                realized += lr * lr;
            }
            realized /= path.times.back();
            return realized - spec.vol_strike * spec.vol_strike;
        }
    }
    throw std::invalid_argument("unknown payoff kind");
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double black_scholes_call(double spot, double strike, double rate, double vol,
                          double maturity) {
    const double vol_sqrt_t = vol * std::sqrt(maturity);
    const double d1 =
        (std::log(spot / strike) + (rate + 0.5 * vol * vol) * maturity) / vol_sqrt_t;
    const double d2 = d1 - vol_sqrt_t;
    return spot * normal_cdf(d1) - strike * std::exp(-rate * maturity) * normal_cdf(d2);
}

double black_scholes_put(double spot, double strike, double rate, double vol,
                         double maturity) {
    const double vol_sqrt_t = vol * std::sqrt(maturity);
    const double d1 =
        (std::log(spot / strike) + (rate + 0.5 * vol * vol) * maturity) / vol_sqrt_t;
    const double d2 = d1 - vol_sqrt_t;
    return strike * std::exp(-rate * maturity) * normal_cdf(-d2) - spot * normal_cdf(-d1);
}

double crr_american_put(double spot, double strike, double rate, double vol,
                        double maturity, int steps) {
    if (steps < 1) throw std::invalid_argument("binomial steps must be >= 1");
    const double dt = maturity / steps;
    const double up = std::exp(vol * std::sqrt(dt));
    const double down = 1.0 / up;
    const double growth = std::exp(rate * dt);
    const double disc = 1.0 / growth;
    const double p_up = (growth - down) / (up - down);
    if (!(p_up > 0.0 && p_up < 1.0))
        throw std::invalid_argument("binomial tree is unstable for these parameters");
    const double p_down = 1.0 - p_up;

    std::vector<double> value(static_cast<std::size_t>(steps) + 1);
    // terminal prices spot * up^j * down^(steps-j), j = 0..steps
    for (int j = 0; j <= steps; ++j) {
        const double terminal = spot * std::pow(up, 2 * j - steps);
        value[static_cast<std::size_t>(j)] = std::max(strike - terminal, 0.0);
    }
    for (int m = steps - 1; m >= 0; --m) {
        for (int j = 0; j <= m; ++j) {
            const double continuation = disc * (p_up * value[static_cast<std::size_t>(j) + 1] +
                                                p_down * value[static_cast<std::size_t>(j)]);
            const double exercise = strike - spot * std::pow(up, 2 * j - m);
            value[static_cast<std::size_t>(j)] = std::max(continuation, exercise);
        }
    }
    return value[0];
}

PriceEstimate ground_truth_price(const PayoffSpec& spec, const MarketCondition& mc,
                                 const GroundTruthConfig& cfg) {
    spec.validate();
    mc.validate();
    cfg.validate();
    const double strike = spec.moneyness * mc.spot;
    switch (spec.kind) {
        case PayoffKind::EuropeanCall:
            return {black_scholes_call(mc.spot, strike, mc.rate, mc.vol, mc.maturity), 0.0};
        case PayoffKind::EuropeanPut:
            return {black_scholes_put(mc.spot, strike, mc.rate, mc.vol, mc.maturity), 0.0};
        case PayoffKind::AmericanPut:
            return {crr_american_put(mc.spot, strike, mc.rate, mc.vol, mc.maturity,
                                     cfg.binomial_steps),
                    0.0};
        default:
            break;
    }
    // Monte Carlo families: discounted sample mean of the path payoff.
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long k = 0; k < cfg.mc_paths; ++k) {
        const SampledPath path =
            simulate_gbm_path(mc, cfg.mc_steps, derive_seed(cfg.seed, static_cast<std::uint64_t>(k)));
        const double payoff = evaluate_payoff(spec, path, mc);
        sum += payoff;
        sum_sq += payoff * payoff;
    }
    const double n = static_cast<double>(cfg.mc_paths);
    const double mean = sum / n;
    const double disc = discount_factor(mc);
    double se = 0.0;
    if (cfg.mc_paths > 1) {
        const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
        se = std::sqrt(var / n);
    }
    return {disc * mean, disc * se};
}

LinearFunctional forward_functional(double strike, int order) {
    if (order < 1) throw std::invalid_argument("order must be >= 1");
    LinearFunctional l(order);
    l.weights[static_cast<Eigen::Index>(word_index({}))] = -strike;
    l.weights[static_cast<Eigen::Index>(word_index({2}))] = 1.0;
    l.weights[static_cast<Eigen::Index>(word_index({3}))] = 1.0;
    return l;
}

LinearFunctional asian_forward_functional(double strike, double maturity, int order) {
    if (order < 2) throw std::invalid_argument("order must be >= 2");
    if (!(maturity > 0.0)) throw std::invalid_argument("maturity must be > 0");
    LinearFunctional l(order);
    l.weights[static_cast<Eigen::Index>(word_index({}))] = -strike;
    l.weights[static_cast<Eigen::Index>(word_index({2, 1}))] = 1.0 / maturity;
    l.weights[static_cast<Eigen::Index>(word_index({3}))] = 1.0;
    return l;
}

} // namespace sigpricer
