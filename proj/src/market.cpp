#include "sigpricer/market.hpp"

#include "sigpricer/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sigpricer {

void MarketCondition::validate() const {
    if (!(spot > 0.0)) throw std::invalid_argument("spot must be > 0");
    if (!(vol > 0.0)) throw std::invalid_argument("vol must be > 0");
    if (!(maturity > 0.0)) throw std::invalid_argument("maturity must be > 0");
    if (!std::isfinite(rate)) throw std::invalid_argument("rate must be finite");
}

void SimConfig::validate() const {
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    if (paths < 1) throw std::invalid_argument("paths must be >= 1");
}

double discount_factor(const MarketCondition& mc) {
    return std::exp(-mc.rate * mc.maturity);
}

SampledPath simulate_gbm_path(const MarketCondition& mc, int steps, std::uint64_t seed) {
    mc.validate();
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    const double dt = mc.maturity / steps;
    const double drift = (mc.rate - 0.5 * mc.vol * mc.vol) * dt;
    const double vol_step = mc.vol * std::sqrt(dt);
    NormalSampler normals(seed);
    SampledPath p;
    p.times.resize(static_cast<std::size_t>(steps) + 1);
    p.values.resize(static_cast<std::size_t>(steps) + 1);
    p.times[0] = 0.0;
    p.values[0] = mc.spot;
    double log_x = 0.0;
    for (int i = 1; i <= steps; ++i) {
        log_x += drift + vol_step * normals.next();
        p.times[static_cast<std::size_t>(i)] = (i == steps) ? mc.maturity : i * dt;
        p.values[static_cast<std::size_t>(i)] = mc.spot * std::exp(log_x);
    }
    return p;
}

McSignatureEstimate mc_expected_signature(const MarketCondition& mc, const SimConfig& cfg,
                                          int order) {
    mc.validate();
    cfg.validate();
    if (order < 1) throw std::invalid_argument("order must be >= 1");
    const std::size_t dim = tensor_dim(order);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    for (long k = 0; k < cfg.paths; ++k) {
        const SampledPath path = simulate_gbm_path(mc, cfg.steps, derive_seed(cfg.seed, static_cast<std::uint64_t>(k)));
        const TruncatedTensor sig = path_signature(augment(path), order);
        sum += sig.coeffs();
        sum_sq += sig.coeffs().cwiseProduct(sig.coeffs());
    }
    McSignatureEstimate out(order);
    const double n = static_cast<double>(cfg.paths);
    out.mean.coeffs() = sum / n;
    if (cfg.paths > 1) {
        // unbiased variance of the sample, then SE of the mean
        Eigen::VectorXd var =
            (sum_sq - sum.cwiseProduct(sum) / n).cwiseMax(0.0) / (n - 1.0);
        out.std_error.coeffs() = (var / n).cwiseSqrt();
    }
    return out;
}

} // namespace sigpricer
