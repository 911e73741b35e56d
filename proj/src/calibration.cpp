#include "sigpricer/calibration.hpp"

#include "sigpricer/errors.hpp"
#include "sigpricer/rng.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sigpricer {

std::string to_string(DatasetMode mode) {
    return mode == DatasetMode::Pathwise ? "pathwise" : "pricewise";
}

DatasetMode dataset_mode_from_string(const std::string& name) {
    if (name == "pathwise") return DatasetMode::Pathwise;
    if (name == "pricewise") return DatasetMode::Pricewise;
    throw std::invalid_argument("unknown dataset mode: \"" + name + "\"");
}

void ConditionRanges::validate() const {
    if (!(spot_min > 0.0) || spot_max < spot_min)
        throw std::invalid_argument("invalid spot range");
    if (rate_max < rate_min) throw std::invalid_argument("invalid rate range");
    if (!(vol_min > 0.0) || vol_max < vol_min)
        throw std::invalid_argument("invalid vol range");
    if (!(maturity > 0.0)) throw std::invalid_argument("maturity must be > 0");
}

std::vector<MarketCondition> sample_conditions(const ConditionRanges& ranges, int n,
                                               std::uint64_t seed) {
    ranges.validate();
    if (n < 1) throw std::invalid_argument("need at least one condition");
    std::vector<MarketCondition> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Xoshiro256 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        MarketCondition mc;
        mc.spot = rng.uniform(ranges.spot_min, ranges.spot_max);
        mc.rate = rng.uniform(ranges.rate_min, ranges.rate_max);
        mc.vol = rng.uniform(ranges.vol_min, ranges.vol_max);
        mc.maturity = ranges.maturity;
        out.push_back(mc);
    }
    return out;
}

Dataset build_dataset(const PayoffSpec& spec, const std::vector<MarketCondition>& conditions,
                      DatasetMode mode, int order, const SimConfig& sim,
                      const GroundTruthConfig& gt) {
    spec.validate();
    if (conditions.empty()) throw std::invalid_argument("need at least one condition");
    if (order < 1) throw std::invalid_argument("order must be >= 1");
    if (mode == DatasetMode::Pathwise && spec.kind == PayoffKind::AmericanPut)
        throw std::invalid_argument(
            "AmericanPut is not a path functional; use pricewise mode");

    const Eigen::Index dim = static_cast<Eigen::Index>(tensor_dim(order));
    Dataset ds;
    ds.mode = mode;
    ds.order = order;
    ds.conditions = conditions;
    ds.features.resize(static_cast<Eigen::Index>(conditions.size()), dim);
    ds.targets.resize(static_cast<Eigen::Index>(conditions.size()));
    ds.target_errors = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(conditions.size()));

    for (std::size_t i = 0; i < conditions.size(); ++i) {
        const MarketCondition& mc = conditions[i];
        const Eigen::Index row = static_cast<Eigen::Index>(i);
        if (mode == DatasetMode::Pathwise) {
            const SampledPath path =
                simulate_gbm_path(mc, sim.steps, derive_seed(sim.seed, static_cast<std::uint64_t>(i)));
            ds.features.row(row) = path_signature(augment(path), order).coeffs();
            ds.targets[row] = evaluate_payoff(spec, path, mc);
        } else {
            GroundTruthConfig gt_i = gt;
            gt_i.seed = derive_seed(gt.seed, static_cast<std::uint64_t>(i));
            const PriceEstimate estimate = ground_truth_price(spec, mc, gt_i);
            ds.features.row(row) = phi(mc, order).coeffs();
            ds.targets[row] = estimate.price;
            ds.target_errors[row] = estimate.std_error;
        }
    }
    return ds;
}

double r_squared(const Eigen::VectorXd& truth, const Eigen::VectorXd& prediction) {
    if (truth.size() != prediction.size())
        throw std::invalid_argument("r_squared length mismatch");
    if (truth.size() < 2) throw std::invalid_argument("r_squared needs >= 2 points");
    const double ss_res = (truth - prediction).squaredNorm();
    const double ss_tot = (truth.array() - truth.mean()).matrix().squaredNorm();
    if (ss_tot == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return 1.0 - ss_res / ss_tot;
}

FitResult fit(const Dataset& ds, double ridge) {
    if (ridge < 0.0) throw std::invalid_argument("ridge must be >= 0");
    if (ds.features.rows() != ds.targets.size())
        throw std::invalid_argument("dataset features/targets mismatch");
    if (ds.features.rows() < 1) throw std::invalid_argument("empty dataset");

    FitResult result;
    result.ridge = ridge;
    result.functional = LinearFunctional(ds.order);

    if (ds.targets.isZero(0.0)) {
        // all-zero targets: the zero functional is exact
        result.train_r2 = 1.0;
        result.residual_norm = 0.0;
        return result;
    }

    // Column scaling to unit max-abs keeps the order-4 magnitude spread out
    // of the decomposition; predictions are invariant under the rescale.
    Eigen::VectorXd scale = ds.features.cwiseAbs().colwise().maxCoeff();
    for (Eigen::Index j = 0; j < scale.size(); ++j)
        if (scale[j] == 0.0) scale[j] = 1.0;
    const Eigen::MatrixXd scaled = ds.features * scale.cwiseInverse().asDiagonal();

    Eigen::BDCSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const Eigen::VectorXd projected = svd.matrixU().transpose() * ds.targets;

    Eigen::VectorXd filtered(sv.size());
    if (ridge > 0.0) {
        filtered = sv.array() / (sv.array().square() + ridge);
    } else {
        // minimum-norm least squares: invert above the numerical rank cutoff
        const double tol = std::max(scaled.rows(), scaled.cols()) *
                           std::numeric_limits<double>::epsilon() * sv[0];
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            filtered[i] = sv[i] > tol ? 1.0 / sv[i] : 0.0;
    }
    const Eigen::VectorXd scaled_weights =
        svd.matrixV() * filtered.cwiseProduct(projected);
    result.functional.weights = scaled_weights.cwiseQuotient(scale);

    const Eigen::VectorXd fitted = ds.features * result.functional.weights;
    if (!fitted.allFinite())
        throw NumericalError("least-squares fit produced non-finite predictions");
    result.residual_norm = (fitted - ds.targets).norm();
    result.train_r2 = ds.targets.size() >= 2
                          ? r_squared(ds.targets, fitted)
                          : std::numeric_limits<double>::quiet_NaN();
    return result;
}

EvalResult evaluate(const FitResult& fit_result, DatasetMode mode,
                    const std::vector<MarketCondition>& test_conditions,
                    const PayoffSpec& spec, int order, const GroundTruthConfig& gt) {
    if (test_conditions.empty()) throw std::invalid_argument("empty test set");
    if (fit_result.functional.order != order)
        throw std::invalid_argument("functional order does not match requested order");

    EvalResult out;
    out.rows.reserve(test_conditions.size());
    Eigen::VectorXd truth(static_cast<Eigen::Index>(test_conditions.size()));
    Eigen::VectorXd pred(static_cast<Eigen::Index>(test_conditions.size()));
    for (std::size_t i = 0; i < test_conditions.size(); ++i) {
        const MarketCondition& mc = test_conditions[i];
        GroundTruthConfig gt_i = gt;
        gt_i.seed = derive_seed(gt.seed, static_cast<std::uint64_t>(i));
        const PriceEstimate estimate = ground_truth_price(spec, mc, gt_i);
        const TruncatedTensor expected_sig = phi(mc, order);
        double sig_price = apply_functional(fit_result.functional, expected_sig);
        if (mode == DatasetMode::Pathwise) sig_price *= discount_factor(mc);
        EvalRow row;
        row.condition_id = static_cast<long>(i);
        row.condition = mc;
        row.true_price = estimate.price;
        row.sig_price = sig_price;
        out.rows.push_back(row);
        truth[static_cast<Eigen::Index>(i)] = estimate.price;
        pred[static_cast<Eigen::Index>(i)] = sig_price;
    }
    out.r2 = r_squared(truth, pred);
    return out;
}

} // namespace sigpricer
