#include "sigpricer/calibration.hpp"
#include "sigpricer/expected_signature.hpp"
#include "sigpricer/payoffs.hpp"
#include "sigpricer/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

using namespace sigpricer;

namespace {

Dataset synthetic_dataset(int rows, int order, std::uint64_t seed) {
    Dataset ds;
    ds.mode = DatasetMode::Pricewise;
    ds.order = order;
    const Eigen::Index dim = static_cast<Eigen::Index>(tensor_dim(order));
    ds.features.resize(rows, dim);
    Xoshiro256 rng(seed);
    for (Eigen::Index i = 0; i < ds.features.size(); ++i)
        ds.features.data()[i] = rng.uniform(-1.0, 1.0);
    ds.targets = Eigen::VectorXd::Zero(rows);
    ds.target_errors = Eigen::VectorXd::Zero(rows);
    ds.conditions.assign(static_cast<std::size_t>(rows), MarketCondition{});
    return ds;
}

} // namespace

TEST_CASE("condition sampling: determinism, ranges, per-index stability") {
    ConditionRanges ranges;
    const auto a = sample_conditions(ranges, 10, 99);
    const auto b = sample_conditions(ranges, 10, 99);
    const auto c = sample_conditions(ranges, 5, 99);
    REQUIRE(a.size() == 10);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].spot == b[i].spot);
        CHECK(a[i].rate == b[i].rate);
        CHECK(a[i].vol == b[i].vol);
        CHECK(a[i].spot >= ranges.spot_min);
        CHECK(a[i].spot <= ranges.spot_max);
        CHECK(a[i].rate >= ranges.rate_min);
        CHECK(a[i].rate <= ranges.rate_max);
        CHECK(a[i].vol >= ranges.vol_min);
        CHECK(a[i].vol <= ranges.vol_max);
        CHECK(a[i].maturity == ranges.maturity);
    }
    // drawing fewer conditions does not change the ones drawn
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(a[i].spot == c[i].spot);

    ConditionRanges bad;
    bad.vol_min = 0.4;
    bad.vol_max = 0.1;
    CHECK_THROWS_AS(sample_conditions(bad, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_conditions(ranges, 0, 1), std::invalid_argument);
}

TEST_CASE("pathwise dataset rows are path signatures with raw payoffs") {
    PayoffSpec spec;
    spec.kind = PayoffKind::EuropeanCall;
    spec.moneyness = 0.95;
    const auto conditions = sample_conditions(ConditionRanges{}, 6, 5);
    SimConfig sim;
    sim.steps = 32;
    sim.seed = 1234;
    const auto ds = build_dataset(spec, conditions, DatasetMode::Pathwise, 3, sim, {});

    REQUIRE(ds.features.rows() == 6);
    REQUIRE(ds.features.cols() == static_cast<Eigen::Index>(tensor_dim(3)));
    CHECK((ds.features.col(0).array() == 1.0).all()); // group-like rows
    CHECK(ds.target_errors.isZero(0.0));

    // reproduce row 2 by hand
    const auto path = simulate_gbm_path(conditions[2], sim.steps, derive_seed(sim.seed, 2));
    const auto sig = path_signature(augment(path), 3);
    CHECK((ds.features.row(2).transpose() - sig.coeffs()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(ds.targets[2] == evaluate_payoff(spec, path, conditions[2]));

    PayoffSpec amput;
    amput.kind = PayoffKind::AmericanPut;
    CHECK_THROWS_AS(build_dataset(amput, conditions, DatasetMode::Pathwise, 3, sim, {}),
                    std::invalid_argument);
}

TEST_CASE("pricewise dataset rows are expected signatures with prices") {
    PayoffSpec spec;
    spec.kind = PayoffKind::EuropeanPut;
    spec.moneyness = 1.05;
    const auto conditions = sample_conditions(ConditionRanges{}, 4, 17);
    GroundTruthConfig gt;
    gt.seed = 5150;
    const auto ds = build_dataset(spec, conditions, DatasetMode::Pricewise, 2, {}, gt);

    REQUIRE(ds.features.rows() == 4);
    const auto row0 = phi(conditions[0], 2);
    CHECK((ds.features.row(0).transpose() - row0.coeffs()).cwiseAbs().maxCoeff() == 0.0);
    const double bs = black_scholes_put(conditions[0].spot, 1.05 * conditions[0].spot,
                                        conditions[0].rate, conditions[0].vol,
                                        conditions[0].maturity);
    CHECK(ds.targets[0] == bs);
    CHECK(ds.target_errors.isZero(0.0)); // closed-form targets carry no noise
}

TEST_CASE("r_squared hand values") {
    Eigen::VectorXd y(3), p(3);
    y << 1.0, 2.0, 3.0;
    p << 1.0, 2.0, 3.0;
    CHECK(r_squared(y, p) == doctest::Approx(1.0));
    p << 2.0, 2.0, 2.0; // predicting the mean
    CHECK(r_squared(y, p) == doctest::Approx(0.0));
    p << 1.0, 2.0, 4.0;
    CHECK(r_squared(y, p) == doctest::Approx(0.5)); // 1 - 1/2
    y << 5.0, 5.0, 5.0;
    CHECK(std::isnan(r_squared(y, p)));
    Eigen::VectorXd short_vec(2);
    CHECK_THROWS_AS(r_squared(y, short_vec), std::invalid_argument);
}

TEST_CASE("overdetermined full-rank fit recovers the generating weights") {
    auto ds = synthetic_dataset(60, 2, 7);
    LinearFunctional truth(2);
    Xoshiro256 rng(8);
    for (Eigen::Index i = 0; i < truth.weights.size(); ++i)
        truth.weights[i] = rng.uniform(-2.0, 2.0);
    ds.targets = ds.features * truth.weights;

    const auto result = fit(ds, 0.0);
    CHECK((result.functional.weights - truth.weights).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(result.train_r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(result.residual_norm < 1e-8);
}

TEST_CASE("noisy targets give the expected training r2") {
    auto ds = synthetic_dataset(4000, 1, 77); // 4 columns
    LinearFunctional truth(1);
    truth.weights << 1.0, -2.0, 0.5, 3.0;
    Xoshiro256 noise(78);
    Eigen::VectorXd eps(ds.targets.size());
    for (Eigen::Index i = 0; i < eps.size(); ++i) eps[i] = noise.uniform(-0.5, 0.5);
    ds.targets = ds.features * truth.weights + eps;

    const auto result = fit(ds, 0.0);
    // R2 -> 1 - Var(eps)/Var(y); uniform(-.5,.5) has variance 1/12
    const double var_y = (ds.targets.array() - ds.targets.mean()).square().mean();
    const double expected = 1.0 - (1.0 / 12.0) / var_y;
    CHECK(result.train_r2 == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("exactly linear payoff is interpolated through collinear features") {
    // Forward payoff X_T - K is a linear functional of the signature, so a
    // pathwise fit must drive the residual to zero despite the structurally
    // collinear columns (fixed maturity makes (), (1), (1,1) proportional).
    const double strike = 95.0;
    const auto conditions = sample_conditions(ConditionRanges{}, 50, 31);
    SimConfig sim;
    sim.steps = 16;
    sim.seed = 99;

    Dataset ds;
    ds.mode = DatasetMode::Pathwise;
    ds.order = 2;
    ds.features.resize(50, static_cast<Eigen::Index>(tensor_dim(2)));
    ds.targets.resize(50);
    ds.target_errors = Eigen::VectorXd::Zero(50);
    ds.conditions = conditions;
    std::vector<SampledPath> paths;
    for (int i = 0; i < 50; ++i) {
        paths.push_back(simulate_gbm_path(conditions[static_cast<std::size_t>(i)], sim.steps,
                                          derive_seed(sim.seed, static_cast<std::uint64_t>(i))));
        ds.features.row(i) = path_signature(augment(paths.back()), 2).coeffs();
        ds.targets[i] = paths.back().values.back() - strike;
    }
    const auto result = fit(ds, 0.0);
    CHECK(result.residual_norm < 1e-7 * ds.targets.norm());

    // and it generalizes to fresh paths exactly (the payoff is in the model)
    for (int i = 0; i < 10; ++i) {
        const auto fresh = simulate_gbm_path(conditions[0], sim.steps,
                                             derive_seed(777, static_cast<std::uint64_t>(i)));
        const auto sig = path_signature(augment(fresh), 2);
        const double predicted = apply_functional(result.functional, sig);
        const double target = fresh.values.back() - strike;
        CHECK(predicted == doctest::Approx(target).epsilon(1e-7));
    }
}

TEST_CASE("ridge: continuity at zero and monotone shrinkage") {
    auto ds = synthetic_dataset(30, 2, 21);
    Xoshiro256 rng(22);
    for (Eigen::Index i = 0; i < ds.targets.size(); ++i)
        ds.targets[i] = rng.uniform(-1.0, 1.0);

    const auto exact = fit(ds, 0.0);
    const auto tiny = fit(ds, 1e-14);
    const Eigen::VectorXd p_exact = ds.features * exact.functional.weights;
    const Eigen::VectorXd p_tiny = ds.features * tiny.functional.weights;
    CHECK((p_exact - p_tiny).cwiseAbs().maxCoeff() < 1e-6);

    const auto soft = fit(ds, 1e-4);
    const auto hard = fit(ds, 10.0);
    CHECK(hard.functional.weights.norm() < soft.functional.weights.norm());
    CHECK(soft.functional.weights.norm() <= exact.functional.weights.norm() * (1.0 + 1e-9));
    CHECK_THROWS_AS(fit(ds, -1.0), std::invalid_argument);
}

TEST_CASE("row order does not matter") {
    auto ds = synthetic_dataset(25, 2, 333);
    Xoshiro256 rng(334);
    for (Eigen::Index i = 0; i < ds.targets.size(); ++i)
        ds.targets[i] = rng.uniform(-1.0, 1.0);
    auto shuffled = ds;
    std::vector<Eigen::Index> perm(25);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    for (Eigen::Index i = 0; i < 25; ++i) {
        shuffled.features.row(i) = ds.features.row(perm[static_cast<std::size_t>(i)]);
        shuffled.targets[i] = ds.targets[perm[static_cast<std::size_t>(i)]];
    }
    const auto w1 = fit(ds, 1e-10).functional.weights;
    const auto w2 = fit(shuffled, 1e-10).functional.weights;
    const double scale = std::max(1.0, w1.cwiseAbs().maxCoeff());
    CHECK((w1 - w2).cwiseAbs().maxCoeff() < 1e-8 * scale);
}

TEST_CASE("all-zero targets yield the zero functional") {
    auto ds = synthetic_dataset(10, 2, 44);
    const auto result = fit(ds, 0.0);
    CHECK(result.functional.weights.isZero(0.0));
    CHECK(result.train_r2 == 1.0);
    CHECK(result.residual_norm == 0.0);
}

TEST_CASE("pricewise fit and out-of-sample evaluation on closed-form prices") {
    PayoffSpec spec;
    spec.kind = PayoffKind::EuropeanCall;
    spec.moneyness = 0.99;
    ConditionRanges ranges;
    ranges.spot_min = ranges.spot_max = 100.0; // vary rate and vol only
    const auto train = sample_conditions(ranges, 40, 1001);
    const auto test = sample_conditions(ranges, 15, 2002);
    GroundTruthConfig gt; // closed form, no MC involved

    const auto ds = build_dataset(spec, train, DatasetMode::Pricewise, 3, {}, gt);
    const auto fit_result = fit(ds, 1e-10);
    CHECK(fit_result.train_r2 > 0.999);

    const auto eval_result = evaluate(fit_result, DatasetMode::Pricewise, test, spec, 3, gt);
    REQUIRE(eval_result.rows.size() == 15);
    CHECK(eval_result.r2 > 0.99);
    for (const auto& row : eval_result.rows) {
        CHECK(std::isfinite(row.sig_price));
        CHECK(row.true_price > 0.0);
    }

    CHECK_THROWS_AS(evaluate(fit_result, DatasetMode::Pricewise, {}, spec, 3, gt),
                    std::invalid_argument);
    CHECK_THROWS_AS(evaluate(fit_result, DatasetMode::Pricewise, test, spec, 4, gt),
                    std::invalid_argument);
}
