// Command-line driver: expected-signature dumps, dataset fitting, out-of-sample
// evaluation, single-condition pricing, and path simulation.
//
// All randomness flows from one master seed; train/test condition streams and
// the pricing oracles derive their own sub-seeds by purpose tag, so a config
// file fully determines every output byte. Files are written atomically.

#include "sigpricer/calibration.hpp"
#include "sigpricer/errors.hpp"
#include "sigpricer/expected_signature.hpp"
#include "sigpricer/io.hpp"
#include "sigpricer/market.hpp"
#include "sigpricer/payoffs.hpp"
#include "sigpricer/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

using nlohmann::json;
using namespace sigpricer;

struct RunConfig {
    int order = 4;
    std::uint64_t seed = 42;
    DatasetMode mode = DatasetMode::Pricewise;
    PayoffSpec payoff{PayoffKind::EuropeanCall, 0.99, 0.2};
    int n_train = 100;
    int n_test = 100;
    ConditionRanges conditions;
    MarketCondition market;
    SimConfig sim;
    GroundTruthConfig ground_truth;
    double ridge = 1e-10;
    std::string output_dir = "out";
    std::optional<std::uint64_t> train_seed_override;
    std::optional<std::uint64_t> test_seed_override;
    std::optional<std::uint64_t> oracle_seed_override;

    std::uint64_t train_seed() const {
        return train_seed_override ? *train_seed_override : derive_seed(seed, "train");
    }
    std::uint64_t test_seed() const {
        return test_seed_override ? *test_seed_override : derive_seed(seed, "test");
    }
    std::uint64_t oracle_seed() const {
        return oracle_seed_override ? *oracle_seed_override : derive_seed(seed, "oracle");
    }
};

// Flag values; flags win over the config file.
struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> order;
    std::optional<std::string> mode;
    std::optional<std::string> payoff;
    std::optional<std::string> out;
    std::optional<double> spot, rate, vol, maturity;
};

void read_json_field(const json& j, const char* key, double& dst) {
    if (j.contains(key)) dst = j.at(key).get<double>();
}
void read_json_field(const json& j, const char* key, int& dst) {
    if (j.contains(key)) dst = j.at(key).get<int>();
}
void read_json_field(const json& j, const char* key, long& dst) {
    if (j.contains(key)) dst = j.at(key).get<long>();
}
void read_json_field(const json& j, const char* key, std::uint64_t& dst) {
    if (j.contains(key)) dst = j.at(key).get<std::uint64_t>();
}
void read_json_field(const json& j, const char* key, std::string& dst) {
    if (j.contains(key)) dst = j.at(key).get<std::string>();
}

RunConfig load_config(const std::string& config_path, const CliOverrides& flags) {
    RunConfig cfg;
    if (!config_path.empty()) {
        json j;
        try {
            j = json::parse(read_file(config_path));
        } catch (const std::exception& e) {
            throw std::invalid_argument(std::string("bad config JSON: ") + e.what());
        }
        read_json_field(j, "order", cfg.order);
        read_json_field(j, "seed", cfg.seed);
        if (j.contains("mode")) cfg.mode = dataset_mode_from_string(j.at("mode"));
        if (j.contains("payoff")) {
            const json& p = j.at("payoff");
            if (p.contains("kind")) cfg.payoff.kind = payoff_kind_from_string(p.at("kind"));
            read_json_field(p, "moneyness", cfg.payoff.moneyness);
            read_json_field(p, "vol_strike", cfg.payoff.vol_strike);
        }
        read_json_field(j, "n_train", cfg.n_train);
        read_json_field(j, "n_test", cfg.n_test);
        if (j.contains("conditions")) {
            const json& c = j.at("conditions");
            read_json_field(c, "spot_min", cfg.conditions.spot_min);
            read_json_field(c, "spot_max", cfg.conditions.spot_max);
            read_json_field(c, "rate_min", cfg.conditions.rate_min);
            read_json_field(c, "rate_max", cfg.conditions.rate_max);
            read_json_field(c, "vol_min", cfg.conditions.vol_min);
            read_json_field(c, "vol_max", cfg.conditions.vol_max);
            read_json_field(c, "maturity", cfg.conditions.maturity);
        }
        if (j.contains("market")) {
            const json& m = j.at("market");
            read_json_field(m, "spot", cfg.market.spot);
            read_json_field(m, "rate", cfg.market.rate);
            read_json_field(m, "vol", cfg.market.vol);
            read_json_field(m, "maturity", cfg.market.maturity);
        }
        if (j.contains("sim")) {
            const json& s = j.at("sim");
            read_json_field(s, "steps", cfg.sim.steps);
            read_json_field(s, "paths", cfg.sim.paths);
            if (s.contains("seed")) cfg.oracle_seed_override = s.at("seed").get<std::uint64_t>();
        }
        if (j.contains("ground_truth")) {
            const json& g = j.at("ground_truth");
            read_json_field(g, "binomial_steps", cfg.ground_truth.binomial_steps);
            read_json_field(g, "mc_paths", cfg.ground_truth.mc_paths);
            read_json_field(g, "mc_steps", cfg.ground_truth.mc_steps);
            if (g.contains("seed")) cfg.oracle_seed_override = g.at("seed").get<std::uint64_t>();
        }
        read_json_field(j, "ridge", cfg.ridge);
        read_json_field(j, "output_dir", cfg.output_dir);
        if (j.contains("train_seed")) cfg.train_seed_override = j.at("train_seed").get<std::uint64_t>();
        if (j.contains("test_seed")) cfg.test_seed_override = j.at("test_seed").get<std::uint64_t>();
    }
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.order) cfg.order = *flags.order;
    if (flags.mode) cfg.mode = dataset_mode_from_string(*flags.mode);
    if (flags.payoff) cfg.payoff.kind = payoff_kind_from_string(*flags.payoff);
    if (flags.out) {
        cfg.output_dir = *flags.out;
    } else if (const char* env_out = std::getenv("SIGPRICER_OUT"); env_out && *env_out) {
        cfg.output_dir = env_out;
    }
    if (flags.spot) cfg.market.spot = *flags.spot;
    if (flags.rate) cfg.market.rate = *flags.rate;
    if (flags.vol) cfg.market.vol = *flags.vol;
    if (flags.maturity) cfg.market.maturity = *flags.maturity;

    if (cfg.order < 1) throw std::invalid_argument("order must be >= 1");
    if (cfg.n_train < 1 || cfg.n_test < 1)
        throw std::invalid_argument("n_train and n_test must be >= 1");
    if (cfg.ridge < 0.0) throw std::invalid_argument("ridge must be >= 0");
    cfg.conditions.validate();
    cfg.market.validate();
    cfg.sim.validate();
    cfg.ground_truth.validate();
    cfg.payoff.validate();
    cfg.sim.seed = cfg.oracle_seed();
    cfg.ground_truth.seed = cfg.oracle_seed();
    return cfg;
}

std::filesystem::path out_path(const RunConfig& cfg, const char* name) {
    return std::filesystem::path(cfg.output_dir) / name;
}

int cmd_expected_sig(const RunConfig& cfg) {
    const TruncatedTensor sig = phi(cfg.market, cfg.order);
    const auto path = out_path(cfg, "expected_sig.csv");
    atomic_write(path, expected_signature_to_csv(sig));
    std::cout << "wrote: " << path.string() << "\n";
    return 0;
}

int cmd_fit(const RunConfig& cfg) {
    const auto conditions = sample_conditions(cfg.conditions, cfg.n_train, cfg.train_seed());
    SimConfig sim = cfg.sim;
    sim.seed = derive_seed(cfg.sim.seed, cfg.train_seed());
    GroundTruthConfig gt = cfg.ground_truth;
    gt.seed = derive_seed(cfg.ground_truth.seed, cfg.train_seed());
    const Dataset ds = build_dataset(cfg.payoff, conditions, cfg.mode, cfg.order, sim, gt);
    if (ds.features.rows() < ds.features.cols())
        std::cerr << "warning: " << ds.features.rows() << " samples for "
                  << ds.features.cols()
                  << " coefficients; using ridge/minimum-norm solution\n";
    const FitResult result = fit(ds, cfg.ridge);
    SavedFit saved{result, cfg.mode, cfg.payoff, cfg.train_seed()};
    const auto path = out_path(cfg, "fit.json");
    atomic_write(path, saved_fit_to_json(saved));
    std::cout << "wrote: " << path.string() << "\n";
    std::cout << "train_r2 = " << format_double(result.train_r2) << "\n";
    return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& functional_path) {
    const SavedFit saved = saved_fit_from_json(read_file(functional_path));
    if (saved.fit.functional.order != cfg.order)
        throw std::invalid_argument("functional order " +
                                    std::to_string(saved.fit.functional.order) +
                                    " does not match configured order " +
                                    std::to_string(cfg.order));
    const std::uint64_t test_seed = cfg.test_seed();
    if (test_seed == saved.train_seed)
        throw std::invalid_argument(
            "test seed equals the functional's train seed; refusing to evaluate "
            "on the training conditions");
    const auto conditions = sample_conditions(cfg.conditions, cfg.n_test, test_seed);
    GroundTruthConfig gt = cfg.ground_truth;
    gt.seed = derive_seed(cfg.ground_truth.seed, test_seed);
    const EvalResult result =
        evaluate(saved.fit, saved.mode, conditions, saved.payoff, cfg.order, gt);
    if (std::isnan(result.r2))
        std::cerr << "warning: true prices have zero variance; r2 is undefined\n";
    const auto csv_path = out_path(cfg, "eval.csv");
    const auto json_path = out_path(cfg, "eval_summary.json");
    atomic_write(csv_path, eval_rows_to_csv(result));
    atomic_write(json_path,
                 eval_summary_to_json(result, cfg.n_train, cfg.n_test, saved.payoff, saved.mode));
    std::cout << "wrote: " << csv_path.string() << "\n";
    std::cout << "wrote: " << json_path.string() << "\n";
    std::cout << "r2 = " << format_double(result.r2) << "\n";
    return 0;
}

int cmd_price(const RunConfig& cfg, const std::string& functional_path) {
    const SavedFit saved = saved_fit_from_json(read_file(functional_path));
    const TruncatedTensor expected_sig = phi(cfg.market, saved.fit.functional.order);
    double price = apply_functional(saved.fit.functional, expected_sig);
    if (saved.mode == DatasetMode::Pathwise) price *= discount_factor(cfg.market);
    if (!std::isfinite(price)) throw NumericalError("price is not finite");
    std::cout << to_string(saved.mode) << " price: " << format_double(price) << "\n";
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    const SampledPath path =
        simulate_gbm_path(cfg.market, cfg.sim.steps, derive_seed(cfg.seed, "simulate"));
    const auto csv_path = out_path(cfg, "path.csv");
    atomic_write(csv_path, path_to_csv(path));
    std::cout << "wrote: " << csv_path.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"signature-based derivatives pricing"};
    app.require_subcommand(1);

    std::string config_path;
    std::string functional_path;
    CliOverrides flags;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--seed", flags.seed, "master seed (overrides config)");
        sub->add_option("--order", flags.order, "truncation order (overrides config)");
        sub->add_option("--mode", flags.mode, "dataset mode: pathwise|pricewise");
        sub->add_option("--payoff", flags.payoff, "payoff kind (overrides config)");
        sub->add_option("--out", flags.out, "output directory (overrides config)");
        sub->add_option("--spot", flags.spot, "market spot (overrides config)");
        sub->add_option("--rate", flags.rate, "market rate (overrides config)");
        sub->add_option("--vol", flags.vol, "market vol (overrides config)");
        sub->add_option("--maturity", flags.maturity, "market maturity (overrides config)");
    };

    CLI::App* sub_expected = app.add_subcommand(
        "expected-sig", "dump the closed-form expected signature as CSV");
    add_common(sub_expected);
    CLI::App* sub_fit =
        app.add_subcommand("fit", "fit a pricing functional on a training dataset");
    add_common(sub_fit);
    CLI::App* sub_eval =
        app.add_subcommand("eval", "evaluate a fitted functional out of sample");
    add_common(sub_eval);
    sub_eval->add_option("--functional", functional_path, "fitted functional JSON")
        ->required();
    CLI::App* sub_price =
        app.add_subcommand("price", "price one market condition with a fitted functional");
    add_common(sub_price);
    sub_price->add_option("--functional", functional_path, "fitted functional JSON")
        ->required();
    CLI::App* sub_simulate =
        app.add_subcommand("simulate", "simulate one price path and write it as CSV");
    add_common(sub_simulate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        const RunConfig cfg = load_config(config_path, flags);
        if (sub_expected->parsed()) return cmd_expected_sig(cfg);
        if (sub_fit->parsed()) return cmd_fit(cfg);
        if (sub_eval->parsed()) return cmd_eval(cfg, functional_path);
        if (sub_price->parsed()) return cmd_price(cfg, functional_path);
        if (sub_simulate->parsed()) return cmd_simulate(cfg);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
