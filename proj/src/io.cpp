#include "sigpricer/io.hpp"

#include "sigpricer/errors.hpp"
#include "sigpricer/expected_signature.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace sigpricer {

namespace {

using ordered_json = nlohmann::ordered_json;

double parse_double(const std::string& token, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("bad ") + what + ": \"" + token + "\"");
    }
}

} // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string path_to_csv(const SampledPath& p) {
    std::string out = "time,value\n";
    for (std::size_t i = 0; i < p.times.size(); ++i) {
        out += format_double(p.times[i]);
        out += ',';
        out += format_double(p.values[i]);
        out += '\n';
    }
    return out;
}

SampledPath path_from_csv(const std::string& content) {
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line) || line != "time,value")
        throw std::invalid_argument("path CSV must start with header \"time,value\"");
    SampledPath p;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("bad path CSV row: \"" + line + "\"");
        p.times.push_back(parse_double(line.substr(0, comma), "time"));
        p.values.push_back(parse_double(line.substr(comma + 1), "value"));
    }
    p.validate();
    return p;
}

std::string expected_signature_to_csv(const TruncatedTensor& t) {
    std::string out = "word,alpha,coefficient\n";
    for (const Word& w : word_enumeration(t.order())) {
        out += word_to_digits(w);
        out += ',';
        out += std::to_string(alpha(w));
        out += ',';
        out += format_double(t[word_index(w)]);
        out += '\n';
    }
    return out;
}

std::string saved_fit_to_json(const SavedFit& sf) {
    ordered_json j;
    j["order"] = sf.fit.functional.order;
    j["mode"] = to_string(sf.mode);
    j["payoff"] = {{"kind", to_string(sf.payoff.kind)},
                   {"moneyness", sf.payoff.moneyness},
                   {"vol_strike", sf.payoff.vol_strike}};
    j["ridge"] = sf.fit.ridge;
    j["train_seed"] = sf.train_seed;
    j["train_r2"] = sf.fit.train_r2;
    j["residual_norm"] = sf.fit.residual_norm;
    ordered_json weights = ordered_json::array();
    for (const Word& w : word_enumeration(sf.fit.functional.order)) {
        weights.push_back({{"word", word_to_digits(w)},
                           {"value", sf.fit.functional.weights[static_cast<Eigen::Index>(
                                         word_index(w))]}});
    }
    j["weights"] = std::move(weights);
    return j.dump(2) + "\n";
}

SavedFit saved_fit_from_json(const std::string& content) {
    ordered_json j;
    try {
        j = ordered_json::parse(content);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("bad functional JSON: ") + e.what());
    }
    SavedFit sf;
    try {
        const int order = j.at("order").get<int>();
        if (order < 1) throw std::invalid_argument("order must be >= 1");
        sf.fit.functional = LinearFunctional(order);
        sf.mode = dataset_mode_from_string(j.at("mode").get<std::string>());
        sf.payoff.kind = payoff_kind_from_string(j.at("payoff").at("kind").get<std::string>());
        sf.payoff.moneyness = j.at("payoff").value("moneyness", 1.0);
        sf.payoff.vol_strike = j.at("payoff").value("vol_strike", 0.2);
        sf.fit.ridge = j.at("ridge").get<double>();
        sf.train_seed = j.at("train_seed").get<std::uint64_t>();
        // NaN round-trips as null (an undefined training score is legal)
        if (j.contains("train_r2") && j["train_r2"].is_number())
            sf.fit.train_r2 = j["train_r2"].get<double>();
        else
            sf.fit.train_r2 = std::numeric_limits<double>::quiet_NaN();
        sf.fit.residual_norm = j.value("residual_norm", 0.0);
        const auto& weights = j.at("weights");
        if (weights.size() != tensor_dim(order))
            throw std::invalid_argument("weight count does not match order");
        for (const auto& entry : weights) {
            const Word w = word_from_digits(entry.at("word").get<std::string>());
            if (static_cast<int>(w.size()) > order)
                throw std::invalid_argument("weight word longer than order");
            sf.fit.functional.weights[static_cast<Eigen::Index>(word_index(w))] =
                entry.at("value").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad functional JSON: ") + e.what());
    }
    for (Eigen::Index i = 0; i < sf.fit.functional.weights.size(); ++i)
        if (!std::isfinite(sf.fit.functional.weights[i]))
            throw NumericalError("functional weight is not finite");
    return sf;
}

std::string eval_rows_to_csv(const EvalResult& result) {
    std::string out = "condition_id,x0,r,sigma,true_price,sig_price\n";
    for (const EvalRow& row : result.rows) {
        out += std::to_string(row.condition_id);
        out += ',';
        out += format_double(row.condition.spot);
        out += ',';
        out += format_double(row.condition.rate);
        out += ',';
        out += format_double(row.condition.vol);
        out += ',';
        out += format_double(row.true_price);
        out += ',';
        out += format_double(row.sig_price);
        out += '\n';
    }
    return out;
}

std::string eval_summary_to_json(const EvalResult& result, int n_train, int n_test,
                                 const PayoffSpec& payoff, DatasetMode mode) {
    ordered_json j;
    j["r2"] = result.r2; // serialized as null when NaN
    j["n_train"] = n_train;
    j["n_test"] = n_test;
    j["payoff"] = to_string(payoff.kind);
    j["mode"] = to_string(mode);
    return j.dump(2) + "\n";
}

} // namespace sigpricer
