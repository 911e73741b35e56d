#pragma once

#include "sigpricer/calibration.hpp"
#include "sigpricer/paths.hpp"
#include "sigpricer/tensor_algebra.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace sigpricer {

// Shortest round-trip decimal rendering, used by every file format.
std::string format_double(double value);

// Writes via a temporary file in the same directory followed by a rename, so
// a crash never leaves a half-written file at the destination.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

// Path files: "time,value" header plus one row per sample.
std::string path_to_csv(const SampledPath& p);
SampledPath path_from_csv(const std::string& content);

// Expected-signature dump: "word,alpha,coefficient", canonical word order,
// words as digit strings (empty string for the empty word).
std::string expected_signature_to_csv(const TruncatedTensor& t);

// A fitted functional plus the context needed to price with it later.
struct SavedFit {
    FitResult fit;
    DatasetMode mode = DatasetMode::Pricewise;
    PayoffSpec payoff;
    std::uint64_t train_seed = 0;
};

std::string saved_fit_to_json(const SavedFit& sf);
SavedFit saved_fit_from_json(const std::string& content);

// Evaluation outputs: per-condition scatter rows and a run summary.
std::string eval_rows_to_csv(const EvalResult& result);
std::string eval_summary_to_json(const EvalResult& result, int n_train, int n_test,
                                 const PayoffSpec& payoff, DatasetMode mode);

} // namespace sigpricer
