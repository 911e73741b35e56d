#pragma once

#include "sigpricer/tensor_algebra.hpp"

#include <Eigen/Dense>

#include <vector>

namespace sigpricer {

// A sampled scalar price path on [0, T]: strictly increasing times starting
// at 0 and ending at T, strictly positive values, at least two samples.
struct SampledPath {
    std::vector<double> times;
    std::vector<double> values;

    void validate() const; // throws std::invalid_argument on violation
};

// The 3-dimensional augmentation (t, X_t, X0*t/T) of a sampled path.
struct AugmentedPath {
    std::vector<double> times;
    std::vector<Eigen::Vector3d> points;
};

AugmentedPath augment(const SampledPath& p);

// Signature of a single linear segment: exp_level1(to - from, order).
TruncatedTensor segment_signature(const Eigen::Vector3d& from, const Eigen::Vector3d& to,
                                  int order);

// Signature of the piecewise-linear path through the sample points, built as
// the left-to-right chained product of segment exponentials. Group-like:
// empty-word coefficient exactly 1.
TruncatedTensor path_signature(const AugmentedPath& p, int order);

} // namespace sigpricer
