#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace sigpricer {

// Truncated tensor algebra over R^3. Coefficients are indexed by words over
// the alphabet {1,2,3}; storage is dense and flat in canonical order:
// length-major, lexicographic within a length. Index 0 is the empty word.

inline constexpr int kAlphabet = 3;

using Word = std::vector<int>;

// Number of words of length < level, i.e. the flat offset of the first
// length-`level` word: (3^level - 1) / 2.
std::size_t level_offset(int level);

// Total number of words of length <= order: (3^(order+1) - 1) / 2.
std::size_t tensor_dim(int order);

// All words of length <= order in canonical order; position 0 is ().
std::vector<Word> word_enumeration(int order);

// Flat canonical index of a word.
std::size_t word_index(const Word& w);

// Inverse of word_index within the given order.
Word word_at(std::size_t index, int order);

// Digit-string rendering used by all file formats: () -> "", (2,1,3) -> "213".
std::string word_to_digits(const Word& w);
Word word_from_digits(const std::string& digits);

class TruncatedTensor {
public:
    explicit TruncatedTensor(int order);

    // Multiplicative identity: 1 on the empty word, 0 elsewhere.
    static TruncatedTensor identity(int order);

    int order() const { return order_; }
    std::size_t size() const { return static_cast<std::size_t>(coeffs_.size()); }

    const Eigen::VectorXd& coeffs() const { return coeffs_; }
    Eigen::VectorXd& coeffs() { return coeffs_; }

    double operator[](std::size_t i) const { return coeffs_[static_cast<Eigen::Index>(i)]; }
    double& operator[](std::size_t i) { return coeffs_[static_cast<Eigen::Index>(i)]; }

private:
    int order_;
    Eigen::VectorXd coeffs_;
};

struct LinearFunctional {
    int order = 0;
    Eigen::VectorXd weights; // one weight per word, canonical order

    explicit LinearFunctional(int order_ = 0)
        : order(order_),
          weights(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(tensor_dim(order_)))) {}
};

// Coefficient-wise sum. Orders must match.
TruncatedTensor add(const TruncatedTensor& a, const TruncatedTensor& b);

// Truncated tensor product: coefficient of w = sum over splittings w = u.v of
// a[u]*b[v]; words longer than the order are discarded. Orders must match.
TruncatedTensor tensor_product(const TruncatedTensor& a, const TruncatedTensor& b);

// Tensor exponential of a level-1 element: sum_{k<=order} increment^(x)k / k!.
// Equals the signature of any linear path with that total increment.
TruncatedTensor exp_level1(const Eigen::Vector3d& increment, int order);

// Coefficient pi^w(t). The word must fit within t.order().
double project(const TruncatedTensor& t, const Word& w);

// sum_w l[w] * t[w]. Orders must match.
double apply_functional(const LinearFunctional& l, const TruncatedTensor& t);

// All interleavings of u and v preserving internal order, with multiplicity
// (duplicates repeated). Combined length must not exceed order_cap.
std::vector<Word> shuffle_product(const Word& u, const Word& v, int order_cap);

} // namespace sigpricer
