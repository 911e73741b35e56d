#include "sigpricer/tensor_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigpricer {

namespace {

std::size_t pow3(int n) {
    std::size_t p = 1;
    for (int i = 0; i < n; ++i) p *= 3;
    return p;
}

void check_order(int order) {
    if (order < 0) throw std::invalid_argument("order must be >= 0");
}

void check_same_order(const TruncatedTensor& a, const TruncatedTensor& b) {
    if (a.order() != b.order())
        throw std::invalid_argument("tensor order mismatch: " + std::to_string(a.order()) +
                                    " vs " + std::to_string(b.order()));
}

} // namespace

std::size_t level_offset(int level) {
    check_order(level);
    return (pow3(level) - 1) / 2;
}

std::size_t tensor_dim(int order) {
    return level_offset(order + 1);
}

std::vector<Word> word_enumeration(int order) {
    check_order(order);
    std::vector<Word> words;
    words.reserve(tensor_dim(order));
    words.emplace_back(); // ()
    for (int len = 1; len <= order; ++len) {
        Word w(static_cast<std::size_t>(len), 1);
        while (true) {
            words.push_back(w);
            // next word in lexicographic order, letters 1..3
            int pos = len - 1;
            while (pos >= 0 && w[static_cast<std::size_t>(pos)] == kAlphabet) {
                w[static_cast<std::size_t>(pos)] = 1;
                --pos;
            }
            if (pos < 0) break;
            ++w[static_cast<std::size_t>(pos)];
        }
    }
    return words;
}

std::size_t word_index(const Word& w) {
    std::size_t rank = 0;
    for (int letter : w) {
        if (letter < 1 || letter > kAlphabet)
            throw std::invalid_argument("word letter out of range 1..3");
        rank = rank * 3 + static_cast<std::size_t>(letter - 1);
    }
    return level_offset(static_cast<int>(w.size())) + rank;
}

Word word_at(std::size_t index, int order) {
    if (index >= tensor_dim(order))
        throw std::invalid_argument("word index out of range for order");
    int len = 0;
    while (level_offset(len + 1) <= index) ++len;
    std::size_t rank = index - level_offset(len);
    Word w(static_cast<std::size_t>(len));
    for (int pos = len - 1; pos >= 0; --pos) {
        w[static_cast<std::size_t>(pos)] = static_cast<int>(rank % 3) + 1;
        rank /= 3;
    }
    return w;
}

std::string word_to_digits(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (int letter : w) s.push_back(static_cast<char>('0' + letter));
    return s;
}

Word word_from_digits(const std::string& digits) {
    Word w;
    w.reserve(digits.size());
    for (char c : digits) {
        if (c < '1' || c > '3')
            throw std::invalid_argument("word digit string may contain only 1..3: \"" + digits + "\"");
        w.push_back(c - '0');
    }
    return w;
}

TruncatedTensor::TruncatedTensor(int order)
    : order_(order), coeffs_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(tensor_dim(order)))) {
    check_order(order);
}

TruncatedTensor TruncatedTensor::identity(int order) {
    TruncatedTensor t(order);
    t[0] = 1.0;
    return t;
}

TruncatedTensor add(const TruncatedTensor& a, const TruncatedTensor& b) {
    check_same_order(a, b);
    TruncatedTensor out(a.order());
    out.coeffs() = a.coeffs() + b.coeffs();
    return out;
}

TruncatedTensor tensor_product(const TruncatedTensor& a, const TruncatedTensor& b) {
    check_same_order(a, b);
    const int order = a.order();
    TruncatedTensor out(order);
    // Coefficient of a length-n word w: sum over prefix/suffix splits
    // w = u.v with len(u)=k, len(v)=n-k. In flat terms the block of level n
    // is the sum over k of the outer products of blocks k and n-k.
    for (int n = 0; n <= order; ++n) {
        const std::size_t out_off = level_offset(n);
        for (int k = 0; k <= n; ++k) {
            const int l = n - k;
            const std::size_t a_off = level_offset(k);
            const std::size_t b_off = level_offset(l);
            const std::size_t b_len = pow3(l);
            for (std::size_t i = 0; i < pow3(k); ++i) {
                const double ai = a[a_off + i];
                if (ai == 0.0) continue;
                const std::size_t dst = out_off + i * b_len;
                for (std::size_t j = 0; j < b_len; ++j)
                    out[dst + j] += ai * b[b_off + j];
            }
        }
    }
    return out;
}

TruncatedTensor exp_level1(const Eigen::Vector3d& increment, int order) {
    check_order(order);
    TruncatedTensor t(order);
    t[0] = 1.0;
    // level k block = (level k-1 block) (x) increment / k
    std::size_t prev_off = 0;
    std::size_t prev_len = 1;
    for (int k = 1; k <= order; ++k) {
        const std::size_t off = level_offset(k);
        for (std::size_t i = 0; i < prev_len; ++i) {
            const double base = t[prev_off + i] / k;
            t[off + 3 * i + 0] = base * increment[0];
            t[off + 3 * i + 1] = base * increment[1];
            t[off + 3 * i + 2] = base * increment[2];
        }
        prev_off = off;
        prev_len *= 3;
    }
    return t;
}

double project(const TruncatedTensor& t, const Word& w) {
    if (static_cast<int>(w.size()) > t.order())
        throw std::invalid_argument("word longer than tensor order");
    return t[word_index(w)];
}

double apply_functional(const LinearFunctional& l, const TruncatedTensor& t) {
    if (l.order != t.order())
        throw std::invalid_argument("functional/tensor order mismatch");
    return l.weights.dot(t.coeffs());
}

namespace {

void shuffle_rec(const Word& u, std::size_t iu, const Word& v, std::size_t iv,
                 Word& current, std::vector<Word>& out) {
    if (iu == u.size() && iv == v.size()) {
        out.push_back(current);
        return;
    }
    if (iu < u.size()) {
        current.push_back(u[iu]);
        shuffle_rec(u, iu + 1, v, iv, current, out);
        current.pop_back();
    }
    if (iv < v.size()) {
        current.push_back(v[iv]);
        shuffle_rec(u, iu, v, iv + 1, current, out);
        current.pop_back();
    }
}

} // namespace

std::vector<Word> shuffle_product(const Word& u, const Word& v, int order_cap) {
    if (static_cast<int>(u.size() + v.size()) > order_cap)
        throw std::invalid_argument("shuffle product exceeds order cap");
    std::vector<Word> out;
    Word current;
    current.reserve(u.size() + v.size());
    shuffle_rec(u, 0, v, 0, current, out);
    return out;
}

} // namespace sigpricer
