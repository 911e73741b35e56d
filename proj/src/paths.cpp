#include "sigpricer/paths.hpp"

#include <stdexcept>

namespace sigpricer {

void SampledPath::validate() const {
    if (times.size() != values.size())
        throw std::invalid_argument("path times/values length mismatch");
    if (times.size() < 2)
        throw std::invalid_argument("path needs at least two samples");
    if (times.front() != 0.0)
        throw std::invalid_argument("path must start at time 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("path times must be strictly increasing");
    for (double v : values)
        if (!(v > 0.0))
            throw std::invalid_argument("path values must be positive");
}

AugmentedPath augment(const SampledPath& p) {
    p.validate();
    const double x0 = p.values.front();
    const double maturity = p.times.back();
    AugmentedPath out;
    out.times = p.times;
    out.points.resize(p.times.size());
    for (std::size_t i = 0; i < p.times.size(); ++i)
        out.points[i] = Eigen::Vector3d(p.times[i], p.values[i], x0 * p.times[i] / maturity);
    return out;
}

TruncatedTensor segment_signature(const Eigen::Vector3d& from, const Eigen::Vector3d& to,
                                  int order) {
    return exp_level1(to - from, order);
}

namespace {

std::size_t pow3(int n) {
    std::size_t p = 1;
    for (int i = 0; i < n; ++i) p *= 3;
    return p;
}

// One Chen step, in place: sig <- sig (x) exp_level1(inc). Levels are updated
// top-down so that lower levels still hold pre-update values when read; the
// level-n contribution with the segment's level 0 (= 1) is sig's own level n,
// which is why accumulation into sig works. seg is caller-provided scratch
// holding the segment exponential in the same flat layout.
void chen_multiply_inplace(TruncatedTensor& sig, const Eigen::Vector3d& inc,
                           std::vector<double>& seg) {
    const int order = sig.order();
    seg[0] = 1.0;
    {
        std::size_t prev_off = 0, prev_len = 1;
        for (int k = 1; k <= order; ++k) {
            const std::size_t off = level_offset(k);
            for (std::size_t i = 0; i < prev_len; ++i) {
                const double base = seg[prev_off + i] / k;
                seg[off + 3 * i + 0] = base * inc[0];
                seg[off + 3 * i + 1] = base * inc[1];
                seg[off + 3 * i + 2] = base * inc[2];
            }
            prev_off = off;
            prev_len *= 3;
        }
    }
    for (int n = order; n >= 1; --n) {
        const std::size_t out_off = level_offset(n);
        for (int k = 0; k < n; ++k) {
            const int l = n - k;
            const std::size_t a_off = level_offset(k);
            const std::size_t b_off = level_offset(l);
            const std::size_t b_len = pow3(l);
            for (std::size_t i = 0; i < pow3(k); ++i) {
                const double ai = sig[a_off + i];
                if (ai == 0.0) continue;
                const std::size_t dst = out_off + i * b_len;
                for (std::size_t j = 0; j < b_len; ++j)
                    sig[dst + j] += ai * seg[b_off + j];
            }
        }
    }
}

} // namespace

TruncatedTensor path_signature(const AugmentedPath& p, int order) {
    if (order < 1) throw std::invalid_argument("signature order must be >= 1");
    if (p.points.size() < 2)
        throw std::invalid_argument("path needs at least two samples");
    TruncatedTensor sig = TruncatedTensor::identity(order);
    std::vector<double> seg(tensor_dim(order));
    for (std::size_t i = 1; i < p.points.size(); ++i)
        chen_multiply_inplace(sig, p.points[i] - p.points[i - 1], seg);
    return sig;
}

} // namespace sigpricer
