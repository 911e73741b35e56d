#include "sigpricer/expected_signature.hpp"

#include "sigpricer/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigpricer {

int alpha(const Word& w) {
    int count = 0;
    for (int letter : w)
        if (letter == 2 || letter == 3) ++count;
    return count;
}

double en(int n, double t, const MarketCondition& mc) {
    if (n < 0) throw std::invalid_argument("moment index must be >= 0");
    if (t < 0.0) throw std::invalid_argument("time must be >= 0");
    const double growth = n * mc.rate + 0.5 * n * (n - 1) * mc.vol * mc.vol;
    return std::exp(growth * t);
}

std::pair<int, Word> reduce_threes(const Word& w) {
    Word reduced = w;
    int count = 0;
    for (int& letter : reduced) {
        if (letter == 3) {
            letter = 1;
            ++count;
        }
    }
    return {count, reduced};
}

// ---------------------------------------------------------------------------
// ExpPolySum
// ---------------------------------------------------------------------------

ExpPolySum ExpPolySum::constant(double c) {
    ExpPolySum s;
    s.add_term(c, 0, 0.0);
    return s;
}

void ExpPolySum::add_term(double coef, int power, double rate) {
    if (power < 0) throw std::invalid_argument("term power must be >= 0");
    if (coef == 0.0) return;
    auto pos = std::lower_bound(terms_.begin(), terms_.end(), std::make_pair(power, rate),
                                [](const ExpPolyTerm& t, const std::pair<int, double>& key) {
                                    return t.power != key.first ? t.power < key.first
                                                                : t.rate < key.second;
                                });
    if (pos != terms_.end() && pos->power == power && pos->rate == rate) {
        pos->coef += coef;
        if (pos->coef == 0.0) terms_.erase(pos);
    } else {
        terms_.insert(pos, ExpPolyTerm{coef, power, rate});
    }
}

ExpPolySum& ExpPolySum::operator+=(const ExpPolySum& other) {
    for (const auto& t : other.terms_) add_term(t.coef, t.power, t.rate);
    return *this;
}

ExpPolySum ExpPolySum::scaled(double factor) const {
    ExpPolySum out;
    if (factor == 0.0) return out;
    out.terms_ = terms_;
    for (auto& t : out.terms_) t.coef *= factor;
    return out;
}

double ExpPolySum::eval(double t) const {
    double sum = 0.0;
    for (const auto& term : terms_)
        sum += term.coef * std::pow(t, term.power) * std::exp(term.rate * t);
    return sum;
}

namespace {

double term_magnitude_bound(const ExpPolyTerm& term, double t_max) {
    return std::abs(term.coef) * std::pow(t_max, term.power) *
           std::max(1.0, std::exp(term.rate * t_max));
}

} // namespace

void ExpPolySum::prune(double t_max, double rel_tol) {
    if (terms_.empty()) return;
    double max_mag = 0.0;
    for (const auto& term : terms_)
        max_mag = std::max(max_mag, term_magnitude_bound(term, t_max));
    if (max_mag == 0.0) return;
    const double cutoff = rel_tol * max_mag;
    terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                [&](const ExpPolyTerm& term) {
                                    return term_magnitude_bound(term, t_max) < cutoff;
                                }),
                 terms_.end());
}

// ---------------------------------------------------------------------------
// Convolution
// ---------------------------------------------------------------------------

namespace {

// The partial-fraction expansion of int_0^t e^{ls}(t-s)^k e^{m(t-s)} ds has
// coefficients ~ k!/(m-l)^{k+1}; when |m-l|*t is small the pieces cancel to
// ~eps * k!/(|m-l| t)^{k+1} and the closed form is useless. Below this
// threshold the integrand is expanded in powers of (m-l) instead, which is a
// short, well-conditioned series; at exact resonance it terminates at m=0.
constexpr double kSeriesThreshold = 4.0;
constexpr double kSeriesTermTol = 1e-21;
constexpr double kPruneTol = 1e-18;
constexpr int kMaxSeriesTerms = 80;

} // namespace

ExpPolySum convolve(double e_rate, const ExpPolySum& g, double t_max) {
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");
    ExpPolySum out;
    for (const auto& term : g.terms()) {
        const double nu = term.rate - e_rate;
        const int k = term.power;
        if (std::abs(nu) * t_max <= kSeriesThreshold) {
            // e^{e_rate t} * sum_m nu^m/m! * t^{k+m+1}/(k+m+1)
            const double base_scale = std::abs(term.coef) * std::pow(t_max, k + 1);
            double numerator = term.coef; // carries c * nu^m / m!
            for (int m = 0; m < kMaxSeriesTerms; ++m) {
                const double coef = numerator / (k + m + 1);
                out.add_term(coef, k + m + 1, e_rate);
                if (std::abs(coef) * std::pow(t_max, k + m + 1) < kSeriesTermTol * base_scale)
                    break;
                numerator *= nu / (m + 1);
            }
        } else {
            // int_0^t e^{ls}(t-s)^k e^{m(t-s)} ds =
            //   e^{mt} sum_{j=0..k} (-1)^j k!/(k-j)! t^{k-j}/nu^{j+1}
            //   - (-1)^k k!/nu^{k+1} e^{lt}
            double fall = 1.0; // k!/(k-j)! at loop entry
            double sign = 1.0; // (-1)^j
            double nu_pow = nu; // nu^{j+1}
            for (int j = 0; j <= k; ++j) {
                out.add_term(term.coef * sign * fall / nu_pow, k - j, term.rate);
                if (j == k) {
                    // here fall = k!, nu_pow = nu^{k+1}, sign = (-1)^k
                    out.add_term(-term.coef * sign * fall / nu_pow, 0, e_rate);
                    break;
                }
                sign = -sign;
                fall *= k - j;
                nu_pow *= nu;
            }
        }
    }
    out.prune(t_max, kPruneTol);
    return out;
}

// ---------------------------------------------------------------------------
// FTable
// ---------------------------------------------------------------------------

FTable::FTable(int order, const MarketCondition& mc)
    : order_(order), mc_(mc), entries_(tensor_dim(order)) {
    if (order < 1) throw std::invalid_argument("order must be >= 1");
}

const ExpPolySum& FTable::entry(const Word& w) const {
    if (static_cast<int>(w.size()) > order_)
        throw std::invalid_argument("word longer than table order");
    return entries_[word_index(w)];
}

ExpPolySum& FTable::mutable_entry(const Word& w) {
    return entries_[word_index(w)];
}

FTable build_f_table(const MarketCondition& mc, int order) {
    mc.validate();
    FTable table(order, mc);
    const double r = mc.rate;
    const double sigma2 = mc.vol * mc.vol;
    const double maturity = mc.maturity;

    // moment growth rates: E_n(t) = exp(lambda_n t)
    std::vector<double> lambda(static_cast<std::size_t>(order) + 1);
    for (int n = 0; n <= order; ++n)
        lambda[static_cast<std::size_t>(n)] = n * r + 0.5 * n * (n - 1) * sigma2;

    table.mutable_entry({}) = ExpPolySum::constant(1.0);
    {
        ExpPolySum f1;
        f1.add_term(1.0, 1, 0.0); // t
        table.mutable_entry({1}) = f1;
        ExpPolySum f2;
        f2.add_term(1.0, 0, r); // e^{rt} - 1
        f2.add_term(-1.0, 0, 0.0);
        table.mutable_entry({2}) = f2;
    }

    // Words over {1,2} by length; each case integrates the level below
    // against the matching moment growth factor.
    for (int len = 2; len <= order; ++len) {
        Word w(static_cast<std::size_t>(len), 1);
        while (true) {
            const Word tail(w.begin() + 1, w.end());
            const double lam = lambda[static_cast<std::size_t>(alpha(w))];
            if (w[0] == 1) {
                table.mutable_entry(w) = convolve(lam, table.entry(tail), maturity);
            } else if (w[1] == 1) {
                const Word tail2(w.begin() + 2, w.end());
                Word one_tail2 = tail2;
                one_tail2.insert(one_tail2.begin(), 1);
                const double prefactor = r + sigma2 * alpha(tail2);
                table.mutable_entry(w) =
                    convolve(lam, table.entry(one_tail2), maturity).scaled(prefactor);
            } else {
                const Word tail2(w.begin() + 2, w.end());
                Word two_tail2 = tail2;
                two_tail2.insert(two_tail2.begin(), 2);
                const double prefactor = r + sigma2 * (1 + alpha(tail2));
                ExpPolySum entry =
                    convolve(lam, table.entry(two_tail2), maturity).scaled(prefactor);
                entry += convolve(lam, table.entry(tail2), maturity).scaled(0.5 * sigma2);
                table.mutable_entry(w) = entry;
            }
            // next word over letters {1,2}
            int pos = len - 1;
            while (pos >= 0 && w[static_cast<std::size_t>(pos)] == 2) {
                w[static_cast<std::size_t>(pos)] = 1;
                --pos;
            }
            if (pos < 0) break;
            ++w[static_cast<std::size_t>(pos)];
        }
    }

    // Words containing a 3: the third augmented coordinate moves like 1/T
    // times the first, so each 3 contributes a factor 1/T after reduction.
    for (const Word& w : word_enumeration(order)) {
        const auto [threes, reduced] = reduce_threes(w);
        if (threes == 0) continue;
        table.mutable_entry(w) =
            table.entry(reduced).scaled(std::pow(1.0 / maturity, threes));
    }
    return table;
}

TruncatedTensor phi(const FTable& table, double spot) {
    if (!(spot > 0.0)) throw std::invalid_argument("spot must be > 0");
    const MarketCondition& mc = table.condition();
    TruncatedTensor out(table.order());
    out[0] = 1.0;
    for (const Word& w : word_enumeration(table.order())) {
        if (w.empty()) continue;
        const double value = std::pow(spot, alpha(w)) * table.entry(w).eval(mc.maturity);
        if (!std::isfinite(value))
            throw NumericalError("expected-signature coordinate overflowed for word " +
                                 word_to_digits(w));
        out[word_index(w)] = value;
    }
    return out;
}

TruncatedTensor phi(const MarketCondition& mc, int order) {
    const FTable table = build_f_table(mc, order);
    return phi(table, mc.spot);
}

} // namespace sigpricer
