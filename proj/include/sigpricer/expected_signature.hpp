#pragma once

#include "sigpricer/market.hpp"
#include "sigpricer/tensor_algebra.hpp"

#include <utility>
#include <vector>

namespace sigpricer {

// Closed-form expected signature of the augmented Black-Scholes path. Each
// coordinate of the expectation is spot^alpha(w) times an exponential
// polynomial in t that is built once per (rate, vol, maturity) and is
// spot-free; phi() evaluates the table at t = maturity.

// Count of letters equal to 2 or 3 in w.
int alpha(const Word& w);

// exp((n*r + n(n-1)*sigma^2/2) * t): the n-th moment growth factor,
// E[X_t^n] = X0^n * en(n, t, mc).
double en(int n, double t, const MarketCondition& mc);

// (number of 3s in w, w with every 3 replaced by 1). The third augmented
// coordinate is X0/T times the first, so for every augmented path
// pi^w(S) = (X0/T)^count * pi^reduced(S).
std::pair<int, Word> reduce_threes(const Word& w);

struct ExpPolyTerm {
    double coef;
    int power;   // >= 0
    double rate; // lambda in coef * t^power * exp(lambda * t)
};

// Finite sum of coef * t^power * exp(rate * t). Terms with equal
// (power, rate) are merged; zero coefficients are dropped.
class ExpPolySum {
public:
    ExpPolySum() = default;
    static ExpPolySum constant(double c);

    void add_term(double coef, int power, double rate);
    ExpPolySum& operator+=(const ExpPolySum& other);
    ExpPolySum scaled(double factor) const;

    double eval(double t) const;
    const std::vector<ExpPolyTerm>& terms() const { return terms_; }

    // Drop terms whose magnitude bound over [0, t_max] is below rel_tol times
    // the largest term's bound.
    void prune(double t_max, double rel_tol);

private:
    std::vector<ExpPolyTerm> terms_; // sorted by (power, rate)
};

// t -> integral over [0,t] of exp(e_rate*s) * g(t-s) ds, in closed form.
// Near-resonant rates (|g rate - e_rate| * t_max <= 4) are expanded as a
// series in the rate difference to avoid catastrophic cancellation in the
// partial-fraction form; the exact-resonance case falls out of the series.
ExpPolySum convolve(double e_rate, const ExpPolySum& g, double t_max);

class FTable {
public:
    FTable(int order, const MarketCondition& mc);

    int order() const { return order_; }
    const ExpPolySum& entry(const Word& w) const;
    const MarketCondition& condition() const { return mc_; }

    ExpPolySum& mutable_entry(const Word& w); // used by the builder only

private:
    int order_;
    MarketCondition mc_;
    std::vector<ExpPolySum> entries_; // canonical word order
};

// Builds every coordinate of F for words of length <= order by length
// induction: level 1 in closed form; words starting with 1, (2,1,...) and
// (2,2,...) via convolution against the moment growth factors; any word
// containing a 3 as (1/T)^#3s times its fully 3->1-reduced entry.
FTable build_f_table(const MarketCondition& mc, int order);

// Expected signature at t = maturity: coefficient of w is
// spot^alpha(w) * F_w(maturity); empty word exactly 1.
TruncatedTensor phi(const MarketCondition& mc, int order);

// Same, reusing a prebuilt table (the table is spot-free, so one table
// serves every spot at fixed rate/vol/maturity).
TruncatedTensor phi(const FTable& table, double spot);

} // namespace sigpricer
