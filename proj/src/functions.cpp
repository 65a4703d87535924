#include "padic/functions.hpp"

namespace padic {

namespace {

// First k such that j*v - v_p(j!) >= target for every j >= k.  Uses the bound
// v_p(j!) <= (j-1)/(p-1), under which the left side increases in j whenever
// v >= 1 (odd p) or v >= 2 (p = 2).
long long exp_term_horizon(long long v, long long p, long long target) {
    long long k = 1;
    while (k * v * (p - 1) - (k - 1) < target * (p - 1)) ++k;
    return k;
}

// First k such that j*v - v_p(j) >= target for every j >= k, via
// v_p(j) <= log_p(j):  j*v - log_p(j) is increasing, so test p^(kv - target) >= k.
long long ln_term_horizon(long long v, long long p, long long target) {
    long long k = 1;
    while (true) {
        long long margin = k * v - target;
        if (margin >= 0 && pow_bigint(p, margin) >= k) return k;
        ++k;
    }
}

}  // namespace

bool ep_membership(const PadicNumber& x) {
    PadicNumber u = x - PadicNumber::one(x.prime(),
                                         x.is_normal() ? x.precision()
                                                       : default_precision());
    long long threshold = x.prime() == 2 ? -2 : -1;
    return cmp_norm_exp(u, threshold) != NormCmp::Greater;
}

PadicNumber exp_p(const PadicNumber& x) {
    const long long p = x.prime();
    if (x.is_exact_zero()) return PadicNumber::one(p);
    if (x.is_zero_at_precision()) {
        long long min_ord = x.abs_precision();
        if ((p == 2 && min_ord < 2) || (p != 2 && min_ord < 1)) {
            throw precision_exhausted_error("exp argument norm undeterminable");
        }
        // exp(x) = 1 + O(p^A)
        return PadicNumber::one(p, min_ord);
    }
    const long long v = x.valuation();
    if ((p == 2 && v < 2) || (p != 2 && v < 1)) {
        throw out_of_domain_error("exp diverges: |x|_p exceeds the convergence radius");
    }

    const long long target = x.abs_precision();
    const long long horizon = exp_term_horizon(v, p, target);
    PadicNumber sum = PadicNumber::one(p, target);
    PadicNumber term = PadicNumber::one(p, target);
    for (long long k = 1; k < horizon; ++k) {
        term = term * x / PadicNumber::from_integer(k, p, target);
        sum = sum + term;
    }
    return sum;
}

PadicNumber ln_p(const PadicNumber& x) {
    const long long p = x.prime();
    PadicNumber u = x - PadicNumber::one(p, x.is_normal() ? x.precision()
                                                          : default_precision());
    if (u.is_exact_zero()) return PadicNumber::zero(p);
    if (u.is_zero_at_precision()) {
        // x = 1 + O(p^A), so ln x = O(p^A).
        return PadicNumber::zero_at_precision(p, u.abs_precision());
    }
    const long long v = u.valuation();
    if (v < 1) {
        throw out_of_domain_error("log diverges: |x-1|_p must be below 1");
    }

    const long long target = u.abs_precision();
    const long long horizon = ln_term_horizon(v, p, target);
    PadicNumber sum = u;
    PadicNumber upow = u;
    for (long long k = 2; k < horizon; ++k) {
        upow = upow * u;
        PadicNumber term = upow / PadicNumber::from_integer(k, p, target + 8);
        sum = (k % 2 == 0) ? sum - term : sum + term;
    }
    return sum;
}

}  // namespace padic
