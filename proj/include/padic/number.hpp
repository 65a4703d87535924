#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "padic/errors.hpp"

namespace padic {

using bigint = boost::multiprecision::cpp_int;

// Sentinel order for an exact zero.  All genuine valuations in this library
// are tiny (hundreds at most), so the extreme value is safe.
inline constexpr long long ORD_INFINITY = INT64_MAX;

// Library-wide default for the number of unit digits carried by new values.
long long default_precision();
void set_default_precision(long long digits);

bool is_prime(long long n);
bigint pow_bigint(long long base, long long exp);
long long ord_of(const bigint& n, long long p);     // n != 0
bigint mod_inverse(const bigint& a, const bigint& modulus);

// An element of Q_p in canonical form
//     x = p^v * (d0 + d1 p + ... + d{N-1} p^{N-1}) + O(p^{v+N}),   d0 != 0,
// with three states: an exact zero, a normal value as above, and a value that
// is known only to vanish modulo p^A ("zero at available precision", produced
// when an add/sub cancels every tracked digit).  Asking the latter for its
// valuation or norm throws precision_exhausted_error; its upper bound A stays
// available through abs_precision() for residual checks.
class PadicNumber {
public:
    enum class Kind { ExactZero, Normal, ZeroAtPrecision };

    static PadicNumber from_rational(const bigint& num, const bigint& den,
                                     long long prime, long long digits = default_precision());
    static PadicNumber from_integer(const bigint& value, long long prime,
                                    long long digits = default_precision());
    static PadicNumber zero(long long prime);
    static PadicNumber one(long long prime, long long digits = default_precision());
    // Assembles p^valuation * unit with unit reduced mod p^digits; unit must
    // not vanish mod p^digits.
    static PadicNumber from_unit(long long prime, long long valuation,
                                 const bigint& unit, long long digits);
    static PadicNumber zero_at_precision(long long prime, long long abs_precision);

    long long prime() const { return prime_; }
    Kind kind() const { return kind_; }
    bool is_exact_zero() const { return kind_ == Kind::ExactZero; }
    bool is_zero_at_precision() const { return kind_ == Kind::ZeroAtPrecision; }
    bool is_normal() const { return kind_ == Kind::Normal; }

    // ord_p(x); ORD_INFINITY for the exact zero; throws for a cancelled value.
    long long valuation() const;
    // -valuation(): |x|_p = p^{norm_exponent()}.
    long long norm_exponent() const { return -valuation(); }
    // Digits known beyond the valuation (N); meaningful for Normal values.
    long long precision() const;
    // x is pinned modulo p^abs_precision(): v+N, the bound A, or infinity.
    long long abs_precision() const;
    // Unit part in [1, p^N); Normal values only.
    const bigint& unit() const;
    long long digit(long long index) const;

    // Certainty-oriented bound check: true iff |x|_p <= p^{-abs_exponent} is
    // guaranteed by the tracked information (never throws).
    bool bounded_by(long long abs_exponent) const;

    PadicNumber truncated(long long digits) const;

    std::string render() const;

    friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);
    PadicNumber operator-() const;

    // Structural equality (same state, valuation, digits, precision).
    bool operator==(const PadicNumber& other) const;
    bool operator!=(const PadicNumber& other) const { return !(*this == other); }

private:
    PadicNumber(long long prime, Kind kind, long long valuation, bigint unit,
                long long digits)
        : prime_(prime), kind_(kind), valuation_(valuation),
          unit_(std::move(unit)), digits_(digits) {}

    long long prime_ = 0;
    Kind kind_ = Kind::ExactZero;
    long long valuation_ = 0;   // Normal: ord; ZeroAtPrecision: bound A
    bigint unit_ = 0;
    long long digits_ = 0;      // Normal only
};

struct NormAndOrd {
    bool is_zero;        // exact zero: norm 0, ord +infinity
    long long ord;       // valid when !is_zero
};

// Norm/valuation of x; throws precision_exhausted_error for a cancelled value.
NormAndOrd norm_and_ord(const PadicNumber& x);

enum class NormCmp { Less, Equal, Greater };

// Compares |x|_p with p^exponent; throws when the tracked precision cannot decide.
NormCmp cmp_norm_exp(const PadicNumber& x, long long exponent);
// Compares |x|_p with |y|_p; throws when undecidable.
NormCmp cmp_norm(const PadicNumber& x, const PadicNumber& y);

// True iff x - y is pinned to zero modulo p^abs_exponent.
bool agree_mod(const PadicNumber& x, const PadicNumber& y, long long abs_exponent);

PadicNumber pow_int(const PadicNumber& base, long long exponent);

// Closed ball {x : |x - center|_p <= p^radius_exp}.  A ball that is open in
// radius p^g is the closed ball with radius_exp = g - 1.
struct Ball {
    PadicNumber center;
    long long radius_exp;

    bool contains(const PadicNumber& x) const;
    bool contains(const Ball& other) const;
    bool disjoint_from(const Ball& other) const;
};

// Sphere {x : |x - center|_p = p^radius_exp}.
struct Sphere {
    PadicNumber center;
    long long radius_exp;

    bool contains(const PadicNumber& x) const;
};

// Splits a ball into the p^(b.radius_exp - radius_exp) disjoint closed balls
// of radius exponent radius_exp that cover it.
std::vector<Ball> ball_decompose(const Ball& b, long long radius_exp);

// Splits a sphere into the (p-1)p^(s.radius_exp - radius_exp - 1) disjoint
// closed balls of radius exponent radius_exp that cover it.
std::vector<Ball> sphere_decompose(const Sphere& s, long long radius_exp);

}  // namespace padic
