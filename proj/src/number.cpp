#include "padic/number.hpp"

#include <algorithm>
#include <sstream>

namespace padic {

namespace {

long long g_default_precision = 64;

void require_same_prime(const PadicNumber& a, const PadicNumber& b) {
    if (a.prime() != b.prime()) {
        throw error("mixed primes: " + std::to_string(a.prime()) + " vs " +
                    std::to_string(b.prime()));
    }
}

// Reduces x into [0, m).
bigint mod_floor(const bigint& x, const bigint& m) {
    bigint r = x % m;
    if (r < 0) r += m;
    return r;
}

}  // namespace

long long default_precision() { return g_default_precision; }

void set_default_precision(long long digits) {
    if (digits < 1) throw error("precision must be at least 1 digit");
    g_default_precision = digits;
}

bool is_prime(long long n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (long long d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

bigint pow_bigint(long long base, long long exp) {
    bigint result = 1;
    bigint b = base;
    while (exp > 0) {
        if (exp & 1) result *= b;
        b *= b;
        exp >>= 1;
    }
    return result;
}

long long ord_of(const bigint& n, long long p) {
    if (n == 0) throw error("ord of zero integer");
    bigint m = n;
    long long ord = 0;
    while (m % p == 0) {
        m /= p;
        ++ord;
    }
    return ord;
}

bigint mod_inverse(const bigint& a, const bigint& modulus) {
    bigint old_r = mod_floor(a, modulus), r = modulus;
    bigint old_s = 1, s = 0;
    while (r != 0) {
        bigint quotient = old_r / r;
        bigint tmp = old_r - quotient * r;
        old_r = r;
        r = tmp;
        tmp = old_s - quotient * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw error("element not invertible modulo p^N");
    return mod_floor(old_s, modulus);
}

PadicNumber PadicNumber::from_rational(const bigint& num, const bigint& den,
                                       long long prime, long long digits) {
    if (!is_prime(prime)) throw not_prime_error(prime);
    if (digits < 1) throw error("precision must be at least 1 digit");
    if (den == 0) throw division_by_zero_error();
    if (num == 0) return zero(prime);

    long long vnum = ord_of(num, prime);
    long long vden = ord_of(den, prime);
    bigint unum = num / pow_bigint(prime, vnum);
    bigint uden = den / pow_bigint(prime, vden);

    bigint modulus = pow_bigint(prime, digits);
    bigint unit = mod_floor(unum * mod_inverse(uden, modulus), modulus);
    return PadicNumber(prime, Kind::Normal, vnum - vden, std::move(unit), digits);
}

PadicNumber PadicNumber::from_integer(const bigint& value, long long prime,
                                      long long digits) {
    return from_rational(value, 1, prime, digits);
}

PadicNumber PadicNumber::zero(long long prime) {
    if (!is_prime(prime)) throw not_prime_error(prime);
    return PadicNumber(prime, Kind::ExactZero, 0, 0, 0);
}

PadicNumber PadicNumber::one(long long prime, long long digits) {
    return from_integer(1, prime, digits);
}

PadicNumber PadicNumber::from_unit(long long prime, long long valuation,
                                   const bigint& unit, long long digits) {
    if (!is_prime(prime)) throw not_prime_error(prime);
    if (digits < 1) throw error("precision must be at least 1 digit");
    bigint modulus = pow_bigint(prime, digits);
    bigint u = mod_floor(unit, modulus);
    if (u == 0) throw error("unit part vanishes at the requested precision");
    long long shift = ord_of(u, prime);
    if (shift > 0) {
        // Re-normalize so the first digit is nonzero; the shifted-out digits
        // were genuine information, so the digit count shrinks accordingly.
        u /= pow_bigint(prime, shift);
        digits -= shift;
        valuation += shift;
        u = mod_floor(u, pow_bigint(prime, digits));
        if (u == 0) throw error("unit part vanishes at the requested precision");
    }
    return PadicNumber(prime, Kind::Normal, valuation, std::move(u), digits);
}

PadicNumber PadicNumber::zero_at_precision(long long prime, long long abs_precision) {
    if (!is_prime(prime)) throw not_prime_error(prime);
    return PadicNumber(prime, Kind::ZeroAtPrecision, abs_precision, 0, 0);
}

long long PadicNumber::valuation() const {
    switch (kind_) {
        case Kind::ExactZero: return ORD_INFINITY;
        case Kind::Normal: return valuation_;
        case Kind::ZeroAtPrecision:
            throw precision_exhausted_error(
                "valuation undeterminable: value vanishes mod " +
                std::to_string(prime_) + "^" + std::to_string(valuation_) +
                " with no digits left");
    }
    throw error("unreachable");
}

long long PadicNumber::precision() const {
    if (kind_ != Kind::Normal) {
        throw precision_exhausted_error("no digit window on a zero value");
    }
    return digits_;
}

long long PadicNumber::abs_precision() const {
    switch (kind_) {
        case Kind::ExactZero: return ORD_INFINITY;
        case Kind::Normal: return valuation_ + digits_;
        case Kind::ZeroAtPrecision: return valuation_;
    }
    throw error("unreachable");
}

const bigint& PadicNumber::unit() const {
    if (kind_ != Kind::Normal) {
        throw precision_exhausted_error("no unit part on a zero value");
    }
    return unit_;
}

long long PadicNumber::digit(long long index) const {
    if (kind_ != Kind::Normal) {
        throw precision_exhausted_error("no digits on a zero value");
    }
    if (index < 0 || index >= digits_) {
        throw error("digit index " + std::to_string(index) + " outside window of " +
                    std::to_string(digits_));
    }
    bigint q = unit_ / pow_bigint(prime_, index);
    return static_cast<long long>(q % prime_);
}

bool PadicNumber::bounded_by(long long abs_exponent) const {
    switch (kind_) {
        case Kind::ExactZero: return true;
        case Kind::Normal: return valuation_ >= abs_exponent;
        case Kind::ZeroAtPrecision: return valuation_ >= abs_exponent;
    }
    return false;
}

PadicNumber PadicNumber::truncated(long long digits) const {
    if (kind_ != Kind::Normal) return *this;
    if (digits < 1) throw error("precision must be at least 1 digit");
    if (digits >= digits_) return *this;
    bigint u = unit_ % pow_bigint(prime_, digits);
    // d0 != 0, so the truncated unit cannot vanish.
    return PadicNumber(prime_, Kind::Normal, valuation_, std::move(u), digits);
}

std::string PadicNumber::render() const {
    switch (kind_) {
        case Kind::ExactZero:
            return "0";
        case Kind::ZeroAtPrecision: {
            std::ostringstream out;
            out << "O(" << prime_ << "^" << valuation_ << ")";
            return out.str();
        }
        case Kind::Normal: {
            std::ostringstream out;
            out << prime_ << "^" << valuation_ << " * (";
            bigint rest = unit_;
            for (long long i = 0; i < digits_; ++i) {
                long long d = static_cast<long long>(rest % prime_);
                rest /= prime_;
                if (i == 0) {
                    out << d;
                } else if (i == 1) {
                    out << " + " << d << "*" << prime_;
                } else {
                    out << " + " << d << "*" << prime_ << "^" << i;
                }
            }
            out << ") + O(" << prime_ << "^" << (valuation_ + digits_) << ")";
            return out.str();
        }
    }
    throw error("unreachable");
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
    require_same_prime(a, b);
    const long long p = a.prime();

    if (a.is_exact_zero()) return b;
    if (b.is_exact_zero()) return a;

    // Everything else is bounded information: combine modulo p^A where A is
    // the smaller absolute precision.
    const long long abs_a = a.abs_precision();
    const long long abs_b = b.abs_precision();
    const long long bound = std::min(abs_a, abs_b);

    if (a.is_zero_at_precision() && b.is_zero_at_precision()) {
        return PadicNumber::zero_at_precision(p, bound);
    }
    if (a.is_zero_at_precision() || b.is_zero_at_precision()) {
        const PadicNumber& value = a.is_zero_at_precision() ? b : a;
        if (value.valuation() >= bound) {
            return PadicNumber::zero_at_precision(p, bound);
        }
        // Known digits survive up to the bound.
        return PadicNumber::from_unit(p, value.valuation(), value.unit(),
                                      bound - value.valuation());
    }

    const long long va = a.valuation();
    const long long vb = b.valuation();
    const long long v = std::min(va, vb);
    const long long window = bound - v;
    if (window <= 0) return PadicNumber::zero_at_precision(p, bound);

    bigint modulus = pow_bigint(p, window);
    bigint sum = a.unit() * pow_bigint(p, va - v) + b.unit() * pow_bigint(p, vb - v);
    sum %= modulus;
    if (sum < 0) sum += modulus;
    if (sum == 0) return PadicNumber::zero_at_precision(p, bound);
    return PadicNumber::from_unit(p, v, sum, window);
}

PadicNumber PadicNumber::operator-() const {
    if (kind_ != Kind::Normal) return *this;
    bigint modulus = pow_bigint(prime_, digits_);
    return PadicNumber(prime_, Kind::Normal, valuation_, modulus - unit_, digits_);
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) {
    return a + (-b);
}

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
    require_same_prime(a, b);
    const long long p = a.prime();
    if (a.is_exact_zero() || b.is_exact_zero()) return PadicNumber::zero(p);
    if (a.is_zero_at_precision() || b.is_zero_at_precision()) {
        // |xy| <= p^-(A1+v2) style bounds; for two cancelled values the bounds add.
        long long bound = 0;
        bound += a.is_zero_at_precision() ? a.abs_precision() : a.valuation();
        bound += b.is_zero_at_precision() ? b.abs_precision() : b.valuation();
        return PadicNumber::zero_at_precision(p, bound);
    }
    long long digits = std::min(a.precision(), b.precision());
    bigint modulus = pow_bigint(p, digits);
    bigint unit = (a.unit() * b.unit()) % modulus;
    return PadicNumber::from_unit(p, a.valuation() + b.valuation(), unit, digits);
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) {
    require_same_prime(a, b);
    const long long p = a.prime();
    if (b.is_exact_zero()) throw division_by_zero_error();
    if (b.is_zero_at_precision()) {
        throw precision_exhausted_error(
            "division by a value that vanishes at available precision");
    }
    if (a.is_exact_zero()) return PadicNumber::zero(p);
    if (a.is_zero_at_precision()) {
        return PadicNumber::zero_at_precision(p, a.abs_precision() - b.valuation());
    }
    long long digits = std::min(a.precision(), b.precision());
    bigint modulus = pow_bigint(p, digits);
    bigint unit = (a.unit() * mod_inverse(b.unit(), modulus)) % modulus;
    return PadicNumber::from_unit(p, a.valuation() - b.valuation(), unit, digits);
}

bool PadicNumber::operator==(const PadicNumber& other) const {
    return prime_ == other.prime_ && kind_ == other.kind_ &&
           valuation_ == other.valuation_ && digits_ == other.digits_ &&
           unit_ == other.unit_;
}

NormAndOrd norm_and_ord(const PadicNumber& x) {
    if (x.is_exact_zero()) return {true, ORD_INFINITY};
    return {false, x.valuation()};  // throws for a cancelled value
}

NormCmp cmp_norm_exp(const PadicNumber& x, long long exponent) {
    if (x.is_exact_zero()) return NormCmp::Less;
    if (x.is_zero_at_precision()) {
        // |x| <= p^-A; decisive only when that bound is already below p^exponent.
        if (-x.abs_precision() < exponent) return NormCmp::Less;
        throw precision_exhausted_error(
            "norm comparison undecidable at available precision");
    }
    long long norm_exp = -x.valuation();
    if (norm_exp < exponent) return NormCmp::Less;
    if (norm_exp == exponent) return NormCmp::Equal;
    return NormCmp::Greater;
}

NormCmp cmp_norm(const PadicNumber& x, const PadicNumber& y) {
    if (y.is_exact_zero()) {
        if (x.is_exact_zero()) return NormCmp::Equal;
        if (x.is_zero_at_precision()) {
            throw precision_exhausted_error(
                "norm comparison undecidable at available precision");
        }
        return NormCmp::Greater;
    }
    if (y.is_zero_at_precision()) {
        if (x.is_exact_zero()) {
            throw precision_exhausted_error(
                "norm comparison undecidable at available precision");
        }
        if (x.is_zero_at_precision()) {
            throw precision_exhausted_error(
                "norm comparison undecidable at available precision");
        }
        if (-x.valuation() > -y.abs_precision()) return NormCmp::Greater;
        throw precision_exhausted_error(
            "norm comparison undecidable at available precision");
    }
    return cmp_norm_exp(x, -y.valuation());
}

bool agree_mod(const PadicNumber& x, const PadicNumber& y, long long abs_exponent) {
    return (x - y).bounded_by(abs_exponent);
}

PadicNumber pow_int(const PadicNumber& base, long long exponent) {
    long long digits = base.is_normal() ? base.precision() : default_precision();
    if (exponent < 0) {
        return pow_int(PadicNumber::one(base.prime(), digits) / base, -exponent);
    }
    PadicNumber result = PadicNumber::one(base.prime(), digits);
    PadicNumber b = base;
    long long e = exponent;
    while (e > 0) {
        if (e & 1) result = result * b;
        e >>= 1;
        if (e > 0) b = b * b;
    }
    return result;
}

bool Ball::contains(const PadicNumber& x) const {
    NormCmp c = cmp_norm_exp(x - center, radius_exp);
    return c != NormCmp::Greater;
}

bool Ball::contains(const Ball& other) const {
    if (other.radius_exp > radius_exp) return false;
    NormCmp c = cmp_norm_exp(other.center - center, radius_exp);
    return c != NormCmp::Greater;
}

bool Ball::disjoint_from(const Ball& other) const {
    // Two closed balls are disjoint iff the center distance exceeds both radii.
    long long r = std::max(radius_exp, other.radius_exp);
    NormCmp c = cmp_norm_exp(other.center - center, r);
    return c == NormCmp::Greater;
}

bool Sphere::contains(const PadicNumber& x) const {
    return cmp_norm_exp(x - center, radius_exp) == NormCmp::Equal;
}

namespace {

PadicNumber power_of_p(long long p, long long exponent, long long digits) {
    if (exponent >= 0) {
        return PadicNumber::from_integer(pow_bigint(p, exponent), p, digits);
    }
    return PadicNumber::from_rational(1, pow_bigint(p, -exponent), p, digits);
}

}  // namespace

std::vector<Ball> ball_decompose(const Ball& b, long long radius_exp) {
    if (radius_exp > b.radius_exp) {
        throw error("target radius exceeds the ball being decomposed");
    }
    long long levels = b.radius_exp - radius_exp;
    if (levels > 24) throw infeasible_error("ball decomposition too large");
    const long long p = b.center.prime();
    bigint count = pow_bigint(p, levels);
    if (count > 2000000) throw infeasible_error("ball decomposition too large");

    long long digits = b.center.is_normal() ? b.center.precision() : default_precision();
    PadicNumber step = power_of_p(p, -b.radius_exp, digits);
    std::vector<Ball> parts;
    for (bigint j = 0; j < count; ++j) {
        PadicNumber offset = (j == 0)
            ? PadicNumber::zero(p)
            : PadicNumber::from_integer(j, p, digits) * step;
        parts.push_back(Ball{b.center + offset, radius_exp});
    }
    return parts;
}

std::vector<Ball> sphere_decompose(const Sphere& s, long long radius_exp) {
    if (radius_exp >= s.radius_exp) {
        throw error("target radius must be strictly inside the sphere radius");
    }
    long long levels = s.radius_exp - radius_exp;   // >= 1
    if (levels > 24) throw infeasible_error("sphere decomposition too large");
    const long long p = s.center.prime();
    bigint count = pow_bigint(p, levels - 1) * (p - 1);
    if (count > 2000000) throw infeasible_error("sphere decomposition too large");

    long long digits = s.center.is_normal() ? s.center.precision() : default_precision();
    PadicNumber step = power_of_p(p, -s.radius_exp, digits);
    std::vector<Ball> parts;
    bigint modulus = pow_bigint(p, levels);
    for (bigint u = 1; u < modulus; ++u) {
        if (u % p == 0) continue;  // offsets must keep |x - center| exactly on the sphere
        PadicNumber offset = PadicNumber::from_integer(u, p, digits) * step;
        parts.push_back(Ball{s.center + offset, radius_exp});
    }
    return parts;
}

}  // namespace padic
