#include "padic/literal.hpp"

#include <cctype>
#include <cstddef>
#include <string>

#include "padic/errors.hpp"

namespace padic {

namespace {

// Exact rational with a positive denominator, reduced on every operation.
struct Rational {
    bigint num;
    bigint den;  // always > 0
};

Rational reduced(bigint num, bigint den, std::size_t pos) {
    if (den == 0) {
        throw parse_error("literal parse error at position " +
                          std::to_string(pos) + ": division by zero");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    bigint g = boost::multiprecision::gcd(num < 0 ? bigint(-num) : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational{std::move(num), std::move(den)};
}

class Parser {
public:
    Parser(const std::string& text, long long prime)
        : text_(text), prime_(prime) {}

    Rational parse() {
        Rational value = parse_expr();
        skip_spaces();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return value;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw parse_error("literal parse error at position " +
                          std::to_string(pos_) + ": " + what);
    }

    void skip_spaces() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool eat(char c) {
        skip_spaces();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_spaces();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bigint parse_digits() {
        skip_spaces();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (pos_ == start) {
            fail("expected a number");
        }
        return bigint(text_.substr(start, pos_ - start));
    }

    Rational parse_base() {
        if (eat('p')) {
            return Rational{bigint(prime_), bigint(1)};
        }
        char c = peek();
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            fail("expected a number or 'p'");
        }
        return Rational{parse_digits(), bigint(1)};
    }

    Rational parse_power() {
        Rational base = parse_base();
        if (!eat('^')) {
            return base;
        }
        bool negative = eat('-');
        std::size_t at = pos_;
        bigint raw = parse_digits();
        if (raw > 4096) {
            pos_ = at;
            fail("exponent too large");
        }
        auto e = static_cast<unsigned>(raw);
        bigint num = boost::multiprecision::pow(base.num, e);
        bigint den = boost::multiprecision::pow(base.den, e);
        if (negative) {
            std::swap(num, den);
        }
        return reduced(std::move(num), std::move(den), at);
    }

    Rational parse_term() {
        Rational value = parse_power();
        for (;;) {
            if (eat('*')) {
                Rational rhs = parse_power();
                value = reduced(value.num * rhs.num, value.den * rhs.den, pos_);
            } else if (eat('/')) {
                std::size_t at = pos_;
                Rational rhs = parse_power();
                value = reduced(value.num * rhs.den, value.den * rhs.num, at);
            } else {
                return value;
            }
        }
    }

    Rational parse_expr() {
        bool negative = eat('-');
        Rational value = parse_term();
        if (negative) {
            value.num = -value.num;
        }
        for (;;) {
            if (eat('+')) {
                Rational rhs = parse_term();
                value = reduced(value.num * rhs.den + rhs.num * value.den,
                                value.den * rhs.den, pos_);
            } else if (eat('-')) {
                Rational rhs = parse_term();
                value = reduced(value.num * rhs.den - rhs.num * value.den,
                                value.den * rhs.den, pos_);
            } else {
                return value;
            }
        }
    }

    const std::string& text_;
    long long prime_;
    std::size_t pos_ = 0;
};

}  // namespace

PadicNumber parse_padic_literal(const std::string& text, long long prime,
                                long long precision) {
    auto [num, den] = parse_rational_literal(text, prime);
    return PadicNumber::from_rational(num, den, prime, precision);
}

std::pair<bigint, bigint> parse_rational_literal(const std::string& text,
                                                 long long prime) {
    if (!is_prime(prime)) {
        throw not_prime_error(prime);
    }
    Parser parser(text, prime);
    Rational value = parser.parse();
    return {std::move(value.num), std::move(value.den)};
}

}  // namespace padic
