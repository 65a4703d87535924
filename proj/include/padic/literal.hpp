#pragma once

#include <string>
#include <utility>

#include "padic/number.hpp"

namespace padic {

// Parses a textual number literal and evaluates it exactly over the rationals
// before converting to a p-adic value at the requested precision.
//
// Grammar (whitespace allowed between tokens):
//   expr   := ['-'] term (('+' | '-') term)*
//   term   := power (('*' | '/') power)*
//   power  := base ['^' ['-'] digits]
//   base   := digits | 'p'
//
// 'p' stands for the ambient prime, so "1+p^3" and "1+7^3" denote the same
// value at p = 7. Division by zero anywhere in the evaluation is a parse
// error (reported with the offending position), as is any trailing garbage.
PadicNumber parse_padic_literal(const std::string& text, long long prime,
                                long long precision = default_precision());

// Same evaluation, but returns the exact rational (numerator, denominator)
// instead of rounding into a p-adic window. Used by consumers that need to
// reuse one literal at several precisions.
std::pair<bigint, bigint> parse_rational_literal(const std::string& text,
                                                 long long prime);

}  // namespace padic
