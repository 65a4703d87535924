#pragma once

#include "padic/number.hpp"

namespace padic {

// True iff |x - 1|_p < p^(-1/(p-1)); equivalently ord(x-1) >= 1 for odd p and
// ord(x-1) >= 2 for p = 2.  This is the disc on which exp/ln are mutually
// inverse isometries.
bool ep_membership(const PadicNumber& x);

// Power series exp on |x|_p <= p^-1 (odd p) resp. |x|_2 <= 2^-2.  The series
// is summed until Legendre's formula certifies that every remaining term lies
// below the absolute precision of x.
PadicNumber exp_p(const PadicNumber& x);

// Power series log of x = 1 + u on |u|_p < 1, same truncation policy.
PadicNumber ln_p(const PadicNumber& x);

}  // namespace padic
