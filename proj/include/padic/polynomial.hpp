#pragma once

#include <utility>
#include <vector>

#include "padic/number.hpp"

namespace padic {

// Dense univariate polynomial with p-adic coefficients over one prime.
// Coefficients are stored ascending, a_0 first. Trailing exact zeros are
// trimmed at construction; a leading coefficient that is unresolved at its
// precision window cannot certify the degree and is rejected.
class Polynomial {
public:
    Polynomial(long long prime, std::vector<PadicNumber> coefficients);

    static Polynomial from_integers(long long prime,
                                    const std::vector<long long>& coefficients,
                                    long long digits = default_precision());

    long long prime() const { return prime_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const PadicNumber& coeff(int i) const { return coeffs_.at(i); }
    const std::vector<PadicNumber>& coeffs() const { return coeffs_; }

    PadicNumber eval(const PadicNumber& x) const;
    Polynomial derivative() const;

    // g(t) = f(shift + scale * t), expanded exactly.
    Polynomial composed_affine(const PadicNumber& shift,
                               const PadicNumber& scale) const;

private:
    long long prime_;
    std::vector<PadicNumber> coeffs_;
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);

// One maximal straight stretch of the lower hull. The slope is the reduced
// fraction slope_num/slope_den with slope_den > 0; a stretch of slope m and
// horizontal length L certifies exactly L roots of norm p^m in the algebraic
// closure. A non-integer slope therefore certifies those roots avoid Q_p.
struct PolygonSegment {
    long long slope_num;
    long long slope_den;
    long long length;

    bool integer_slope() const { return slope_den == 1; }
};

// Lower convex hull of the points (i, ord a_i), taken over coefficients that
// are not exactly zero. Vertices are hull corners only (collinear interior
// points are merged), so consecutive segment slopes strictly increase.
struct NewtonPolygon {
    std::vector<std::pair<long long, long long>> vertices;
    std::vector<PolygonSegment> segments;

    bool all_slopes_integer() const;
};

// Throws precision_exhausted_error if a coefficient whose valuation is
// unresolved could still influence the hull. Unresolved coefficients whose
// entire possible range lies strictly above the hull are harmless.
NewtonPolygon newton_polygon(const Polynomial& f);

// Newton iteration from a verified seed. Requires
//   ord f(seed) >= 2i+1   and   ord f'(seed) == i
// and returns the unique root congruent to seed mod p^{i+1}. The result is
// re-verified: its residual must vanish within the working window and the
// congruence to the seed is checked. Violated hypotheses raise
// hensel_hypothesis_error naming the failing congruence.
PadicNumber hensel_lift(const Polynomial& f, const PadicNumber& seed,
                        long long i);

// All residues t in [0, p) with a t^2 + b t + c = 0 (mod p), ascending.
std::vector<long long> quadratic_congruence_roots(long long a, long long b,
                                                  long long c, long long p);

// Whether a is a square modulo p (exhaustive scan).
bool has_sqrt_mod(long long a, long long p);

// Every root of f in Z_p, found by residue scanning and recursive rescaling:
// simple residues lift by Newton iteration, repeated residues recurse on
// f(u + p t) renormalized. Repeated roots (or clusters unresolved within
// max_depth rescalings) raise multiplicity_unresolved_error. Deterministic
// order: by ascending residue at each level.
std::vector<PadicNumber> find_zp_roots(const Polynomial& f, int max_depth = 40);

enum class CubicRegime { OneModThree, TwoModThree, PEqualsThree, PEqualsTwo };

struct CubicRoot {
    PadicNumber value;
    // Leading digit of the root's unit part; for the two small roots this is
    // the residue that seeded the lift of the rescaled cubic.
    long long residue_class;
};

struct CubicRoots {
    CubicRegime regime;
    // The unit-norm root comes first when present; rescaled roots follow in
    // ascending residue order.
    std::vector<CubicRoot> roots;
    // Residues solving 3 w^2 + 3 b w + b^2 = 0 (mod p) for the unit part b of
    // 1 - theta - q; empty when that congruence is unsolvable.
    std::vector<long long> congruence_residues;
    bool congruence_solvable;
    NewtonPolygon polygon;
};

// h(y) = y^3 - (1+theta+theta^2) y^2 - (2 theta+1)(1-theta-q) y - (1-theta-q)^2
Polynomial fixed_point_cubic(const PadicNumber& theta, const PadicNumber& q);

// Solves h over Q_p, dispatching on the residue of p mod 3 (with p = 3 and
// p = 2 special-cased). Requires 0 < |theta - 1| < |q| < 1 with theta in the
// exp/log disc; otherwise raises out_of_regime_error. Root counts follow the
// regime: three for p = 1 mod 3; one for p = 2 mod 3 (p >= 5) and for p = 2;
// zero or one for p = 3 depending on |q|. Absences are certified by the
// attached polygon (non-integer slope) or the unsolvable residue congruence.
CubicRoots fixed_point_cubic_roots(const PadicNumber& theta,
                                   const PadicNumber& q);

}  // namespace padic
