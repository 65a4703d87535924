#pragma once

#include <optional>
#include <vector>

#include "padic/number.hpp"
#include "padic/polynomial.hpp"
#include "padic/rng.hpp"

namespace padic {

// Pieces of the domain of x -> ((theta x + q - 1)/(x - pole))^k, named by the
// distances to the attracting fixed point 1, to the pole, and to the repelling
// fixed points.  Write T = |theta - 1| = p^-s and Q = |q| = p^-t (the maps we
// accept satisfy 0 < T < Q < 1).  The top split is on d0 = |x - 1|: A0 is
// d0 < Q, A1 is d0 > Q, and d0 = Q is refined by dinf = |x - pole|:
//
//   p = 1 mod 3 (p >= 7), with repelling points x1 (|x1 - pole| = T) and
//   x2, x3 (|xi - pole| = QT):
//     A0_inf   dinf = Q            A1_inf   dinf = T, |x - x1| = T
//     A2       T < dinf < Q        C1       |x - x1| < T
//     A3       QT < dinf < T       C2, C3   |x - xi| < QT
//     A23_inf  dinf = QT, away from x2 and x3
//     A_inf    0 < dinf < QT
//
//   p = 3 (the sphere dinf = T/3 carries the repelling point when |q| <= 1/9):
//     A2        T/3 < dinf < Q
//     A1_inf_1  dinf = T/3, |x - x1| = T/3 (the whole sphere when |q| = 1/3)
//     A1_inf_2  |x - x1| < T/3
//     A_inf     0 < dinf < T/3
//
//   p = 2 (x1 exists; the spheres dinf = Q and |x - x1| = dinf = T are empty
//   because a difference of two units is always even):
//     A2        T < dinf < Q       A_inf_1  QT < dinf < T
//     A1_inf_1  empty              A_inf_2  dinf = QT
//     A1_inf_2  |x - x1| < dinf = T
//                                  A_inf_3  0 < dinf < QT
//
// Singular is the pole itself, and any point whose distance to the pole is
// pinned below the innermost sphere without a resolved valuation.
enum class RegionTag {
    A0,
    A1,
    A0Inf,
    A2,
    A1Inf,
    C1,
    A3,
    A23Inf,
    C2,
    C3,
    AInf,
    A1Inf1,
    A1Inf2,
    AInf1,
    AInf2,
    AInf3,
    Singular,
};

const char* region_name(RegionTag tag);

enum class Stability { Attracting, Repelling };

struct FixedPointInfo {
    int index;                    // 0 is the point 1; 1..3 follow the solver order
    PadicNumber point;
    PadicNumber multiplier;       // value of the derivative at the point
    long long multiplier_norm_exp;  // |multiplier| = p^multiplier_norm_exp
    Stability stability;
};

// The rational map x -> ((theta x + q - 1)/(x - pole))^k with
// pole = 2 - theta - q.  Evaluation and the derivative work for any k >= 1;
// fixed points, region classification, basin decisions, and the exact local
// scalings are implemented for k = 3, and classification additionally needs
// p = 2, p = 3, or p = 1 mod 3 (for the remaining primes the map has no
// repelling cycle structure to classify against and those calls raise
// out_of_regime_error).
class PottsBetheMap {
public:
    PottsBetheMap(const PadicNumber& theta, const PadicNumber& q, long long k = 3);

    // Map obtained by restricting the q-state tree recursion to a symmetric
    // boundary class of size alpha_size: theta -> 1 + (theta - 1)/alpha_size
    // and q -> q/alpha_size.  The constructor rejects sizes that push the
    // parameters out of 0 < |theta - 1| < |q| < 1.
    static PottsBetheMap from_general(const PadicNumber& theta, const PadicNumber& q,
                                      long long alpha_size, long long k = 3);

    long long prime() const { return prime_; }
    long long k() const { return k_; }
    const PadicNumber& theta() const { return theta_; }
    const PadicNumber& q() const { return q_; }
    const PadicNumber& pole() const { return pole_; }

    // |theta - 1| = p^-s and |q| = p^-t.
    long long s() const { return s_; }
    long long t() const { return t_; }

    // Throws singular_input_error when x is the pole or indistinguishable
    // from it at the available precision.
    PadicNumber eval(const PadicNumber& x) const;
    PadicNumber derivative(const PadicNumber& x) const;

    // Fixed point 1 first, then the roots of the degree-3 fixed-point cubic
    // in the solver's order (unit-norm root, then small roots by residue).
    const std::vector<FixedPointInfo>& fixed_points() const;
    // Certificates from the cubic solver: root residues, the residue
    // congruence for the small roots, and the valuation polygon.
    const CubicRoots& cubic_certificate() const;

    RegionTag classify(const PadicNumber& x) const;

    // Every tag that can occur for this prime, Singular included.
    std::vector<RegionTag> region_tags() const;

    // Tags whose points can stay away from the attractor forever: C1, C2, C3
    // for p = 1 mod 3, A1_inf_2 for p = 2 and for p = 3 (empty when the map
    // has no repelling fixed point).
    const std::vector<RegionTag>& julia_family() const { return julia_family_; }

    // t/(s - t): 0 means |theta - 1| < |q|^2 (the invariant set splits into
    // three balls on the sphere dinf = QT), m >= 1 selects the ladder with m
    // intermediate levels between the two sphere scales.  p = 1 mod 3 only.
    long long markov_index() const;

private:
    void require_dynamics(const char* what) const;
    RegionTag classify_one_mod_three(const PadicNumber& x, long long vinf) const;
    RegionTag classify_three(const PadicNumber& x, long long vinf) const;
    RegionTag classify_two(const PadicNumber& x, long long vinf) const;

    long long prime_;
    long long k_;
    PadicNumber theta_;
    PadicNumber q_;
    PadicNumber one_;
    PadicNumber tm1_;    // theta - 1
    PadicNumber qm1_;    // q - 1
    PadicNumber tm1q_;   // theta - 1 + q
    PadicNumber pole_;   // 2 - theta - q
    long long s_ = 0;
    long long t_ = 0;
    std::optional<CubicRoots> cubic_;
    std::vector<FixedPointInfo> fixed_points_;
    std::vector<RegionTag> julia_family_;
    std::optional<PadicNumber> x1_;
    std::optional<PadicNumber> x2_;
    std::optional<PadicNumber> x3_;
};

struct BasinOutcome {
    enum class Kind {
        Converges,         // the orbit entered A0, which the map never leaves
        InJuliaPartition,  // still inside the julia_family regions after max_iter steps
        HitsSingular,      // the orbit reached the pole (or is pinned onto it)
        Undecided,         // precision ran out before a verdict
    };

    Kind kind;
    int steps;                        // map applications consumed by the verdict
    std::optional<RegionTag> region;  // last region established, if any
};

// Iterates the map, classifying before every step.  Regions outside the
// julia family all flow into A0 within two steps, so Converges verdicts are
// fast; a point that still sits in the julia family after max_iter steps is
// reported as InJuliaPartition.
BasinOutcome basin_decide(const PottsBetheMap& map, const PadicNumber& start,
                          int max_iter = 64);

// Exponent e such that |f(x) - f(y)| = p^e |x - y| for all x, y in the ball.
// The ball must lie inside one of the exact-scaling regions: C1 (e = s - t),
// C2 or C3 (e = s + t) for p = 1 mod 3, A1_inf_2 for p = 3 (e = s - t + 1)
// and for p = 2 (e = s - t).  Otherwise not_scaling_domain_error.
long long local_scaling_exponent(const PottsBetheMap& map, const Ball& domain);

// Image of a ball inside an exact-scaling region; the image is again a ball,
// with radius exponent shifted by the scaling exponent.
Ball ball_image(const PottsBetheMap& map, const Ball& domain);

// Deterministic sample from the given region.  Throws out_of_regime_error for
// a tag foreign to the prime's region system and infeasible_error for a region
// that is empty at these parameters (for example A3 when t = 1, or A0_inf when
// p = 2).
PadicNumber sample_region(const PottsBetheMap& map, RegionTag tag, SplitMix64& rng,
                          long long digits = 0);

}  // namespace padic
