#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "padic/errors.hpp"
#include "padic/number.hpp"
#include "padic/polynomial.hpp"
#include "padic/rng.hpp"

using namespace padic;

TEST_CASE("evaluation, derivative and affine composition") {
    // f(x) = x^3 - 2x + 5 over Q_7
    Polynomial f = Polynomial::from_integers(7, {5, -2, 0, 1}, 20);
    CHECK(f.degree() == 3);
    PadicNumber x = PadicNumber::from_integer(3, 7, 20);
    PadicNumber fx = f.eval(x);
    CHECK(fx == PadicNumber::from_integer(27 - 6 + 5, 7, 20).truncated(fx.precision()));

    Polynomial fp = f.derivative();
    CHECK(fp.degree() == 2);
    PadicNumber fpx = fp.eval(x);
    CHECK(agree_mod(fpx, PadicNumber::from_integer(25, 7, 20), 18));

    // (x-1)^2 shifted by 1 collapses to t^2; the lower coefficients cancel
    // beyond recognition, so they surface as unresolved-at-window values.
    Polynomial sq = Polynomial::from_integers(7, {1, -2, 1}, 20);
    Polynomial shifted = sq.composed_affine(PadicNumber::one(7, 20),
                                            PadicNumber::one(7, 20));
    CHECK(shifted.coeff(2) == PadicNumber::one(7, 20));
    CHECK_FALSE(shifted.coeff(0).is_normal());
    CHECK_FALSE(shifted.coeff(1).is_normal());

    // scaling: f(7t) multiplies coefficient k by 7^k
    Polynomial scaled = f.composed_affine(
        PadicNumber::zero(7), PadicNumber::from_integer(7, 7, 20));
    CHECK(scaled.coeff(3).valuation() == 3);
    CHECK(scaled.coeff(1).valuation() == 1);

    // trailing exact zeros trim, all-zero input is rejected
    std::vector<PadicNumber> padded = {PadicNumber::one(7, 10),
                                       PadicNumber::zero(7)};
    CHECK(Polynomial(7, padded).degree() == 0);
    std::vector<PadicNumber> allzero = {PadicNumber::zero(7)};
    CHECK_THROWS_AS(Polynomial(7, allzero), singular_input_error);
    std::vector<PadicNumber> pending_lead = {
        PadicNumber::one(7, 10), PadicNumber::zero_at_precision(7, 12)};
    CHECK_THROWS_AS(Polynomial(7, pending_lead), precision_exhausted_error);
}

namespace {

Polynomial poly_with_valuations(long long p,
                                const std::vector<long long>& ords,
                                long long digits = 30) {
    // Builds sum of p^ords[i] x^i (any unit works; the polygon only sees
    // valuations).
    std::vector<PadicNumber> coeffs;
    for (long long v : ords) {
        coeffs.push_back(
            pow_int(PadicNumber::from_integer(p, p, digits), v));
    }
    return Polynomial(p, std::move(coeffs));
}

}  // namespace

TEST_CASE("lower hulls of frozen coefficient profiles") {
    // single steep segment hiding two interior points
    NewtonPolygon a = newton_polygon(poly_with_valuations(3, {2, 2, 1, 0}));
    REQUIRE(a.segments.size() == 1);
    CHECK(a.segments[0].slope_num == -2);
    CHECK(a.segments[0].slope_den == 3);
    CHECK(a.segments[0].length == 3);
    CHECK_FALSE(a.all_slopes_integer());
    REQUIRE(a.vertices.size() == 2);
    CHECK(a.vertices[0] == std::make_pair(0LL, 2LL));
    CHECK(a.vertices[1] == std::make_pair(3LL, 0LL));

    // two segments, one fractional
    NewtonPolygon b = newton_polygon(poly_with_valuations(3, {4, 3, 1, 0}));
    REQUIRE(b.segments.size() == 2);
    CHECK(b.segments[0].slope_num == -3);
    CHECK(b.segments[0].slope_den == 2);
    CHECK(b.segments[0].length == 2);
    CHECK(b.segments[1].slope_num == -1);
    CHECK(b.segments[1].slope_den == 1);
    CHECK(b.segments[1].length == 1);

    // x - 7: one root of norm 7^{-1}
    NewtonPolygon c = newton_polygon(Polynomial::from_integers(7, {-7, 1}));
    REQUIRE(c.segments.size() == 1);
    CHECK(c.segments[0].slope_num == -1);
    CHECK(c.segments[0].slope_den == 1);
    CHECK(c.segments[0].length == 1);

    // collinear interior points merge into one stretch
    NewtonPolygon d = newton_polygon(poly_with_valuations(5, {2, 1, 0}));
    REQUIRE(d.segments.size() == 1);
    CHECK(d.segments[0].slope_num == -1);
    CHECK(d.segments[0].length == 2);

    // x^2 - p certifies both roots leave Q_p
    NewtonPolygon e = newton_polygon(Polynomial::from_integers(5, {-5, 0, 1}));
    REQUIRE(e.segments.size() == 1);
    CHECK(e.segments[0].slope_num == -1);
    CHECK(e.segments[0].slope_den == 2);
    CHECK_FALSE(e.all_slopes_integer());

    // zero coefficients are skipped, not treated as points
    NewtonPolygon g = newton_polygon(Polynomial::from_integers(7, {-2, 0, 1}));
    REQUIRE(g.segments.size() == 1);
    CHECK(g.segments[0].slope_num == 0);
    CHECK(g.segments[0].length == 2);
}

TEST_CASE("unresolved coefficients only matter when they can reach the hull") {
    // hull is flat at height 0; a coefficient bounded below 7^{-10} floats
    // far above it
    std::vector<PadicNumber> ok = {
        -PadicNumber::one(7, 20), PadicNumber::zero_at_precision(7, 10),
        PadicNumber::one(7, 20)};
    NewtonPolygon a = newton_polygon(Polynomial(7, ok));
    CHECK(a.segments.size() == 1);

    // hull passes through height 1 at index 1; a bound of 0 leaves room below
    std::vector<PadicNumber> bad = {
        pow_int(PadicNumber::from_integer(7, 7, 20), 2),
        PadicNumber::zero_at_precision(7, 0), PadicNumber::one(7, 20)};
    CHECK_THROWS_AS(newton_polygon(Polynomial(7, bad)),
                    precision_exhausted_error);

    // an unresolved constant term always leaves the left end ambiguous
    std::vector<PadicNumber> left = {PadicNumber::zero_at_precision(7, 5),
                                     PadicNumber::one(7, 20),
                                     PadicNumber::one(7, 20)};
    CHECK_THROWS_AS(newton_polygon(Polynomial(7, left)),
                    precision_exhausted_error);
}

TEST_CASE("newton iteration from verified seeds") {
    // sqrt(2) in Q_7 from seed 3
    Polynomial f = Polynomial::from_integers(7, {-2, 0, 1});
    PadicNumber root = hensel_lift(f, PadicNumber::from_integer(3, 7), 0);
    CHECK(agree_mod(root, PadicNumber::from_integer(10, 7), 2));
    CHECK_FALSE(f.eval(root).is_normal());
    PadicNumber sq = root * root;
    CHECK(agree_mod(sq, PadicNumber::from_integer(2, 7), sq.abs_precision() - 2));

    // seed whose residual is a unit
    CHECK_THROWS_AS(hensel_lift(f, PadicNumber::from_integer(1, 7), 0),
                    hensel_hypothesis_error);
    // derivative vanishes exactly
    Polynomial g = Polynomial::from_integers(7, {-7, 0, 1});
    CHECK_THROWS_AS(hensel_lift(g, PadicNumber::from_integer(0, 7), 0),
                    hensel_hypothesis_error);

    // a non-unit derivative handled with the slack index: roots 56 and 14,
    // seed 7 sits within 7^2 of the first
    Polynomial h = Polynomial::from_integers(7, {784, -70, 1});
    PadicNumber r = hensel_lift(h, PadicNumber::from_integer(7, 7), 1);
    CHECK(agree_mod(r, PadicNumber::from_integer(56, 7), 5));
    CHECK_FALSE(h.eval(r).is_normal());
    // the same seed with the wrong slack index is rejected
    CHECK_THROWS_AS(hensel_lift(h, PadicNumber::from_integer(7, 7), 0),
                    hensel_hypothesis_error);

    // an exact root short-circuits
    Polynomial exact = Polynomial::from_integers(7, {-21, 1});
    PadicNumber e = hensel_lift(exact, PadicNumber::from_integer(21, 7), 0);
    CHECK(e == PadicNumber::from_integer(21, 7));
}

TEST_CASE("quadratic residue congruences by exhaustive scan") {
    CHECK(quadratic_congruence_roots(3, 4, 1, 7) ==
          std::vector<long long>{2, 6});
    CHECK(quadratic_congruence_roots(3, 18, 36, 7) ==
          std::vector<long long>{2, 6});
    CHECK(quadratic_congruence_roots(1, 0, 1, 7).empty());

    CHECK(has_sqrt_mod(-3, 7));
    CHECK_FALSE(has_sqrt_mod(-3, 5));
    CHECK(has_sqrt_mod(-3, 13));

    // -3 is a square mod p exactly when p = 1 (mod 3)
    for (long long p : {7, 13, 19, 31, 37, 43}) {
        CHECK(has_sqrt_mod(-3, p));
    }
    for (long long p : {5, 11, 17, 23, 29, 41}) {
        CHECK_FALSE(has_sqrt_mod(-3, p));
    }
}

TEST_CASE("integer root extraction with rescaling") {
    long long p = 7;
    PadicNumber one = PadicNumber::one(p, 30);

    auto linear = [&](const PadicNumber& r) {
        return Polynomial(p, {-r, one});
    };

    // distinct residues: straight lifts
    Polynomial a = linear(PadicNumber::from_integer(3, p, 30)) *
                   linear(PadicNumber::from_integer(10, p, 30));
    auto ra = find_zp_roots(a);
    REQUIRE(ra.size() == 2);
    CHECK(agree_mod(ra[0], PadicNumber::from_integer(3, p, 30), 10));
    CHECK(agree_mod(ra[1], PadicNumber::from_integer(10, p, 30), 10));

    // shared residue 0 mod 7 forces one rescaling
    Polynomial b = linear(PadicNumber::from_integer(7, p, 30)) *
                   linear(PadicNumber::from_integer(14, p, 30));
    auto rb = find_zp_roots(b);
    REQUIRE(rb.size() == 2);
    CHECK(agree_mod(rb[0], PadicNumber::from_integer(7, p, 30), 10));
    CHECK(agree_mod(rb[1], PadicNumber::from_integer(14, p, 30), 10));

    // an exact zero root plus a unit root
    Polynomial c = Polynomial::from_integers(p, {0, -1, 1}, 30);
    auto rc = find_zp_roots(c);
    REQUIRE(rc.size() == 2);
    CHECK(rc[0].is_exact_zero());
    CHECK(agree_mod(rc[1], one, 10));

    // no integer roots at all
    Polynomial d = Polynomial::from_integers(p, {-7, 0, 1}, 30);
    CHECK(find_zp_roots(d).empty());

    // exact repeated root is refused
    Polynomial e = Polynomial::from_integers(p, {0, 0, 1}, 30);
    CHECK_THROWS_AS(find_zp_roots(e), multiplicity_unresolved_error);

    // a repeated root hidden behind arithmetic cancellation is refused too,
    // either as unresolved multiplicity or as exhausted precision
    Polynomial f = Polynomial::from_integers(p, {1, -2, 1}, 30);
    CHECK_THROWS_AS(find_zp_roots(f), error);
}

TEST_CASE("constructed-root polynomials: polygon and extracted roots agree") {
    SplitMix64 rng(0x9e3779b97f4a7c15ULL);
    const long long primes[] = {3, 5, 7};
    for (int iter = 0; iter < 400; ++iter) {
        long long p = primes[rng.below(3)];
        int k = 2 + static_cast<int>(rng.below(3));

        // distinct (valuation, leading digit) pairs keep every residue simple
        // at its own scale
        std::vector<PadicNumber> roots;
        std::vector<std::pair<long long, long long>> tags;
        while (static_cast<int>(roots.size()) < k) {
            long long v = static_cast<long long>(rng.below(3));
            PadicNumber r = random_padic(rng, p, v, 16);
            auto tag = std::make_pair(v, static_cast<long long>(r.digit(0)));
            bool dup = false;
            for (const auto& t : tags) {
                if (t == tag) {
                    dup = true;
                    break;
                }
            }
            if (!dup) {
                tags.push_back(tag);
                roots.push_back(std::move(r));
            }
        }

        PadicNumber one = PadicNumber::one(p, 24);
        Polynomial f(p, {-roots[0], one});
        for (int j = 1; j < k; ++j) {
            f = f * Polynomial(p, {-roots[static_cast<std::size_t>(j)], one});
        }

        // polygon prediction: one unit of length per root at slope -ord(root)
        std::map<long long, long long> by_ord;
        for (const auto& r : roots) {
            by_ord[r.valuation()] += 1;
        }
        NewtonPolygon np = newton_polygon(f);
        std::vector<PolygonSegment> expected;
        for (auto it = by_ord.rbegin(); it != by_ord.rend(); ++it) {
            expected.push_back(PolygonSegment{-it->first, 1, it->second});
        }
        REQUIRE(np.segments.size() == expected.size());
        for (std::size_t j = 0; j < expected.size(); ++j) {
            CHECK(np.segments[j].slope_num == expected[j].slope_num);
            CHECK(np.segments[j].slope_den == expected[j].slope_den);
            CHECK(np.segments[j].length == expected[j].length);
        }

        // every constructed root is recovered, and nothing else
        auto found = find_zp_roots(f);
        REQUIRE(found.size() == roots.size());
        for (const auto& r : roots) {
            int matches = 0;
            for (const auto& candidate : found) {
                if (agree_mod(candidate, r, r.valuation() + 6)) {
                    ++matches;
                }
            }
            CHECK(matches == 1);
        }
    }
}

namespace {

PadicNumber theta_from(long long p, long long shift_exp, long long digits) {
    return PadicNumber::one(p, digits) +
           pow_int(PadicNumber::from_integer(p, p, digits), shift_exp);
}

}  // namespace

TEST_CASE("cubic solver, split-residue branch") {
    long long digits = 72;
    PadicNumber theta = theta_from(7, 3, digits);
    PadicNumber q = PadicNumber::from_integer(7, 7, digits);
    CubicRoots out = fixed_point_cubic_roots(theta, q);

    CHECK(out.regime == CubicRegime::OneModThree);
    CHECK(out.congruence_solvable);
    CHECK(out.congruence_residues == std::vector<long long>{2, 6});
    REQUIRE(out.roots.size() == 3);

    const PadicNumber& y1 = out.roots[0].value;
    CHECK(y1.valuation() == 0);
    CHECK(agree_mod(y1, PadicNumber::from_integer(45, 7, digits), 2));
    CHECK(out.roots[1].value.valuation() == 1);
    CHECK(out.roots[2].value.valuation() == 1);
    CHECK(out.roots[1].residue_class == 2);
    CHECK(out.roots[2].residue_class == 6);

    // residuals sit below the demanded window
    Polynomial h = fixed_point_cubic(theta, q);
    for (const auto& r : out.roots) {
        CHECK(h.eval(r.value).bounded_by(digits - 6));
    }

    // the unit root clusters around 3 at distance exactly |q|
    PadicNumber three = PadicNumber::from_integer(3, 7, digits);
    CHECK((y1 - three).valuation() == 1);
    CHECK((y1 - three + q).valuation() >= 2);

    // the rescaled residues really solve 3w^2 + 3bw + b^2 = 0 mod 7 with the
    // unit part of 1 - theta - q
    PadicNumber m = PadicNumber::one(7, digits) - theta - q;
    long long b = static_cast<long long>(m.digit(0));
    for (std::size_t j = 1; j < out.roots.size(); ++j) {
        long long w = out.roots[j].residue_class;
        CHECK((3 * w * w + 3 * b * w + b * b) % 7 == 0);
    }

    // polygon: two small roots on slope -1, the unit root on slope 0
    REQUIRE(out.polygon.segments.size() == 2);
    CHECK(out.polygon.segments[0].slope_num == -1);
    CHECK(out.polygon.segments[0].length == 2);
    CHECK(out.polygon.segments[1].slope_num == 0);
    CHECK(out.polygon.segments[1].length == 1);
}

TEST_CASE("cubic solver, inert-residue branch") {
    long long digits = 64;
    PadicNumber theta = theta_from(5, 2, digits);
    PadicNumber q = PadicNumber::from_integer(5, 5, digits);
    CubicRoots out = fixed_point_cubic_roots(theta, q);

    CHECK(out.regime == CubicRegime::TwoModThree);
    CHECK_FALSE(out.congruence_solvable);
    REQUIRE(out.roots.size() == 1);
    CHECK(out.roots[0].value.valuation() == 0);
    CHECK(out.roots[0].residue_class == 3);
    Polynomial h = fixed_point_cubic(theta, q);
    CHECK(h.eval(out.roots[0].value).bounded_by(digits - 6));
}

TEST_CASE("cubic solver at p = 3") {
    long long digits = 64;

    // |q| = 1/3: provably empty, certified by the fractional slope
    CubicRoots none = fixed_point_cubic_roots(
        theta_from(3, 2, digits), PadicNumber::from_integer(3, 3, digits));
    CHECK(none.regime == CubicRegime::PEqualsThree);
    CHECK(none.roots.empty());
    CHECK_FALSE(none.congruence_solvable);
    REQUIRE(none.polygon.segments.size() == 1);
    CHECK(none.polygon.segments[0].slope_num == -2);
    CHECK(none.polygon.segments[0].slope_den == 3);
    CHECK(none.polygon.segments[0].length == 3);

    // |q| = 1/9: exactly one root, closer to 3 than 1/3
    CubicRoots one_root = fixed_point_cubic_roots(
        theta_from(3, 4, digits), PadicNumber::from_integer(9, 3, digits));
    CHECK(one_root.regime == CubicRegime::PEqualsThree);
    REQUIRE(one_root.roots.size() == 1);
    const PadicNumber& y = one_root.roots[0].value;
    CHECK(y.valuation() == 1);
    PadicNumber three = PadicNumber::from_integer(3, 3, digits);
    CHECK((y - three).valuation() >= 2);
    Polynomial h = fixed_point_cubic(theta_from(3, 4, digits),
                                     PadicNumber::from_integer(9, 3, digits));
    CHECK(h.eval(y).bounded_by(digits - 6));
    REQUIRE(one_root.polygon.segments.size() == 2);
    CHECK(one_root.polygon.segments[0].slope_num == -3);
    CHECK(one_root.polygon.segments[0].slope_den == 2);
    CHECK(one_root.polygon.segments[1].slope_num == -1);
    CHECK(one_root.polygon.segments[1].slope_den == 1);
}

TEST_CASE("cubic solver at p = 2") {
    long long digits = 64;
    PadicNumber theta = theta_from(2, 2, digits);
    PadicNumber q = PadicNumber::from_integer(2, 2, digits);
    CubicRoots out = fixed_point_cubic_roots(theta, q);

    CHECK(out.regime == CubicRegime::PEqualsTwo);
    REQUIRE(out.roots.size() == 1);
    CHECK(out.roots[0].value.valuation() == 0);
    CHECK(out.roots[0].residue_class == 1);
    CHECK_FALSE(out.congruence_solvable);
    Polynomial h = fixed_point_cubic(theta, q);
    CHECK(h.eval(out.roots[0].value).bounded_by(digits - 6));
}

TEST_CASE("cubic solver rejects parameters off the model family") {
    long long digits = 32;
    // theta = 1: the difference cancels to the window, so the solver reports
    // that it cannot certify theta != 1 rather than inventing a regime
    CHECK_THROWS_AS(
        fixed_point_cubic_roots(PadicNumber::one(7, digits),
                                PadicNumber::from_integer(7, 7, digits)),
        precision_exhausted_error);
    // |theta - 1| = |q|
    CHECK_THROWS_AS(
        fixed_point_cubic_roots(theta_from(7, 1, digits),
                                PadicNumber::from_integer(7, 7, digits)),
        out_of_regime_error);
    // |theta - 1| > |q|
    CHECK_THROWS_AS(
        fixed_point_cubic_roots(theta_from(7, 1, digits),
                                PadicNumber::from_integer(49, 7, digits)),
        out_of_regime_error);
    // q a unit
    CHECK_THROWS_AS(
        fixed_point_cubic_roots(theta_from(7, 3, digits),
                                PadicNumber::from_integer(3, 7, digits)),
        out_of_regime_error);
    // q zero
    CHECK_THROWS_AS(fixed_point_cubic_roots(theta_from(7, 3, digits),
                                            PadicNumber::zero(7)),
                    out_of_regime_error);
}
