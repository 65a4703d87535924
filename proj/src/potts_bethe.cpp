#include "padic/potts_bethe.hpp"

#include <algorithm>
#include <string>

namespace padic {

namespace {

long long checked_same_prime(const PadicNumber& theta, const PadicNumber& q) {
    if (theta.prime() != q.prime())
        throw error("theta and q must live over the same prime");
    return theta.prime();
}

long long working_digits(const PadicNumber& theta, const PadicNumber& q) {
    long long d = default_precision();
    if (theta.is_normal()) d = std::max(d, theta.precision());
    if (q.is_normal()) d = std::max(d, q.precision());
    return d;
}

Stability stability_from_exponent(long long norm_exp) {
    if (norm_exp < 0) return Stability::Attracting;
    if (norm_exp > 0) return Stability::Repelling;
    throw error("fixed point with an indifferent multiplier; parameters violate |theta-1| < |q|");
}

// Distance probe: resolved valuation, or exact zero, or only an upper bound.
struct Probe {
    enum class Kind { Exact, Ord, Bound } kind;
    long long value;  // Ord: the valuation; Bound: |d| <= p^-value
};

Probe probe(const PadicNumber& d) {
    if (d.is_exact_zero()) return {Probe::Kind::Exact, 0};
    if (d.is_zero_at_precision()) return {Probe::Kind::Bound, d.abs_precision()};
    return {Probe::Kind::Ord, d.valuation()};
}

}  // namespace

const char* region_name(RegionTag tag) {
    switch (tag) {
        case RegionTag::A0: return "A0";
        case RegionTag::A1: return "A1";
        case RegionTag::A0Inf: return "A0_inf";
        case RegionTag::A2: return "A2";
        case RegionTag::A1Inf: return "A1_inf";
        case RegionTag::C1: return "C1";
        case RegionTag::A3: return "A3";
        case RegionTag::A23Inf: return "A23_inf";
        case RegionTag::C2: return "C2";
        case RegionTag::C3: return "C3";
        case RegionTag::AInf: return "A_inf";
        case RegionTag::A1Inf1: return "A1_inf_1";
        case RegionTag::A1Inf2: return "A1_inf_2";
        case RegionTag::AInf1: return "A_inf_1";
        case RegionTag::AInf2: return "A_inf_2";
        case RegionTag::AInf3: return "A_inf_3";
        case RegionTag::Singular: return "singular";
    }
    throw error("unknown region tag");
}

PottsBetheMap::PottsBetheMap(const PadicNumber& theta, const PadicNumber& q, long long k)
    : prime_(checked_same_prime(theta, q)),
      k_(k),
      theta_(theta),
      q_(q),
      one_(PadicNumber::one(prime_, working_digits(theta, q))),
      tm1_(theta_ - one_),
      qm1_(q_ - one_),
      tm1q_(tm1_ + q_),
      pole_(one_ + one_ - theta_ - q_) {
    if (k_ < 1) throw out_of_regime_error("tree order must be at least 1");

    if (tm1_.is_exact_zero())
        throw out_of_regime_error("theta = 1 makes the map constant");
    if (tm1_.is_zero_at_precision())
        throw precision_exhausted_error("theta - 1 has an unresolved valuation");
    s_ = tm1_.valuation();

    if (q_.is_exact_zero())
        throw out_of_regime_error("q = 0 is outside the admissible family");
    if (q_.is_zero_at_precision())
        throw precision_exhausted_error("q has an unresolved valuation");
    t_ = q_.valuation();

    if (t_ < 1 || s_ <= t_)
        throw out_of_regime_error("parameters must satisfy 0 < |theta - 1| < |q| < 1");

    if (k_ != 3) return;

    cubic_ = fixed_point_cubic_roots(theta_, q_);

    PadicNumber mult0 = derivative(one_);
    fixed_points_.push_back({0, one_, mult0, mult0.norm_exponent(),
                             stability_from_exponent(mult0.norm_exponent())});
    int index = 1;
    for (const CubicRoot& root : cubic_->roots) {
        PadicNumber x = pole_ + tm1_ * root.value;
        PadicNumber mult = derivative(x);
        fixed_points_.push_back({index, x, mult, mult.norm_exponent(),
                                 stability_from_exponent(mult.norm_exponent())});
        ++index;
    }
    if (fixed_points_.size() >= 2) x1_ = fixed_points_[1].point;
    if (fixed_points_.size() == 4) {
        x2_ = fixed_points_[2].point;
        x3_ = fixed_points_[3].point;
        // Geometry behind the region system: the two small-root points sit at
        // distance |theta - 1| from x1 and at distance |q(theta - 1)| from
        // each other.  A violation would mean the solver and the map disagree.
        if (cmp_norm_exp(*x2_ - *x1_, -s_) != NormCmp::Equal ||
            cmp_norm_exp(*x3_ - *x1_, -s_) != NormCmp::Equal ||
            cmp_norm_exp(*x2_ - *x3_, -(s_ + t_)) != NormCmp::Equal)
            throw error("fixed points violate the expected mutual distances");
    }

    if (prime_ % 3 == 1) {
        julia_family_ = {RegionTag::C1, RegionTag::C2, RegionTag::C3};
    } else if ((prime_ == 3 && t_ >= 2) || prime_ == 2) {
        julia_family_ = {RegionTag::A1Inf2};
    }
}

PottsBetheMap PottsBetheMap::from_general(const PadicNumber& theta, const PadicNumber& q,
                                          long long alpha_size, long long k) {
    if (alpha_size < 1)
        throw out_of_regime_error("boundary class size must be at least 1");
    long long digits = working_digits(theta, q) + 8;
    PadicNumber a = PadicNumber::from_integer(alpha_size, theta.prime(), digits);
    PadicNumber one = PadicNumber::one(theta.prime(), digits);
    return PottsBetheMap(one + (theta - one) / a, q / a, k);
}

void PottsBetheMap::require_dynamics(const char* what) const {
    if (k_ != 3)
        throw out_of_regime_error(std::string(what) + " is implemented for tree order 3 only");
    if (prime_ != 2 && prime_ != 3 && prime_ % 3 != 1)
        throw out_of_regime_error(std::string(what) +
                                  " needs p = 2, p = 3, or p = 1 mod 3; for the other primes "
                                  "every orbit converges and there is nothing to classify");
}

PadicNumber PottsBetheMap::eval(const PadicNumber& x) const {
    PadicNumber den = x - pole_;
    if (den.is_exact_zero())
        throw singular_input_error("evaluation at the pole");
    if (den.is_zero_at_precision())
        throw singular_input_error(
            "the input is indistinguishable from the pole at the available precision");
    PadicNumber num = theta_ * x + qm1_;
    return pow_int(num / den, k_);
}

PadicNumber PottsBetheMap::derivative(const PadicNumber& x) const {
    PadicNumber den = x - pole_;
    if (den.is_exact_zero())
        throw singular_input_error("derivative at the pole");
    if (den.is_zero_at_precision())
        throw singular_input_error(
            "the input is indistinguishable from the pole at the available precision");
    PadicNumber num = theta_ * x + qm1_;
    PadicNumber factor = PadicNumber::from_integer(k_, prime_, one_.precision());
    return factor * pow_int(num, k_ - 1) * tm1_ * tm1q_ / pow_int(den, k_ + 1);
}

const std::vector<FixedPointInfo>& PottsBetheMap::fixed_points() const {
    if (k_ != 3)
        throw out_of_regime_error("fixed points are computed for tree order 3 only");
    return fixed_points_;
}

const CubicRoots& PottsBetheMap::cubic_certificate() const {
    if (!cubic_)
        throw out_of_regime_error("fixed points are computed for tree order 3 only");
    return *cubic_;
}

namespace {

// Decides between "strictly inside the sphere around center" (near_tag) and
// "on the sphere" (on_tag) for a point already known to satisfy
// |x - center| <= p^-r.
RegionTag split_sphere(const PadicNumber& d, long long r, RegionTag near_tag,
                       RegionTag on_tag) {
    Probe pr = probe(d);
    switch (pr.kind) {
        case Probe::Kind::Exact:
            return near_tag;
        case Probe::Kind::Bound:
            if (pr.value > r) return near_tag;
            throw precision_exhausted_error(
                "too few digits to separate the point from the nearby fixed point");
        case Probe::Kind::Ord:
            if (pr.value > r) return near_tag;
            if (pr.value == r) return on_tag;
            throw error("point claims to be off a sphere it must lie on");
    }
    throw error("unreachable");
}

}  // namespace

RegionTag PottsBetheMap::classify_one_mod_three(const PadicNumber& x, long long vinf) const {
    if (vinf < s_) return RegionTag::A2;
    if (vinf == s_)
        return split_sphere(x - *x1_, s_, RegionTag::C1, RegionTag::A1Inf);
    if (vinf < s_ + t_) return RegionTag::A3;
    if (vinf > s_ + t_) return RegionTag::AInf;

    // On the sphere dinf = QT: near x2, near x3, or away from both.
    Probe p2 = probe(x - *x2_);
    if (p2.kind == Probe::Kind::Exact) return RegionTag::C2;
    if (p2.kind == Probe::Kind::Ord && p2.value > s_ + t_) return RegionTag::C2;
    if (p2.kind == Probe::Kind::Bound && p2.value > s_ + t_) return RegionTag::C2;
    Probe p3 = probe(x - *x3_);
    if (p3.kind == Probe::Kind::Exact) return RegionTag::C3;
    if (p3.kind == Probe::Kind::Ord && p3.value > s_ + t_) return RegionTag::C3;
    if (p3.kind == Probe::Kind::Bound && p3.value > s_ + t_) return RegionTag::C3;
    if (p2.kind == Probe::Kind::Ord && p2.value == s_ + t_ &&
        p3.kind == Probe::Kind::Ord && p3.value == s_ + t_)
        return RegionTag::A23Inf;
    throw precision_exhausted_error(
        "too few digits to separate the point from the small fixed points");
}

RegionTag PottsBetheMap::classify_three(const PadicNumber& x, long long vinf) const {
    if (vinf <= s_) return RegionTag::A2;
    if (vinf > s_ + 1) return RegionTag::AInf;
    // Sphere dinf = T/3.  With |q| = 1/3 there is no repelling fixed point
    // and the sphere is a single region.
    if (!x1_) return RegionTag::A1Inf1;
    return split_sphere(x - *x1_, s_ + 1, RegionTag::A1Inf2, RegionTag::A1Inf1);
}

RegionTag PottsBetheMap::classify_two(const PadicNumber& x, long long vinf) const {
    if (vinf < s_) return RegionTag::A2;
    if (vinf == s_)
        return split_sphere(x - *x1_, s_, RegionTag::A1Inf2, RegionTag::A1Inf1);
    if (vinf < s_ + t_) return RegionTag::AInf1;
    if (vinf == s_ + t_) return RegionTag::AInf2;
    return RegionTag::AInf3;
}

RegionTag PottsBetheMap::classify(const PadicNumber& x) const {
    require_dynamics("classification");
    if (x.prime() != prime_) throw error("point lives over a different prime");

    Probe p0 = probe(x - one_);
    if (p0.kind == Probe::Kind::Exact) return RegionTag::A0;
    if (p0.kind == Probe::Kind::Bound) {
        if (p0.value > t_) return RegionTag::A0;
        throw precision_exhausted_error(
            "too few digits to compare |x - 1| with |q|");
    }
    if (p0.value > t_) return RegionTag::A0;
    if (p0.value < t_) return RegionTag::A1;

    // |x - 1| = |q| exactly; everything now depends on the distance to the pole.
    PadicNumber dinf = x - pole_;
    long long innermost = (prime_ == 3) ? s_ + 1 : s_ + t_;
    Probe pinf = probe(dinf);
    if (pinf.kind == Probe::Kind::Exact) return RegionTag::Singular;
    if (pinf.kind == Probe::Kind::Bound) {
        if (pinf.value > innermost) return RegionTag::Singular;
        throw precision_exhausted_error(
            "too few digits to place the point on a sphere around the pole");
    }
    long long vinf = pinf.value;
    if (vinf == t_) return RegionTag::A0Inf;
    if (vinf < t_) throw error("point claims |x - pole| > |q| while |x - 1| = |q|");

    if (prime_ % 3 == 1) return classify_one_mod_three(x, vinf);
    if (prime_ == 3) return classify_three(x, vinf);
    return classify_two(x, vinf);
}

std::vector<RegionTag> PottsBetheMap::region_tags() const {
    require_dynamics("the region system");
    if (prime_ % 3 == 1)
        return {RegionTag::A0,     RegionTag::A1, RegionTag::A0Inf, RegionTag::A2,
                RegionTag::A1Inf,  RegionTag::C1, RegionTag::A3,    RegionTag::A23Inf,
                RegionTag::C2,     RegionTag::C3, RegionTag::AInf,  RegionTag::Singular};
    if (prime_ == 3)
        return {RegionTag::A0,     RegionTag::A1,     RegionTag::A0Inf,
                RegionTag::A2,     RegionTag::A1Inf1, RegionTag::A1Inf2,
                RegionTag::AInf,   RegionTag::Singular};
    return {RegionTag::A0,     RegionTag::A1,     RegionTag::A0Inf,  RegionTag::A2,
            RegionTag::A1Inf1, RegionTag::A1Inf2, RegionTag::AInf1, RegionTag::AInf2,
            RegionTag::AInf3,  RegionTag::Singular};
}

long long PottsBetheMap::markov_index() const {
    require_dynamics("the partition index");
    if (prime_ % 3 != 1)
        throw out_of_regime_error("the partition index is defined for p = 1 mod 3 only");
    return t_ / (s_ - t_);
}

BasinOutcome basin_decide(const PottsBetheMap& map, const PadicNumber& start,
                          int max_iter) {
    PadicNumber x = start;
    std::optional<RegionTag> last;
    for (int step = 0;; ++step) {
        RegionTag tag;
        try {
            tag = map.classify(x);
        } catch (const precision_exhausted_error&) {
            return {BasinOutcome::Kind::Undecided, step, last};
        }
        last = tag;
        if (tag == RegionTag::A0)
            return {BasinOutcome::Kind::Converges, step, tag};
        if (tag == RegionTag::Singular)
            return {BasinOutcome::Kind::HitsSingular, step, tag};
        if (step == max_iter) break;
        try {
            x = map.eval(x);
        } catch (const singular_input_error&) {
            return {BasinOutcome::Kind::HitsSingular, step + 1, RegionTag::Singular};
        } catch (const precision_exhausted_error&) {
            return {BasinOutcome::Kind::Undecided, step + 1, last};
        }
    }
    const std::vector<RegionTag>& julia = map.julia_family();
    bool in_julia = last && std::find(julia.begin(), julia.end(), *last) != julia.end();
    return {in_julia ? BasinOutcome::Kind::InJuliaPartition : BasinOutcome::Kind::Undecided,
            max_iter, last};
}

long long local_scaling_exponent(const PottsBetheMap& map, const Ball& domain) {
    RegionTag tag = map.classify(domain.center);
    long long s = map.s();
    long long t = map.t();
    long long required_radius;
    long long exponent;
    switch (tag) {
        case RegionTag::C1:
            required_radius = -s - 1;
            exponent = s - t;
            break;
        case RegionTag::C2:
        case RegionTag::C3:
            required_radius = -(s + t) - 1;
            exponent = s + t;
            break;
        case RegionTag::A1Inf2:
            required_radius = (map.prime() == 3) ? -s - 2 : -s - 1;
            exponent = (map.prime() == 3) ? s - t + 1 : s - t;
            break;
        default:
            throw not_scaling_domain_error(std::string("ball centered in region ") +
                                           region_name(tag) +
                                           " where the map is not an exact scaling");
    }
    if (domain.radius_exp > required_radius)
        throw not_scaling_domain_error("ball pokes out of the exact-scaling region");
    return exponent;
}

Ball ball_image(const PottsBetheMap& map, const Ball& domain) {
    long long exponent = local_scaling_exponent(map, domain);
    return Ball{map.eval(domain.center), domain.radius_exp + exponent};
}

namespace {

PadicNumber unit_avoiding(SplitMix64& rng, long long prime, long long digits,
                          long long avoid_a, long long avoid_b) {
    for (;;) {
        PadicNumber u = random_unit(rng, prime, digits);
        long long d = u.digit(0);
        if (d != avoid_a && d != avoid_b) return u;
    }
}

PadicNumber shifted(const PadicNumber& center, SplitMix64& rng, long long prime,
                    long long valuation, long long digits) {
    return center + random_padic(rng, prime, valuation, digits);
}

}  // namespace

PadicNumber sample_region(const PottsBetheMap& map, RegionTag tag, SplitMix64& rng,
                          long long digits) {
    map.fixed_points();  // k = 3 guard
    std::vector<RegionTag> tags = map.region_tags();
    if (std::find(tags.begin(), tags.end(), tag) == tags.end())
        throw out_of_regime_error(std::string("region ") + region_name(tag) +
                                  " is not part of the region system for this prime");
    if (digits <= 0) digits = default_precision();
    long long p = map.prime();
    long long s = map.s();
    long long t = map.t();
    PadicNumber one = PadicNumber::one(p, digits);

    switch (tag) {
        case RegionTag::A0:
            return shifted(one, rng, p, t + 1 + rng.range(0, 4), digits);
        case RegionTag::A1:
            return shifted(one, rng, p, t - 1 - rng.range(0, 3), digits);
        case RegionTag::A0Inf: {
            if (p == 2)
                throw infeasible_error(
                    "A0_inf is empty for p = 2: |x - 1| = |q| forces |x - pole| < |q|");
            long long avoid = (p - map.q().digit(0)) % p;
            PadicNumber u = unit_avoiding(rng, p, digits, avoid, -1);
            return one + PadicNumber::from_unit(p, t, u.unit(), digits);
        }
        case RegionTag::A2: {
            long long hi = (p == 3) ? s : s - 1;
            if (t + 1 > hi)
                throw infeasible_error("A2 is empty: no sphere lies strictly between "
                                       "|q| and the sphere of the repelling point");
            return shifted(map.pole(), rng, p, rng.range(t + 1, hi), digits);
        }
        case RegionTag::A1Inf: {
            PadicNumber z = map.fixed_points()[1].point - map.pole();
            PadicNumber u = unit_avoiding(rng, p, digits, z.digit(0), -1);
            return map.pole() + PadicNumber::from_unit(p, s, u.unit(), digits);
        }
        case RegionTag::C1:
            return shifted(map.fixed_points()[1].point, rng, p, s + 1 + rng.range(0, 4),
                           digits);
        case RegionTag::A3:
            if (t < 2)
                throw infeasible_error(
                    "A3 is empty: no sphere lies strictly between the two scales");
            return shifted(map.pole(), rng, p, rng.range(s + 1, s + t - 1), digits);
        case RegionTag::A23Inf: {
            PadicNumber z2 = map.fixed_points()[2].point - map.pole();
            PadicNumber z3 = map.fixed_points()[3].point - map.pole();
            PadicNumber u = unit_avoiding(rng, p, digits, z2.digit(0), z3.digit(0));
            return map.pole() + PadicNumber::from_unit(p, s + t, u.unit(), digits);
        }
        case RegionTag::C2:
            return shifted(map.fixed_points()[2].point, rng, p,
                           s + t + 1 + rng.range(0, 4), digits);
        case RegionTag::C3:
            return shifted(map.fixed_points()[3].point, rng, p,
                           s + t + 1 + rng.range(0, 4), digits);
        case RegionTag::AInf: {
            long long inner = (p == 3) ? s + 1 : s + t;
            return shifted(map.pole(), rng, p, inner + 1 + rng.range(0, 4), digits);
        }
        case RegionTag::A1Inf1: {
            if (p == 2)
                throw infeasible_error("A1_inf_1 is empty for p = 2: a difference of "
                                       "units is always divisible by 2");
            if (map.fixed_points().size() < 2)
                return shifted(map.pole(), rng, p, s + 1, digits);
            PadicNumber z = map.fixed_points()[1].point - map.pole();
            PadicNumber u = unit_avoiding(rng, p, digits, z.digit(0), -1);
            return map.pole() + PadicNumber::from_unit(p, s + 1, u.unit(), digits);
        }
        case RegionTag::A1Inf2: {
            if (map.fixed_points().size() < 2)
                throw infeasible_error(
                    "A1_inf_2 is empty: the map has no repelling fixed point");
            long long r = (p == 3) ? s + 2 : s + 1;
            return shifted(map.fixed_points()[1].point, rng, p, r + rng.range(0, 4),
                           digits);
        }
        case RegionTag::AInf1:
            if (t < 2)
                throw infeasible_error(
                    "A_inf_1 is empty: no sphere lies strictly between the two scales");
            return shifted(map.pole(), rng, p, rng.range(s + 1, s + t - 1), digits);
        case RegionTag::AInf2:
            return shifted(map.pole(), rng, p, s + t, digits);
        case RegionTag::AInf3:
            return shifted(map.pole(), rng, p, s + t + 1 + rng.range(0, 4), digits);
        case RegionTag::Singular:
            return map.pole();
    }
    throw error("unknown region tag");
}

}  // namespace padic
