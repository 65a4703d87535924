#include "padic/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "padic/errors.hpp"

namespace padic {

namespace {

long long max_coeff_digits(const std::vector<PadicNumber>& coeffs) {
    long long digits = 8;
    for (const auto& c : coeffs) {
        if (c.is_normal()) {
            digits = std::max(digits, c.precision());
        }
    }
    return digits;
}

}  // namespace

Polynomial::Polynomial(long long prime, std::vector<PadicNumber> coefficients)
    : prime_(prime), coeffs_(std::move(coefficients)) {
    if (!is_prime(prime_)) {
        throw not_prime_error(prime_);
    }
    for (const auto& c : coeffs_) {
        if (c.prime() != prime_) {
            throw error("polynomial coefficients mix primes");
        }
    }
    while (!coeffs_.empty() && coeffs_.back().is_exact_zero()) {
        coeffs_.pop_back();
    }
    if (coeffs_.empty()) {
        throw singular_input_error("the zero polynomial has no valuation data");
    }
    if (coeffs_.back().is_zero_at_precision()) {
        throw precision_exhausted_error(
            "leading coefficient is unresolved at its precision window");
    }
}

Polynomial Polynomial::from_integers(long long prime,
                                     const std::vector<long long>& coefficients,
                                     long long digits) {
    std::vector<PadicNumber> coeffs;
    coeffs.reserve(coefficients.size());
    for (long long c : coefficients) {
        coeffs.push_back(PadicNumber::from_integer(c, prime, digits));
    }
    return Polynomial(prime, std::move(coeffs));
}

PadicNumber Polynomial::eval(const PadicNumber& x) const {
    PadicNumber acc = coeffs_.back();
    for (int i = degree() - 1; i >= 0; --i) {
        acc = acc * x + coeffs_[static_cast<std::size_t>(i)];
    }
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (degree() == 0) {
        // Degree-zero input differentiates to zero; keep an explicit zero
        // value so the caller sees a well-formed constant rather than an
        // empty coefficient list.
        throw singular_input_error("derivative of a constant is zero");
    }
    std::vector<PadicNumber> out;
    out.reserve(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
        PadicNumber factor = PadicNumber::from_integer(
            static_cast<long long>(i), prime_, max_coeff_digits(coeffs_));
        out.push_back(coeffs_[i] * factor);
    }
    return Polynomial(prime_, std::move(out));
}

Polynomial Polynomial::composed_affine(const PadicNumber& shift,
                                       const PadicNumber& scale) const {
    // Taylor shift in place, then rescale the variable.
    std::vector<PadicNumber> b = coeffs_;
    int n = degree();
    for (int k = 0; k < n; ++k) {
        for (int j = n - 1; j >= k; --j) {
            b[static_cast<std::size_t>(j)] =
                b[static_cast<std::size_t>(j)] +
                shift * b[static_cast<std::size_t>(j) + 1];
        }
    }
    PadicNumber power = PadicNumber::one(prime_, max_coeff_digits(coeffs_));
    for (int k = 1; k <= n; ++k) {
        power = power * scale;
        b[static_cast<std::size_t>(k)] = b[static_cast<std::size_t>(k)] * power;
    }
    return Polynomial(prime_, std::move(b));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    if (a.prime() != b.prime()) {
        throw error("polynomial operands mix primes");
    }
    std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
    std::vector<PadicNumber> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= a.coeffs().size()) {
            out.push_back(b.coeff(static_cast<int>(i)));
        } else if (i >= b.coeffs().size()) {
            out.push_back(a.coeff(static_cast<int>(i)));
        } else {
            out.push_back(a.coeff(static_cast<int>(i)) +
                          b.coeff(static_cast<int>(i)));
        }
    }
    return Polynomial(a.prime(), std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    if (a.prime() != b.prime()) {
        throw error("polynomial operands mix primes");
    }
    std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
    std::vector<PadicNumber> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= a.coeffs().size()) {
            out.push_back(-b.coeff(static_cast<int>(i)));
        } else if (i >= b.coeffs().size()) {
            out.push_back(a.coeff(static_cast<int>(i)));
        } else {
            out.push_back(a.coeff(static_cast<int>(i)) -
                          b.coeff(static_cast<int>(i)));
        }
    }
    return Polynomial(a.prime(), std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.prime() != b.prime()) {
        throw error("polynomial operands mix primes");
    }
    std::vector<PadicNumber> out(
        a.coeffs().size() + b.coeffs().size() - 1,
        PadicNumber::zero(a.prime()));
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        for (std::size_t j = 0; j < b.coeffs().size(); ++j) {
            out[i + j] = out[i + j] + a.coeff(static_cast<int>(i)) *
                                          b.coeff(static_cast<int>(j));
        }
    }
    return Polynomial(a.prime(), std::move(out));
}

bool NewtonPolygon::all_slopes_integer() const {
    return std::all_of(segments.begin(), segments.end(),
                       [](const PolygonSegment& s) { return s.integer_slope(); });
}

namespace {

long long cross(const std::pair<long long, long long>& o,
                const std::pair<long long, long long>& a,
                const std::pair<long long, long long>& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
}

// True when the point (index, ordinate) is on or above the lower hull.
bool on_or_above_hull(const std::vector<std::pair<long long, long long>>& hull,
                      long long index, long long ordinate) {
    if (index < hull.front().first || index > hull.back().first) {
        return false;
    }
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        auto [x1, y1] = hull[k];
        auto [x2, y2] = hull[k + 1];
        if (index < x1 || index > x2) {
            continue;
        }
        return ordinate * (x2 - x1) >= y1 * (x2 - x1) + (y2 - y1) * (index - x1);
    }
    // Single-vertex hull: only that exact index is covered.
    return index == hull.front().first && ordinate >= hull.front().second;
}

}  // namespace

NewtonPolygon newton_polygon(const Polynomial& f) {
    std::vector<std::pair<long long, long long>> points;
    std::vector<std::pair<long long, long long>> unresolved;  // (index, bound)
    for (int i = 0; i <= f.degree(); ++i) {
        const PadicNumber& c = f.coeff(i);
        if (c.is_exact_zero()) {
            continue;
        }
        if (c.is_zero_at_precision()) {
            unresolved.emplace_back(i, c.abs_precision());
            continue;
        }
        points.emplace_back(i, c.valuation());
    }

    std::vector<std::pair<long long, long long>> hull;
    for (const auto& pt : points) {
        while (hull.size() >= 2 &&
               cross(hull[hull.size() - 2], hull[hull.size() - 1], pt) <= 0) {
            hull.pop_back();
        }
        hull.push_back(pt);
    }

    // A coefficient whose valuation is only bounded below is harmless exactly
    // when every ordinate it could take stays on or above the hull of the
    // resolved points; otherwise the hull itself is undetermined.
    for (const auto& [index, bound] : unresolved) {
        if (!on_or_above_hull(hull, index, bound)) {
            throw precision_exhausted_error(
                "coefficient " + std::to_string(index) +
                " is unresolved at a level that could reshape the polygon");
        }
    }

    NewtonPolygon result;
    result.vertices = hull;
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        long long run = hull[k + 1].first - hull[k].first;
        long long rise = hull[k + 1].second - hull[k].second;
        long long g = std::gcd(run, rise < 0 ? -rise : rise);
        if (g == 0) {
            g = 1;
        }
        result.segments.push_back(PolygonSegment{rise / g, run / g, run});
    }
    return result;
}

PadicNumber hensel_lift(const Polynomial& f, const PadicNumber& seed,
                        long long i) {
    if (seed.prime() != f.prime()) {
        throw error("seed prime differs from polynomial prime");
    }
    Polynomial fp = f.derivative();

    PadicNumber f_seed = f.eval(seed);
    if (f_seed.is_normal()) {
        if (f_seed.valuation() < 2 * i + 1) {
            throw hensel_hypothesis_error(
                "f(seed) is not divisible by p^" + std::to_string(2 * i + 1));
        }
    } else if (f_seed.is_zero_at_precision() &&
               f_seed.abs_precision() < 2 * i + 1) {
        throw precision_exhausted_error(
            "cannot certify f(seed) mod p^" + std::to_string(2 * i + 1));
    }

    PadicNumber fp_seed = fp.eval(seed);
    if (fp_seed.is_exact_zero()) {
        throw hensel_hypothesis_error(
            "f'(seed) is divisible by p^" + std::to_string(i + 1));
    }
    if (fp_seed.is_zero_at_precision()) {
        if (fp_seed.abs_precision() >= i + 1) {
            throw hensel_hypothesis_error(
                "f'(seed) is divisible by p^" + std::to_string(i + 1));
        }
        throw precision_exhausted_error(
            "cannot certify the valuation of f'(seed)");
    }
    if (fp_seed.valuation() < i) {
        throw hensel_hypothesis_error(
            "f'(seed) is not divisible by p^" + std::to_string(i));
    }
    if (fp_seed.valuation() > i) {
        throw hensel_hypothesis_error(
            "f'(seed) is divisible by p^" + std::to_string(i + 1));
    }

    PadicNumber x = seed;
    PadicNumber fx = f_seed;
    long long last_ord = fx.is_normal() ? fx.valuation() : ORD_INFINITY;
    for (int iter = 0; iter < 100 && fx.is_normal(); ++iter) {
        x = x - fx / fp.eval(x);
        fx = f.eval(x);
        if (fx.is_normal()) {
            if (fx.valuation() <= last_ord) {
                break;  // stalled below the window; the check below decides
            }
            last_ord = fx.valuation();
        }
    }

    if (fx.is_normal()) {
        throw hensel_hypothesis_error(
            "newton iteration failed to drive the residual below the window");
    }
    if (!agree_mod(x, seed, i + 1)) {
        throw hensel_hypothesis_error(
            "lifted root left the seed residue class mod p^" +
            std::to_string(i + 1));
    }
    return x;
}

std::vector<long long> quadratic_congruence_roots(long long a, long long b,
                                                  long long c, long long p) {
    if (!is_prime(p)) {
        throw not_prime_error(p);
    }
    auto reduce = [p](long long v) {
        long long r = v % p;
        return r < 0 ? r + p : r;
    };
    std::vector<long long> roots;
    for (long long t = 0; t < p; ++t) {
        __int128 value = (__int128)reduce(a) * t * t + (__int128)reduce(b) * t +
                         reduce(c);
        if (value % p == 0) {
            roots.push_back(t);
        }
    }
    return roots;
}

bool has_sqrt_mod(long long a, long long p) {
    if (!is_prime(p)) {
        throw not_prime_error(p);
    }
    long long r = a % p;
    if (r < 0) {
        r += p;
    }
    for (long long t = 0; t < p; ++t) {
        if ((t * t) % p == r) {
            return true;
        }
    }
    return false;
}

namespace {

std::vector<PadicNumber> zp_roots_rec(const Polynomial& f, int depth_left,
                                      long long work_digits) {
    long long p = f.prime();
    if (depth_left < 0) {
        throw multiplicity_unresolved_error(
            "residue cluster did not separate within the rescaling budget");
    }

    Polynomial g = f;
    std::vector<PadicNumber> roots;

    // An exactly-zero constant term means 0 is a root; strip a single factor
    // of the variable. Two stripped factors would be a repeated root.
    if (g.coeff(0).is_exact_zero()) {
        if (g.degree() >= 1 && g.coeff(1).is_exact_zero()) {
            throw multiplicity_unresolved_error("0 is a repeated root");
        }
        roots.push_back(PadicNumber::zero(p));
        if (g.degree() == 0) {
            return roots;
        }
        std::vector<PadicNumber> rest(g.coeffs().begin() + 1,
                                      g.coeffs().end());
        g = Polynomial(p, std::move(rest));
    }
    if (g.degree() == 0) {
        return roots;
    }
    Polynomial gp = g.derivative();

    for (long long u = 0; u < p; ++u) {
        PadicNumber seed = PadicNumber::from_integer(u, p, work_digits);
        PadicNumber gu = g.eval(seed);
        if (gu.is_zero_at_precision() && gu.abs_precision() < 1) {
            throw precision_exhausted_error(
                "cannot decide residue roots at the available precision");
        }
        if (!gu.bounded_by(1)) {
            continue;
        }
        PadicNumber gpu = gp.eval(seed);
        bool simple = gpu.is_normal() && gpu.valuation() == 0;
        if (simple) {
            roots.push_back(hensel_lift(g, seed, 0));
            continue;
        }
        // Repeated residue: zoom in on u + p t and renormalize.
        Polynomial h = g.composed_affine(
            seed, PadicNumber::from_integer(p, p, work_digits));
        long long scale = ORD_INFINITY;
        for (int k = 0; k <= h.degree(); ++k) {
            const PadicNumber& c = h.coeff(k);
            if (c.is_normal()) {
                scale = std::min(scale, c.valuation());
            }
        }
        for (int k = 0; k <= h.degree(); ++k) {
            const PadicNumber& c = h.coeff(k);
            if (c.is_zero_at_precision() && c.abs_precision() <= scale) {
                throw precision_exhausted_error(
                    "rescaled coefficient is unresolved below the unit level");
            }
        }
        PadicNumber divisor = pow_int(
            PadicNumber::from_integer(p, p, work_digits), scale);
        std::vector<PadicNumber> scaled;
        scaled.reserve(static_cast<std::size_t>(h.degree()) + 1);
        for (int k = 0; k <= h.degree(); ++k) {
            scaled.push_back(h.coeff(k) / divisor);
        }
        Polynomial reduced(p, std::move(scaled));
        std::vector<PadicNumber> sub =
            zp_roots_rec(reduced, depth_left - 1, work_digits);
        for (const auto& r : sub) {
            roots.push_back(seed +
                            PadicNumber::from_integer(p, p, work_digits) * r);
        }
    }
    return roots;
}

}  // namespace

std::vector<PadicNumber> find_zp_roots(const Polynomial& f, int max_depth) {
    return zp_roots_rec(f, max_depth, max_coeff_digits(f.coeffs()) + 8);
}

Polynomial fixed_point_cubic(const PadicNumber& theta, const PadicNumber& q) {
    if (theta.prime() != q.prime()) {
        throw error("theta and q carry different primes");
    }
    long long p = theta.prime();
    long long digits = std::max(theta.is_normal() ? theta.precision() : 8,
                                q.is_normal() ? q.precision() : 8);
    PadicNumber one = PadicNumber::one(p, digits);
    PadicNumber two = PadicNumber::from_integer(2, p, digits);
    PadicNumber m = one - theta - q;  // shared factor of a_0 and a_1
    std::vector<PadicNumber> coeffs = {
        -(m * m),
        -((two * theta + one) * m),
        -(one + theta + theta * theta),
        one,
    };
    return Polynomial(p, std::move(coeffs));
}

namespace {

long long checked_ord(const PadicNumber& x, const char* label) {
    if (x.is_exact_zero()) {
        throw out_of_regime_error(std::string(label) + " must be nonzero");
    }
    if (x.is_zero_at_precision()) {
        throw precision_exhausted_error(std::string(label) +
                                        " has an unresolved valuation");
    }
    return x.valuation();
}

long long unit_digit(const PadicNumber& x) {
    return static_cast<long long>(x.digit(0));
}

}  // namespace

CubicRoots fixed_point_cubic_roots(const PadicNumber& theta,
                                   const PadicNumber& q) {
    long long p = theta.prime();
    PadicNumber one = PadicNumber::one(p, theta.is_normal() ? theta.precision()
                                                            : 8);
    long long s = checked_ord(theta - one, "theta - 1");
    long long t = checked_ord(q, "q");
    if (t < 1) {
        throw out_of_regime_error("|q| must be < 1");
    }
    if (s <= t) {
        throw out_of_regime_error("|theta - 1| must be < |q|");
    }

    Polynomial h = fixed_point_cubic(theta, q);
    CubicRoots result;
    result.polygon = newton_polygon(h);

    long long work = std::max(theta.is_normal() ? theta.precision() : 8,
                              q.is_normal() ? q.precision() : 8) + 8;
    PadicNumber m = one - theta - q;
    long long b = unit_digit(m);  // ord m = t since s > t
    result.congruence_residues =
        quadratic_congruence_roots(3, 3 * b, b * b, p);
    result.congruence_solvable = !result.congruence_residues.empty();

    auto push_root = [&result](PadicNumber value) {
        long long residue = unit_digit(value);
        result.roots.push_back(CubicRoot{std::move(value), residue});
    };

    if (p == 3) {
        result.regime = CubicRegime::PEqualsThree;
        if (t == 1) {
            return result;  // the polygon slope -2/3 certifies emptiness
        }
        // Scan y = 3u over units u mod 3^4 for seeds with h(y) = 0 mod 3^5
        // and ord h'(y) = 2, then lift each; distinct roots separate mod 27.
        Polynomial hp = h.derivative();
        std::vector<PadicNumber> found;
        for (long long u = 1; u < 81; ++u) {
            if (u % 3 == 0) {
                continue;
            }
            PadicNumber seed = PadicNumber::from_integer(3 * u, p, work);
            if (!h.eval(seed).bounded_by(5)) {
                continue;
            }
            PadicNumber d = hp.eval(seed);
            if (!(d.is_normal() && d.valuation() == 2)) {
                continue;
            }
            PadicNumber root = hensel_lift(h, seed, 2);
            bool known = false;
            for (const auto& r : found) {
                if (agree_mod(r, root, 3)) {
                    known = true;
                    break;
                }
            }
            if (!known) {
                found.push_back(std::move(root));
            }
        }
        for (auto& r : found) {
            push_root(std::move(r));
        }
        return result;
    }

    // For every p != 3 the unit root lifts from the residue 3.
    PadicNumber seed_unit =
        PadicNumber::from_integer(p == 2 ? 1 : 3, p, work);
    push_root(hensel_lift(h, seed_unit, 0));

    if (p == 2) {
        result.regime = CubicRegime::PEqualsTwo;
        return result;  // the residue congruence mod 2 is unsolvable
    }
    if (p % 3 == 2) {
        result.regime = CubicRegime::TwoModThree;
        return result;  // unsolvable congruence kills the rescaled roots
    }

    result.regime = CubicRegime::OneModThree;
    // Rescale y = p^t w: g(w) = p^t w^3 - (1+theta+theta^2) w^2
    //                          - (2 theta + 1) B w - B^2 with B = m / p^t.
    PadicNumber big_b = m / pow_int(PadicNumber::from_integer(p, p, work), t);
    PadicNumber two = PadicNumber::from_integer(2, p, work);
    std::vector<PadicNumber> gc = {
        -(big_b * big_b),
        -((two * theta + one) * big_b),
        -(one + theta + theta * theta),
        pow_int(PadicNumber::from_integer(p, p, work), t),
    };
    Polynomial g(p, std::move(gc));
    PadicNumber scale = pow_int(PadicNumber::from_integer(p, p, work), t);
    for (long long w : result.congruence_residues) {
        PadicNumber lifted =
            hensel_lift(g, PadicNumber::from_integer(w, p, work), 0);
        push_root(scale * lifted);
    }
    return result;
}

}  // namespace padic
