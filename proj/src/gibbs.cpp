#include "padic/gibbs.hpp"

#include <algorithm>
#include <string>

#include "padic/errors.hpp"
#include "padic/functions.hpp"
#include "padic/polynomial.hpp"

namespace padic {

namespace {

constexpr long long kWorkCap = 100000000;

long long exp_domain_threshold(long long prime) { return prime == 2 ? 2 : 1; }

void require_exp_domain(const PadicNumber& x, const char* what) {
    if (!x.bounded_by(exp_domain_threshold(x.prime()))) {
        throw out_of_domain_error(std::string(what) +
                                  " lies outside the convergence disc of exp");
    }
}

long long working_digits(const PadicNumber& x) {
    return x.is_normal() ? x.precision() : default_precision();
}

// Odometer over the spins at indices [begin, end), last index fastest,
// starting from all ones. Returns false once every combination was visited.
bool advance_spins(std::vector<int>& spins, std::size_t begin, int q_states) {
    for (std::size_t i = spins.size(); i > begin; --i) {
        int& spin = spins[i - 1];
        if (spin < q_states) {
            ++spin;
            return true;
        }
        spin = 1;
    }
    return false;
}

void require_enumerable(long long q_states, long long vertices) {
    long long total = 1;
    for (long long i = 0; i < vertices; ++i) {
        if (total > kWorkCap / q_states) {
            throw infeasible_error("enumerating " + std::to_string(q_states) +
                                   "^" + std::to_string(vertices) +
                                   " configurations exceeds the work cap");
        }
        total *= q_states;
    }
}

long long derive_level(const CayleyTree& tree, std::size_t spin_count) {
    long long size = 0;
    long long shell = 1;
    for (long long level = 0; level <= tree.depth; ++level) {
        size += shell;
        if (static_cast<long long>(spin_count) == size) return level;
        shell *= tree.order;
    }
    throw out_of_domain_error(
        "configuration does not fill a ball of whole radius on this tree");
}

void validate_field(const BoundaryFunction& field, long long prime) {
    if (field.period < 1 ||
        field.levels.size() != static_cast<std::size_t>(field.period)) {
        throw out_of_domain_error(
            "boundary function must carry one field vector per residue level");
    }
    const std::size_t width = field.levels.front().size();
    if (width == 0) {
        throw out_of_domain_error("boundary function needs at least two spin states");
    }
    for (const auto& level : field.levels) {
        if (level.size() != width) {
            throw out_of_domain_error("boundary function levels differ in width");
        }
        for (const auto& component : level) {
            if (component.prime() != prime) {
                throw out_of_domain_error("boundary function prime mismatch");
            }
            require_exp_domain(component, "boundary field component");
        }
    }
}

bool in_ep_not_one(const PadicNumber& value) {
    PadicNumber gap = value - PadicNumber::one(value.prime(), working_digits(value));
    return gap.is_normal() && gap.valuation() >= exp_domain_threshold(value.prime());
}

// Re-expresses a value with `digits` unit digits; the padding is resolved by
// the Newton refinement below, which corrects anything smaller than the
// tracked window.
PadicNumber widen(const PadicNumber& x, long long digits) {
    if (!x.is_normal() || x.precision() >= digits) return x;
    return PadicNumber::from_unit(x.prime(), x.valuation(), x.unit(), digits);
}

// Drops surplus digits a solver carried beyond the caller's window.
PadicNumber narrow(const PadicNumber& x, long long digits) {
    if (!x.is_normal() || x.precision() <= digits) return x;
    return PadicNumber::from_unit(x.prime(), x.valuation(), x.unit(), digits);
}

// The roots of the consistency cubics merge modulo small powers of p, so the
// generic lift stops several digits short of the coefficient window.  Newton
// steps against the canonical representative recover a root carrying the full
// relative precision of the inputs.
PadicNumber refine_root(const Polynomial& f, const PadicNumber& root,
                        long long prime, long long digits) {
    const long long wide_digits = digits + 16;
    std::vector<PadicNumber> wide_coeffs;
    wide_coeffs.reserve(f.coeffs().size());
    for (const auto& c : f.coeffs()) wide_coeffs.push_back(widen(c, wide_digits));
    const Polynomial wide(prime, std::move(wide_coeffs));
    const Polynomial slope = wide.derivative();
    PadicNumber x = widen(root, wide_digits);
    for (int pass = 0; pass < 64; ++pass) {
        const PadicNumber value = wide.eval(x);
        if (!value.is_normal()) break;
        x = widen(x - value / slope.eval(x), wide_digits);
    }
    return x;
}

std::vector<PadicNumber> roots_in_ep_not_one(const Polynomial& f, long long prime,
                                             long long digits) {
    std::vector<PadicNumber> kept;
    for (const auto& root : find_zp_roots(f)) {
        if (in_ep_not_one(root)) kept.push_back(refine_root(f, root, prime, digits));
    }
    return kept;
}

// (A z + B)^3 + W (U z^2 + V z), coefficients ascending.
Polynomial bracket_cubic(long long a, long long b, const PadicNumber& w,
                         const PadicNumber& u, const PadicNumber& v) {
    const long long prime = w.prime();
    const long long digits = working_digits(w);
    auto integer = [&](const bigint& n) {
        return PadicNumber::from_integer(n, prime, digits);
    };
    const bigint aa(a);
    const bigint bb(b);
    return Polynomial(prime, {integer(bb * bb * bb), integer(3 * aa * bb * bb) + w * v,
                              integer(3 * aa * aa * bb) + w * u, integer(aa * aa * aa)});
}

// m2^3 z^3 + [3 m2^2 (m1+1) - (theta-1)^2 (theta + 3 m2 - 1)] z^2
//   + [3 m2 (m1+1)^2 - (theta-1)^2 (theta + 3 (m1+1) - 1)] z + (m1+1)^3,
// the defining cubic for vectors made of ones and one repeated value.
Polynomial ones_and_value_cubic(long long m1, long long m2, const PadicNumber& theta) {
    const long long prime = theta.prime();
    const long long digits = theta.precision();
    auto integer = [&](const bigint& n) {
        return PadicNumber::from_integer(n, prime, digits);
    };
    const PadicNumber one = PadicNumber::one(prime, digits);
    const PadicNumber w = (theta - one) * (theta - one);
    const bigint a(m2);
    const bigint b(m1 + 1);
    const PadicNumber c3 = integer(a * a * a);
    const PadicNumber c2 = integer(3 * a * a * b) - w * (theta + integer(3 * a - 1));
    const PadicNumber c1 = integer(3 * a * b * b) - w * (theta + integer(3 * b - 1));
    const PadicNumber c0 = integer(b * b * b);
    return Polynomial(prime, {c0, c1, c2, c3});
}

struct RegimeExponents {
    long long s;
    long long t;
};

RegimeExponents require_standing_regime(long long q_states, const PadicNumber& theta) {
    const long long prime = theta.prime();
    if (q_states < 2) throw out_of_domain_error("need at least two spin states");
    if (q_states % prime != 0) {
        throw out_of_regime_error("the state count must be divisible by the prime");
    }
    const long long t = ord_of(bigint(q_states), prime);
    const PadicNumber shift =
        theta - PadicNumber::one(prime, working_digits(theta));
    if (!shift.is_normal()) {
        throw out_of_regime_error("theta is indistinguishable from one");
    }
    const long long s = shift.valuation();
    if (s <= t) {
        throw out_of_regime_error("parameters must satisfy 0 < |theta-1| < |q| < 1");
    }
    if (!ep_membership(theta)) {
        throw out_of_regime_error("theta must lie in the exp/log disc");
    }
    return {s, t};
}

std::vector<PadicNumber> repeated(const PadicNumber& value, long long count) {
    return std::vector<PadicNumber>(static_cast<std::size_t>(count), value);
}

void append(std::vector<PadicNumber>& out, const std::vector<PadicNumber>& tail) {
    out.insert(out.end(), tail.begin(), tail.end());
}

void verify_solution(const std::vector<PadicNumber>& z, const PadicNumber& theta) {
    const long long floor = theta.precision() - 8;
    for (const auto& residual : z_system_residuals(z, theta)) {
        if (residual.is_normal() && residual.valuation() < floor) {
            throw error(
                "solver produced a vector violating the consistency system: "
                "residual norm exponent " +
                std::to_string(residual.valuation()));
        }
    }
    std::vector<PadicNumber> representatives;
    for (const auto& value : z) {
        bool known = false;
        for (const auto& rep : representatives) {
            if (!(value - rep).is_normal()) {
                known = true;
                break;
            }
        }
        if (!known) representatives.push_back(value);
    }
    if (representatives.size() > 3) {
        throw error("solution vector splits into more than three value classes");
    }
}

bigint binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    bigint result = 1;
    for (long long j = 1; j <= k; ++j) {
        result = result * (n - k + j) / j;
    }
    return result;
}

}  // namespace

CayleyTree::CayleyTree(long long order_, long long depth_)
    : order(order_), depth(depth_) {
    if (order < 1) throw out_of_domain_error("tree order must be positive");
    if (depth < 0) throw out_of_domain_error("tree depth must be nonnegative");
}

long long CayleyTree::level_size(long long level) const {
    if (level < 0 || level > depth) throw out_of_domain_error("level outside the tree");
    long long size = 1;
    for (long long i = 0; i < level; ++i) size *= order;
    return size;
}

long long CayleyTree::volume_size(long long level) const {
    if (level < 0 || level > depth) throw out_of_domain_error("level outside the tree");
    long long size = 0;
    long long shell = 1;
    for (long long i = 0; i <= level; ++i) {
        size += shell;
        shell *= order;
    }
    return size;
}

long long CayleyTree::edge_count(long long level) const {
    return volume_size(level) - 1;
}

long long BoundaryFunction::q_states() const {
    return levels.empty() ? 0 : static_cast<long long>(levels.front().size()) + 1;
}

PadicNumber hamiltonian(const CayleyTree& tree, const Configuration& sigma,
                        const PadicNumber& coupling) {
    require_exp_domain(coupling, "coupling");
    const long long level = derive_level(tree, sigma.spins.size());
    long long monochrome = 0;
    long long parent_offset = 0;
    long long child_offset = 1;
    long long shell = 1;
    for (long long depth = 1; depth <= level; ++depth) {
        shell *= tree.order;
        for (long long j = 0; j < shell; ++j) {
            if (sigma.spins[child_offset + j] ==
                sigma.spins[parent_offset + j / tree.order]) {
                ++monochrome;
            }
        }
        parent_offset = child_offset;
        child_offset += shell;
    }
    return coupling * PadicNumber::from_integer(monochrome, coupling.prime(),
                                                working_digits(coupling));
}

GibbsEnsemble::GibbsEnsemble(const CayleyTree& tree, long long level,
                             const BoundaryFunction& field,
                             const PadicNumber& coupling)
    : tree_(tree),
      level_(level),
      field_(field),
      coupling_(coupling),
      q_states_(field.q_states()),
      digits_(working_digits(coupling)),
      normalizer_(PadicNumber::zero(coupling.prime())),
      inverse_normalizer_(PadicNumber::zero(coupling.prime())) {
    if (level < 0 || level > tree.depth) {
        throw out_of_domain_error("level outside the tree");
    }
    validate_field(field_, coupling.prime());
    require_exp_domain(coupling, "coupling");
    require_enumerable(q_states_, tree.volume_size(level));
    for (const auto& shell : field_.levels) {
        for (const auto& component : shell) {
            if (component.is_normal()) {
                digits_ = std::max(digits_, component.abs_precision());
            }
        }
    }

    Configuration sigma{
        std::vector<int>(static_cast<std::size_t>(tree.volume_size(level)), 1)};
    PadicNumber total = PadicNumber::zero(coupling.prime());
    do {
        total = total + weight(sigma);
    } while (advance_spins(sigma.spins, 0, static_cast<int>(q_states_)));
    if (!total.is_normal()) {
        throw partition_function_zero_error(
            "the normalizing sum vanishes at working precision");
    }
    normalizer_ = total;
    inverse_normalizer_ =
        PadicNumber::one(coupling.prime(), working_digits(total)) / total;
}

PadicNumber GibbsEnsemble::weight(const Configuration& sigma) const {
    PadicNumber exponent = hamiltonian(tree_, sigma, coupling_);
    const auto& outer =
        field_.levels[static_cast<std::size_t>(level_ % field_.period)];
    const long long offset = level_ == 0 ? 0 : tree_.volume_size(level_ - 1);
    const long long count = tree_.level_size(level_);
    for (long long j = 0; j < count; ++j) {
        const int spin = sigma.spins[static_cast<std::size_t>(offset + j)];
        if (spin < q_states_) {
            exponent = exponent + outer[static_cast<std::size_t>(spin - 1)];
        }
    }
    // An exponent that cancels to exact zero must still weigh in at the
    // ensemble's working window, or it would drag the normalizer's precision
    // down to the library default.
    if (exponent.is_exact_zero()) {
        return PadicNumber::one(coupling_.prime(), digits_);
    }
    return exp_p(exponent);
}

MeasureValue GibbsEnsemble::measure(const Configuration& sigma) const {
    if (sigma.spins.size() !=
        static_cast<std::size_t>(tree_.volume_size(level_))) {
        throw out_of_domain_error("configuration size does not match the level");
    }
    for (int spin : sigma.spins) {
        if (spin < 1 || spin > q_states_) {
            throw out_of_domain_error("spin value outside the state range");
        }
    }
    return {weight(sigma) * inverse_normalizer_};
}

const PadicNumber& GibbsEnsemble::partition_function() const { return normalizer_; }

MeasureValue finite_volume_measure(const CayleyTree& tree,
                                   const Configuration& sigma,
                                   const BoundaryFunction& field,
                                   const PadicNumber& coupling) {
    const long long level = derive_level(tree, sigma.spins.size());
    GibbsEnsemble ensemble(tree, level, field, coupling);
    return ensemble.measure(sigma);
}

CompatibilityReport check_compatibility(const CayleyTree& tree,
                                        const BoundaryFunction& field,
                                        const PadicNumber& coupling,
                                        long long level) {
    if (level < 1) {
        throw out_of_domain_error("compatibility compares two shells: need level >= 1");
    }
    GibbsEnsemble outer(tree, level, field, coupling);
    GibbsEnsemble inner(tree, level - 1, field, coupling);
    const long long prime = coupling.prime();
    const int q = static_cast<int>(outer.q_states());
    const std::size_t parent_size =
        static_cast<std::size_t>(tree.volume_size(level - 1));
    const std::size_t full_size = static_cast<std::size_t>(tree.volume_size(level));

    CompatibilityReport report;
    report.compatible = true;
    report.level = level;
    report.min_residual_valuation = ORD_INFINITY;

    Configuration parent{std::vector<int>(parent_size, 1)};
    do {
        Configuration extended{parent.spins};
        extended.spins.resize(full_size, 1);
        PadicNumber sum = PadicNumber::zero(prime);
        do {
            sum = sum + outer.measure(extended).value;
        } while (advance_spins(extended.spins, parent_size, q));
        const PadicNumber residual = sum - inner.measure(parent).value;
        long long entry;
        if (residual.is_normal()) {
            report.compatible = false;
            entry = residual.valuation();
        } else if (residual.is_exact_zero()) {
            entry = ORD_INFINITY;
        } else {
            entry = residual.abs_precision();
        }
        report.residual_valuations.push_back(entry);
        report.min_residual_valuation =
            std::min(report.min_residual_valuation, entry);
    } while (advance_spins(parent.spins, 0, q));
    return report;
}

std::vector<PadicNumber> tree_recursion_F(const std::vector<PadicNumber>& h,
                                          const PadicNumber& theta,
                                          long long q_states) {
    if (q_states < 2 || h.size() != static_cast<std::size_t>(q_states - 1)) {
        throw out_of_domain_error(
            "field vector must carry one entry per non-reference spin");
    }
    if (!ep_membership(theta)) {
        throw out_of_domain_error("theta must lie in the exp/log disc");
    }
    const long long prime = theta.prime();
    const long long digits = theta.precision();
    std::vector<PadicNumber> z;
    z.reserve(h.size());
    PadicNumber total = PadicNumber::zero(prime);
    for (const auto& component : h) {
        require_exp_domain(component, "field component");
        z.push_back(exp_p(component));
        total = total + z.back();
    }
    const PadicNumber one = PadicNumber::one(prime, digits);
    const PadicNumber shift = theta - one;
    const PadicNumber denominator = theta + total;
    std::vector<PadicNumber> out;
    out.reserve(z.size());
    for (const auto& value : z) {
        out.push_back(ln_p((shift * value + total + one) / denominator));
    }
    return out;
}

std::vector<PadicNumber> z_system_residuals(const std::vector<PadicNumber>& z,
                                            const PadicNumber& theta) {
    const long long prime = theta.prime();
    // Evaluate on zero-padded representatives one window above the inputs, so
    // truncation noise from the intermediate products stays below the window
    // the residuals report.
    long long wide_digits = working_digits(theta);
    for (const auto& value : z) {
        if (value.is_normal()) {
            wide_digits = std::max(wide_digits, value.precision());
        }
    }
    wide_digits += 16;
    const PadicNumber wide_theta = widen(theta, wide_digits);
    PadicNumber total = PadicNumber::zero(prime);
    std::vector<PadicNumber> wide_z;
    wide_z.reserve(z.size());
    for (const auto& value : z) {
        wide_z.push_back(widen(value, wide_digits));
        total = total + wide_z.back();
    }
    const PadicNumber one = PadicNumber::one(prime, wide_digits);
    const PadicNumber shift = wide_theta - one;
    const PadicNumber denominator = wide_theta + total;
    std::vector<PadicNumber> residuals;
    residuals.reserve(wide_z.size());
    for (const auto& value : wide_z) {
        const PadicNumber ratio = (shift * value + total + one) / denominator;
        residuals.push_back(value - ratio * ratio * ratio);
    }
    return residuals;
}

std::vector<std::vector<PadicNumber>> ti_solve(TiForm form, long long q_states,
                                               const PadicNumber& theta,
                                               long long m1, long long m2,
                                               long long m3) {
    require_standing_regime(q_states, theta);
    const long long prime = theta.prime();
    // The whole solve runs on the zero-padded representative of theta: the
    // cubics below have roots merging modulo small powers of p, and the slack
    // keeps the recovered roots accurate across the full input window.
    const long long digits = theta.precision() + 16;
    const PadicNumber wide_theta = widen(theta, digits);
    auto integer = [&](const bigint& n) {
        return PadicNumber::from_integer(n, prime, digits);
    };
    const PadicNumber one = PadicNumber::one(prime, digits);

    std::vector<std::vector<PadicNumber>> solutions;
    switch (form) {
        case TiForm::A: {
            if (m1 != 0 || m2 != 0 || m3 != 0) {
                throw out_of_domain_error("the all-ones shape takes no class sizes");
            }
            solutions.push_back(repeated(one, q_states - 1));
            break;
        }
        case TiForm::B: {
            if (m1 != 0 || m2 != 0 || m3 != 0) {
                throw out_of_domain_error(
                    "the single-value shape takes no class sizes");
            }
            for (const auto& root :
                 roots_in_ep_not_one(ones_and_value_cubic(0, q_states - 1, wide_theta),
                                     prime, digits)) {
                solutions.push_back(repeated(root, q_states - 1));
            }
            break;
        }
        case TiForm::C: {
            if (m1 < 1 || m2 < 1 || m3 != 0 || m1 + m2 != q_states - 1) {
                throw out_of_domain_error(
                    "ones-plus-value shape needs m1, m2 >= 1 with m1 + m2 = q - 1");
            }
            for (const auto& root :
                 roots_in_ep_not_one(ones_and_value_cubic(m1, m2, wide_theta),
                                     prime, digits)) {
                std::vector<PadicNumber> z = repeated(one, m1);
                append(z, repeated(root, m2));
                solutions.push_back(std::move(z));
            }
            break;
        }
        case TiForm::D: {
            if (m1 < 1 || m2 < 1 || m3 != 0 || m1 + m2 != q_states - 1) {
                throw out_of_domain_error(
                    "two-value shape needs m1, m2 >= 1 with m1 + m2 = q - 1");
            }
            const PadicNumber d1 = wide_theta - one + integer(3 * m1);
            const PadicNumber d2 = wide_theta - one + integer(3 * m2);
            const PadicNumber linear = wide_theta + integer(2);
            // The case split must be decided at the caller's window: the
            // zero-padded representative above resolves an exact cancellation
            // in theta - 1 + 3*m into padding noise, which is not evidence
            // that the denominator is invertible.
            const PadicNumber gate1 = theta + PadicNumber::from_integer(
                3 * m1 - 1, prime, theta.precision());
            const PadicNumber gate2 = theta + PadicNumber::from_integer(
                3 * m2 - 1, prime, theta.precision());
            if (gate1.is_normal()) {
                for (const auto& z2 : roots_in_ep_not_one(
                         bracket_cubic(m1 - m2, m1 - 1, d1 * d1, d2, linear),
                         prime, digits)) {
                    const PadicNumber z1 = -(d2 * z2 + linear) / d1;
                    if (!in_ep_not_one(z1)) continue;
                    std::vector<PadicNumber> z = repeated(z1, m1);
                    append(z, repeated(z2, m2));
                    solutions.push_back(std::move(z));
                }
            } else if (gate2.is_normal()) {
                for (const auto& z1 : roots_in_ep_not_one(
                         bracket_cubic(m2 - m1, m2 - 1, d2 * d2, d1, linear),
                         prime, digits)) {
                    const PadicNumber z2 = -(d1 * z1 + linear) / d2;
                    if (!in_ep_not_one(z2)) continue;
                    std::vector<PadicNumber> z = repeated(z1, m1);
                    append(z, repeated(z2, m2));
                    solutions.push_back(std::move(z));
                }
            } else {
                throw degenerate_form_error(
                    "both case-split denominators vanish at working precision");
            }
            break;
        }
        case TiForm::E: {
            if (m1 < 1 || m2 < 1 || m3 < 1 || m1 + m2 + m3 != q_states - 1) {
                throw out_of_domain_error(
                    "two-values-plus-ones shape needs m1, m2, m3 >= 1 summing to q - 1");
            }
            const PadicNumber d1 = wide_theta - one + integer(3 * m1);
            const PadicNumber d2 = wide_theta - one + integer(3 * m2);
            const PadicNumber linear = integer(3 * m3) + wide_theta + integer(2);
            // Same working-window gate as the two-value form above.
            const PadicNumber gate1 = theta + PadicNumber::from_integer(
                3 * m1 - 1, prime, theta.precision());
            const PadicNumber gate2 = theta + PadicNumber::from_integer(
                3 * m2 - 1, prime, theta.precision());
            if (gate1.is_normal()) {
                for (const auto& z2 : roots_in_ep_not_one(
                         bracket_cubic(m1 - m2, m1 - m3 - 1, d1 * d1, d2, linear),
                         prime, digits)) {
                    const PadicNumber z1 = -(d2 * z2 + linear) / d1;
                    if (!in_ep_not_one(z1)) continue;
                    std::vector<PadicNumber> z = repeated(z1, m1);
                    append(z, repeated(z2, m2));
                    append(z, repeated(one, m3));
                    solutions.push_back(std::move(z));
                }
            } else if (gate2.is_normal()) {
                for (const auto& z1 : roots_in_ep_not_one(
                         bracket_cubic(m2 - m1, m2 - m3 - 1, d2 * d2, d1, linear),
                         prime, digits)) {
                    const PadicNumber z2 = -(d1 * z1 + linear) / d2;
                    if (!in_ep_not_one(z2)) continue;
                    std::vector<PadicNumber> z = repeated(z1, m1);
                    append(z, repeated(z2, m2));
                    append(z, repeated(one, m3));
                    solutions.push_back(std::move(z));
                }
            } else {
                throw degenerate_form_error(
                    "both case-split denominators vanish at working precision");
            }
            break;
        }
    }
    for (auto& z : solutions) {
        for (auto& value : z) value = narrow(value, theta.precision());
        verify_solution(z, theta);
    }
    return solutions;
}

BoundaryFunction cycle_to_measure(const std::vector<PadicNumber>& cycle,
                                  long long alpha_size, long long q_states,
                                  const PadicNumber& theta) {
    require_standing_regime(q_states, theta);
    const long long prime = theta.prime();
    const long long digits = theta.precision();

    bigint qstar(q_states);
    long long l = 0;
    while (qstar % prime == 0) {
        qstar /= prime;
        ++l;
    }
    if (alpha_size < 1 || alpha_size > q_states - 1) {
        throw inadmissible_alpha_error(
            "alpha size must lie between 1 and q - 1, got " +
            std::to_string(alpha_size));
    }
    const bigint prime_power = pow_bigint(prime, l);
    if (bigint(alpha_size) % prime_power == 0) {
        const bigint multiple = bigint(alpha_size) / prime_power;
        if (multiple >= 1 && multiple <= qstar - 1) {
            throw inadmissible_alpha_error(
                "alpha size " + std::to_string(alpha_size) +
                " collapses |q/alpha| to norm one");
        }
    }

    if (cycle.empty()) throw not_a_cycle_error(0, "the cycle is empty");
    for (const auto& value : cycle) {
        if (!ep_membership(value)) {
            throw out_of_domain_error("cycle values must lie in the exp/log disc");
        }
    }

    // The closure check runs at the inputs' own windows: a residual the
    // arithmetic can resolve there is a genuine mismatch, while construction
    // slack below the window stays invisible and is accepted.
    const PadicNumber one = PadicNumber::one(prime, digits);
    const PadicNumber alpha = PadicNumber::from_integer(alpha_size, prime, digits);
    const PadicNumber q_scalar = PadicNumber::from_integer(q_states, prime, digits);
    const std::size_t m = cycle.size();
    for (std::size_t j = 0; j < m; ++j) {
        const PadicNumber& next = cycle[(j + 1) % m];
        const PadicNumber numerator = (theta + alpha - one) * next + (q_scalar - alpha);
        const PadicNumber denominator = alpha * next + theta + q_scalar - alpha - one;
        const PadicNumber ratio = numerator / denominator;
        const PadicNumber residual = cycle[j] - ratio * ratio * ratio;
        if (residual.is_normal()) {
            throw not_a_cycle_error(
                static_cast<int>(j),
                "cycle entry " + std::to_string(j) +
                    " is not the image of its successor: residual norm exponent " +
                    std::to_string(residual.valuation()));
        }
    }

    BoundaryFunction field;
    field.period = static_cast<long long>(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<PadicNumber> level(static_cast<std::size_t>(q_states - 1),
                                       PadicNumber::zero(prime));
        const PadicNumber logged = ln_p(cycle[j]);
        for (long long i = 0; i < alpha_size; ++i) {
            level[static_cast<std::size_t>(i)] = logged;
        }
        field.levels.push_back(std::move(level));
    }
    return field;
}

bigint hgm_lower_bound(long long m, long long q, long long p) {
    if (!is_prime(p)) throw not_prime_error(p);
    if (m < 1) throw out_of_domain_error("the period must be at least one");
    if (q < 2 || q % p != 0) {
        throw out_of_domain_error("the state count must have norm below one at p");
    }
    bigint qstar(q);
    long long l = 0;
    while (qstar % p == 0) {
        qstar /= p;
        ++l;
    }
    bigint count = pow_bigint(2, q - 1);
    const bigint prime_power = pow_bigint(p, l);
    for (bigint i = 1; i <= qstar - 1; ++i) {
        count -= binomial(q - 1, static_cast<long long>(i * prime_power));
    }
    return count * pow_bigint(3, m);
}

}  // namespace padic
