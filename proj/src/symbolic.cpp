#include "padic/symbolic.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "padic/errors.hpp"
#include "padic/polynomial.hpp"

namespace padic {

IncidenceMatrix::IncidenceMatrix(std::size_t size)
    : size_(size), entries_(size * size, 0) {
    if (size == 0) {
        throw out_of_domain_error("an incidence matrix needs at least one state");
    }
}

int IncidenceMatrix::entry(std::size_t i, std::size_t j) const {
    if (i >= size_ || j >= size_) {
        throw out_of_domain_error("incidence matrix index out of range");
    }
    return entries_[i * size_ + j];
}

void IncidenceMatrix::set(std::size_t i, std::size_t j, int value) {
    if (i >= size_ || j >= size_) {
        throw out_of_domain_error("incidence matrix index out of range");
    }
    entries_[i * size_ + j] = value ? 1 : 0;
}

bool IncidenceMatrix::allows(int from, int to) const {
    if (from < 0 || to < 0) return false;
    const auto f = static_cast<std::size_t>(from);
    const auto t = static_cast<std::size_t>(to);
    if (f >= size_ || t >= size_) return false;
    return entries_[f * size_ + t] != 0;
}

bool IncidenceMatrix::is_irreducible() const {
    for (std::size_t start = 0; start < size_; ++start) {
        std::vector<char> seen(size_, 0);
        std::vector<std::size_t> queue;
        // Seed with the successors of `start` so the empty path does not count.
        for (std::size_t j = 0; j < size_; ++j) {
            if (entries_[start * size_ + j] && !seen[j]) {
                seen[j] = 1;
                queue.push_back(j);
            }
        }
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::size_t i = queue[head];
            for (std::size_t j = 0; j < size_; ++j) {
                if (entries_[i * size_ + j] && !seen[j]) {
                    seen[j] = 1;
                    queue.push_back(j);
                }
            }
        }
        if (std::find(seen.begin(), seen.end(), 0) != seen.end()) return false;
    }
    return true;
}

std::optional<std::size_t> MarkovPartition::locate(const PadicNumber& x) const {
    for (std::size_t j = 0; j < balls.size(); ++j) {
        if (balls[j].contains(x)) return j;
    }
    return std::nullopt;
}

std::optional<int> Itinerary::at(std::size_t k) const {
    if (k < symbols.size()) return symbols[k];
    if (!period || *period == 0 || symbols.size() < *period) return std::nullopt;
    const std::size_t tail = symbols.size() - *period;
    return symbols[tail + (k - symbols.size()) % *period];
}

bool is_admissible(const Itinerary& it, const IncidenceMatrix& a) {
    for (std::size_t k = 0; k + 1 < it.symbols.size(); ++k) {
        if (!a.allows(it.symbols[k], it.symbols[k + 1])) return false;
    }
    if (it.period && *it.period > 0 && !it.symbols.empty() &&
        it.symbols.size() >= *it.period) {
        // The extension repeats the tail, so the last symbol must feed its start.
        if (!a.allows(it.symbols.back(), it.symbols[it.symbols.size() - *it.period])) {
            return false;
        }
    }
    return true;
}

namespace {

// Finds the ladder cell that sits l steps above the outer pair: among the
// equal-radius balls tiling the sphere at distance p^-(s + l(s-t)) from the
// repelling point, exactly one has an l-th image covering both outer cells.
Ball locate_ladder_cell(const PottsBetheMap& map, long long l, const Ball& outer2,
                        const Ball& outer3) {
    const long long s = map.s();
    const long long t = map.t();
    const PadicNumber& x1 = map.fixed_points()[1].point;
    const Sphere shell{x1, -(s + l * (s - t))};
    const std::vector<Ball> candidates = sphere_decompose(shell, -(s + t) - 1);
    std::optional<Ball> found;
    std::size_t hits = 0;
    for (const Ball& candidate : candidates) {
        Ball image = candidate;
        for (long long step = 0; step < l; ++step) {
            image = ball_image(map, image);
        }
        if (image.contains(outer2) && image.contains(outer3)) {
            found = candidate;
            ++hits;
        }
    }
    if (hits != 1) {
        throw error("ladder level " + std::to_string(l) + " has " +
                    std::to_string(hits) + " qualifying cells instead of one");
    }
    return *found;
}

}  // namespace

MarkovPartition build_markov_partition(const PottsBetheMap& map) {
    if (map.prime() % 3 != 1) {
        throw out_of_regime_error(
            "the invariant ball family exists only for p = 1 mod 3");
    }
    const auto& fps = map.fixed_points();
    const long long s = map.s();
    const long long t = map.t();
    const long long radius = -(s + t) - 1;
    const Ball inner{fps[1].point, radius};
    const Ball outer2{fps[2].point, radius};
    const Ball outer3{fps[3].point, radius};

    MarkovPartition part;
    part.prime = map.prime();
    const long long m = map.markov_index();
    if (m == 0) {
        part.balls = {inner, outer2, outer3};
    } else {
        part.balls.push_back(inner);  // D_1
        for (long long l = m; l >= 1; --l) {
            part.balls.push_back(locate_ladder_cell(map, l, outer2, outer3));
        }
        part.balls.push_back(outer2);
        part.balls.push_back(outer3);
    }

    const std::size_t n = part.balls.size();
    for (const Ball& b : part.balls) {
        part.tau.push_back(local_scaling_exponent(map, b));
    }
    part.kappa.assign(n, std::vector<long long>(n, ORD_INFINITY));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!part.balls[i].disjoint_from(part.balls[j])) {
                throw error("partition cells " + std::to_string(i) + " and " +
                            std::to_string(j) + " overlap");
            }
            const long long ord =
                (part.balls[i].center - part.balls[j].center).valuation();
            part.kappa[i][j] = ord;
            part.kappa[j][i] = ord;
        }
    }
    return part;
}

IncidenceMatrix incidence_from_dynamics(const MarkovPartition& part,
                                        const PottsBetheMap& map) {
    IncidenceMatrix a(part.size());
    for (std::size_t i = 0; i < part.size(); ++i) {
        const Ball image = ball_image(map, part.balls[i]);
        for (std::size_t j = 0; j < part.size(); ++j) {
            a.set(i, j, image.contains(part.balls[j]) ? 1 : 0);
        }
    }
    if (!a.is_irreducible()) {
        throw error("the extracted incidence matrix is not irreducible");
    }
    return a;
}

IncidenceMatrix a_m_template(long long m, long long t, long long s) {
    if (m < 1) {
        throw out_of_domain_error("the ladder template needs m >= 1");
    }
    if (t != 0 || s != 0) {
        if (t < 1 || s <= t || s > 2 * t || t / (s - t) != m) {
            throw out_of_regime_error(
                "norm exponents do not produce a ladder with " +
                std::to_string(m) + " levels");
        }
    }
    const auto um = static_cast<std::size_t>(m);
    IncidenceMatrix a(um + 3);
    a.set(0, 0, 1);
    a.set(0, 1, 1);  // D_1 feeds itself and the deepest level
    for (std::size_t i = 1; i < um; ++i) {
        a.set(i, i + 1, 1);  // each level drops one step
    }
    a.set(um, um + 1, 1);  // the last level reaches both outer cells
    a.set(um, um + 2, 1);
    for (std::size_t j = 0; j < um + 3; ++j) {
        a.set(um + 1, j, 1);  // the outer cells cover everything
        a.set(um + 2, j, 1);
    }
    return a;
}

namespace {

std::vector<bigint> mat_mul(const std::vector<bigint>& a,
                            const std::vector<bigint>& b, std::size_t n) {
    std::vector<bigint> out(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i * n + k] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                out[i * n + j] += a[i * n + k] * b[k * n + j];
            }
        }
    }
    return out;
}

}  // namespace

bigint count_periodic_points(const IncidenceMatrix& a, long long n) {
    if (n < 1) {
        throw out_of_domain_error("cycle length must be at least 1");
    }
    const std::size_t sz = a.size();
    std::vector<bigint> base(sz * sz, 0);
    std::vector<bigint> power(sz * sz, 0);
    for (std::size_t i = 0; i < sz; ++i) {
        power[i * sz + i] = 1;
        for (std::size_t j = 0; j < sz; ++j) {
            base[i * sz + j] = a.entry(i, j);
        }
    }
    long long e = n;
    while (e > 0) {
        if (e & 1) power = mat_mul(power, base, sz);
        e >>= 1;
        if (e) base = mat_mul(base, base, sz);
    }
    bigint trace = 0;
    for (std::size_t i = 0; i < sz; ++i) {
        trace += power[i * sz + i];
    }
    return trace;
}

Itinerary encode_itinerary(const PottsBetheMap& map, const MarkovPartition& part,
                           const PadicNumber& x, std::size_t n) {
    Itinerary it;
    PadicNumber y = x;
    for (std::size_t k = 0; k < n; ++k) {
        const std::optional<std::size_t> cell = part.locate(y);
        if (!cell) {
            throw escapes_partition_error(static_cast<int>(k));
        }
        it.symbols.push_back(static_cast<int>(*cell));
        if (k + 1 < n) y = map.eval(y);
    }
    return it;
}

namespace {

// The residues r with r^3 = 1 (mod p); three of them when p = 1 mod 3.
std::vector<long long> unity_cube_residues(long long p) {
    std::vector<long long> roots;
    for (long long r = 1; r < p; ++r) {
        if (((r * r) % p) * r % p == 1) roots.push_back(r);
    }
    return roots;
}

// The unique x in `cell` with f(x) = y.  Every partition point is a unit
// congruent to 1 mod p, so the cube roots of y lift from the cube roots of
// unity; undoing the degree-one part picks one preimage per root, and the
// cell membership test isolates the prescribed branch.
PadicNumber pull_back_into(const PottsBetheMap& map, const Ball& cell,
                           const PadicNumber& y,
                           const std::vector<long long>& unity_residues) {
    const long long p = map.prime();
    const long long digits = y.precision();
    const PadicNumber one = PadicNumber::one(p, digits);
    const Polynomial cube(p, {-y, PadicNumber::zero(p), PadicNumber::zero(p), one});
    std::optional<PadicNumber> chosen;
    std::size_t hits = 0;
    for (const long long r : unity_residues) {
        const PadicNumber seed = PadicNumber::from_integer(r, p, digits);
        const PadicNumber root = hensel_lift(cube, seed, 0);
        // root = (theta x + q - 1)/(x - pole), inverted for x
        const PadicNumber x =
            (root * map.pole() + map.q() - one) / (root - map.theta());
        if (cell.contains(x)) {
            chosen = x;
            ++hits;
        }
    }
    if (hits != 1) {
        throw error("inverse branch found " + std::to_string(hits) +
                    " preimages in the target cell instead of one");
    }
    return *chosen;
}

// Re-expresses a value with `digits` unit digits so the self-correcting
// contraction below is not starved by pessimistic precision tracking.  The
// padding is absorbed: it perturbs the iterate by less than the tracked
// window, and the contraction drives any such perturbation to zero.
PadicNumber widen(const PadicNumber& x, long long digits) {
    if (!x.is_normal() || x.precision() >= digits) return x;
    return PadicNumber::from_unit(x.prime(), x.valuation(), x.unit(), digits);
}

}  // namespace

PadicNumber periodic_point_from_word(const PottsBetheMap& map,
                                     const MarkovPartition& part,
                                     const std::vector<int>& word) {
    const std::size_t n = word.size();
    if (n == 0) {
        throw inadmissible_word_error("the word is empty");
    }
    for (const int sym : word) {
        if (sym < 0 || static_cast<std::size_t>(sym) >= part.size()) {
            throw inadmissible_word_error("symbol " + std::to_string(sym) +
                                          " is outside the partition alphabet");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const int from = word[i];
        const int to = word[(i + 1) % n];
        const Ball image = ball_image(map, part.balls[from]);
        if (!image.contains(part.balls[to])) {
            throw inadmissible_word_error("transition " + std::to_string(from) +
                                          " -> " + std::to_string(to) +
                                          " is not allowed by the dynamics");
        }
    }

    const std::vector<long long> unity = unity_cube_residues(map.prime());
    const long long digits = part.balls[word[0]].center.precision();
    // Each pass pulls the iterate backwards through the whole cycle of
    // prescribed cells; one pass contracts by the product of the cell
    // scalings, so successive passes agree on ever more digits.
    PadicNumber z = part.balls[word[0]].center;
    const long long max_passes = digits + 16;
    bool settled = false;
    for (long long pass = 0; pass < max_passes && !settled; ++pass) {
        const PadicNumber zin = widen(z, digits);
        PadicNumber next = zin;
        for (std::size_t i = n; i-- > 0;) {
            next = pull_back_into(map, part.balls[word[i]], next, unity);
        }
        const PadicNumber diff = next - zin;
        settled = !diff.is_normal();
        z = next;
    }
    if (!settled) {
        throw precision_exhausted_error(
            "the inverse branch iteration did not settle within the precision window");
    }

    PadicNumber forward = z;
    for (std::size_t i = 0; i < n; ++i) {
        forward = map.eval(forward);
    }
    const PadicNumber residual = forward - z;
    if (residual.is_normal()) {
        throw error("the inverse branch limit fails to close its cycle: |f^n(x) - x| = p^" +
                    std::to_string(residual.norm_exponent()));
    }
    return z;
}

long long df_distance(const MarkovPartition& part, const Itinerary& u,
                      const Itinerary& v) {
    const std::size_t nstates = part.size();
    const auto finite_length = [](const Itinerary& it) -> std::optional<std::size_t> {
        if (it.period && *it.period > 0 && it.symbols.size() >= *it.period) {
            return std::nullopt;  // extends forever
        }
        return it.symbols.size();
    };
    const std::optional<std::size_t> len_u = finite_length(u);
    const std::optional<std::size_t> len_v = finite_length(v);
    std::size_t horizon;
    if (len_u && len_v) {
        horizon = std::min(*len_u, *len_v);
    } else if (len_u) {
        horizon = *len_u;
    } else if (len_v) {
        horizon = *len_v;
    } else {
        // Two periodic extensions either differ within one common period past
        // both preperiods or agree everywhere.
        horizon = std::max(u.symbols.size(), v.symbols.size()) +
                  std::lcm(*u.period, *v.period);
    }

    long long acc = 0;
    for (std::size_t k = 0; k < horizon; ++k) {
        const std::optional<int> a = u.at(k);
        const std::optional<int> b = v.at(k);
        if (!a || !b) break;
        if (*a < 0 || *b < 0 || static_cast<std::size_t>(*a) >= nstates ||
            static_cast<std::size_t>(*b) >= nstates) {
            throw inadmissible_word_error("itinerary symbol outside the partition alphabet");
        }
        if (*a != *b) {
            return acc + part.kappa[static_cast<std::size_t>(*a)][static_cast<std::size_t>(*b)];
        }
        acc += part.tau[static_cast<std::size_t>(*a)];
    }
    throw equal_to_horizon_error();
}

int pi_block_map(long long m, const std::vector<int>& block) {
    if (m < 1) {
        throw out_of_domain_error("the block code needs m >= 1");
    }
    if (static_cast<long long>(block.size()) != m + 1) {
        throw bad_block_length_error("expected a window of length " +
                                     std::to_string(m + 1) + ", got " +
                                     std::to_string(block.size()));
    }
    for (const int c : block) {
        if (c < 0 || c > 2) {
            throw inadmissible_word_error("window symbols must be 0, 1 or 2");
        }
    }
    std::size_t lead = 0;
    while (lead < block.size() && block[lead] == 0) ++lead;
    if (lead == block.size()) return 0;  // parked at the inner cell
    if (lead == 0) return static_cast<int>(m) + block[0];  // outer cells
    // l leading zeros name the level that reaches the outer pair in l steps;
    // that cell is stored at index m - l + 1.
    return static_cast<int>(m - static_cast<long long>(lead) + 1);
}

std::vector<int> pi_induced_word(long long m, const std::vector<int>& word) {
    if (m < 1) {
        throw out_of_domain_error("the block code needs m >= 1");
    }
    if (static_cast<long long>(word.size()) < m + 1) {
        throw bad_block_length_error("the word is shorter than one window");
    }
    const auto width = static_cast<std::size_t>(m) + 1;
    std::vector<int> out;
    out.reserve(word.size() - width + 1);
    for (std::size_t i = 0; i + width <= word.size(); ++i) {
        out.push_back(pi_block_map(
            m, std::vector<int>(word.begin() + static_cast<std::ptrdiff_t>(i),
                                word.begin() + static_cast<std::ptrdiff_t>(i + width))));
    }
    return out;
}

std::vector<int> pi_induced_cycle(long long m, const std::vector<int>& word) {
    if (m < 1) {
        throw out_of_domain_error("the block code needs m >= 1");
    }
    if (word.empty()) {
        throw bad_block_length_error("the cycle is empty");
    }
    const std::size_t n = word.size();
    const auto width = static_cast<std::size_t>(m) + 1;
    std::vector<int> out;
    out.reserve(n);
    std::vector<int> window(width);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            window[j] = word[(i + j) % n];
        }
        out.push_back(pi_block_map(m, window));
    }
    return out;
}

}  // namespace padic
