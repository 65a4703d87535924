#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "padic/number.hpp"
#include "padic/potts_bethe.hpp"

namespace padic {

// 0/1 transition table of a topological Markov chain.  entry(i, j) == 1 means
// the image of partition ball i covers ball j, so symbol j may follow i.
class IncidenceMatrix {
public:
    explicit IncidenceMatrix(std::size_t size);

    std::size_t size() const { return size_; }
    int entry(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, int value);
    // Range-checked pair query; symbols outside the alphabet are never allowed.
    bool allows(int from, int to) const;

    // Every state reaches every state through a nonempty admissible word.
    bool is_irreducible() const;

private:
    std::size_t size_;
    std::vector<int> entries_;
};

// Invariant family of equal-radius balls on which the map scales exactly.
// For |theta - 1| < |q|^2 the family is the three balls around the repelling
// fixed points and every transition is allowed; otherwise it is the ladder
// D_1, H_m, ..., H_1, C_2, C_3 with m = t/(s - t) >= 1, where D_1 surrounds
// the repelling unit-distance fixed point and H_l needs exactly l steps to
// reach the outer pair.  tau[j] is the scaling exponent of ball j, and
// kappa[i][j] = ord(center_i - center_j) separates distinct balls (the
// diagonal holds ORD_INFINITY and is never consulted).
struct MarkovPartition {
    long long prime = 0;
    std::vector<Ball> balls;
    std::vector<long long> tau;
    std::vector<std::vector<long long>> kappa;

    std::size_t size() const { return balls.size(); }
    // Index of the ball containing x, if any.  The balls are disjoint, so at
    // most one matches.
    std::optional<std::size_t> locate(const PadicNumber& x) const;
};

// Symbol track of an orbit.  With a declared period the last `period` symbols
// repeat forever; without one the sequence ends after symbols.size() entries.
struct Itinerary {
    std::vector<int> symbols;
    std::optional<std::size_t> period;

    // Symbol at position k of the extended sequence; nullopt past the end of
    // a finite itinerary.
    std::optional<int> at(std::size_t k) const;
};

// True when every adjacent pair, including the wrap from the end of a
// periodic itinerary back into its repeating tail, is allowed by a.
bool is_admissible(const Itinerary& it, const IncidenceMatrix& a);

// Extracts the invariant ball family of the map (p = 1 mod 3 only).  Each
// ladder level H_l is located by decomposing the sphere it must sit on and
// keeping the unique candidate whose l-th ball image covers both outer balls.
MarkovPartition build_markov_partition(const PottsBetheMap& map);

// Incidence matrix read off the dynamics: entry (i, j) tests whether the ball
// image of cell i contains cell j.  The result must be irreducible.
IncidenceMatrix incidence_from_dynamics(const MarkovPartition& part,
                                        const PottsBetheMap& map);

// The transition template of the ladder with m intermediate levels, in the
// state order D_1, H_m, ..., H_1, C_2, C_3: D_1 feeds itself and the deepest
// level, each H_l feeds H_{l-1}, H_1 feeds the two outer cells, and the outer
// cells feed everything.  Supplying the norm exponents t of |q| = p^-t and
// s of |theta - 1| = p^-s checks them against m.
IncidenceMatrix a_m_template(long long m, long long t = 0, long long s = 0);

// trace(a^n) by exact integer matrix power: the number of length-n closed
// symbol cycles, which equals the number of period-n points of the subshift.
bigint count_periodic_points(const IncidenceMatrix& a, long long n);

// Symbols of x, f(x), ..., f^{n-1}(x) against the partition; throws
// escapes_partition_error with the offending step when an iterate leaves the
// ball family.
Itinerary encode_itinerary(const PottsBetheMap& map, const MarkovPartition& part,
                           const PadicNumber& x, std::size_t n);

// The unique x with f^n(x) = x whose itinerary repeats the given word.  The
// word must be cyclically admissible (wrap pair included).  Computed by
// iterating the chain of contracting inverse branches through the prescribed
// balls until successive passes agree, then verified by evaluating f^n.
PadicNumber periodic_point_from_word(const PottsBetheMap& map,
                                     const MarkovPartition& part,
                                     const std::vector<int>& word);

// Itinerary metric exponent: returns E >= 0 such that the distance between
// the coded points is p^-E, namely E = tau[u_0] + ... + tau[u_{k-1}] +
// kappa(u_k, v_k) at the first disagreement k.  Throws equal_to_horizon_error
// when no disagreement is reachable (finite symbols exhausted, or two
// periodic extensions that provably coincide).
long long df_distance(const MarkovPartition& part, const Itinerary& u,
                      const Itinerary& v);

// Window code from the full 3-shift onto the ladder alphabet.  A window of
// length m+1 maps to the cell its point occupies: all zeros -> 0 (the cell
// D_1), l >= 1 leading zeros -> the cell H_l (stored at index m - l + 1),
// and a leading 1 or 2 -> the matching outer cell m+1 or m+2.
int pi_block_map(long long m, const std::vector<int>& block);

// Applies pi_block_map to every length-(m+1) window of the word; the output
// is m symbols shorter.
std::vector<int> pi_induced_word(long long m, const std::vector<int>& word);

// Window code of a length-L cycle with wrap-around windows; the output keeps
// length L.  On cyclic words this code is a bijection onto the closed
// admissible symbol cycles of the ladder template.
std::vector<int> pi_induced_cycle(long long m, const std::vector<int>& word);

}  // namespace padic
