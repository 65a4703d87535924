#pragma once

#include <vector>

#include "padic/number.hpp"

namespace padic {

// Rooted tree in which the root and every other vertex have exactly `order`
// children. Vertices are addressed breadth first: index 0 is the root, the
// shell at distance d from the root holds order^d vertices, and the ball of
// radius d holds volume_size(d) of them.
struct CayleyTree {
    long long order;
    long long depth;

    CayleyTree(long long order_, long long depth_);

    long long level_size(long long level) const;
    long long volume_size(long long level) const;
    long long edge_count(long long level) const;
};

// Spin assignment on the ball of some radius, breadth first, root at index 0.
// Spin values run from 1 to the number of states.
struct Configuration {
    std::vector<int> spins;
};

// Level-periodic external field in the reduced gauge: a vertex at distance d
// from the root carries the vector levels[d % period], whose entry i-1 is the
// field felt by spin i for i < q, while the last spin q always carries field
// zero. Every entry must lie in the convergence disc of the exponential.
struct BoundaryFunction {
    long long period;
    std::vector<std::vector<PadicNumber>> levels;

    long long q_states() const;
};

struct MeasureValue {
    PadicNumber value;
};

// coupling times the number of edges whose endpoints share a spin. The radius
// of sigma's ball is derived from its size; it must not exceed tree.depth.
// The coupling must lie in the convergence disc of the exponential.
PadicNumber hamiltonian(const CayleyTree& tree, const Configuration& sigma,
                        const PadicNumber& coupling);

// Weights exp_p{ H(sigma) + outer-shell field sum } on the ball of radius
// `level`, normalized by the partition function. The normalizer is summed
// exhaustively over every configuration at construction, so build one
// ensemble per (field, coupling, level) and query it repeatedly; throws
// infeasible_error when that enumeration exceeds the work cap and
// partition_function_zero_error when the normalizer vanishes at working
// precision. Configurations are enumerated from all-ones with the spin of
// the last vertex varying fastest.
class GibbsEnsemble {
  public:
    GibbsEnsemble(const CayleyTree& tree, long long level,
                  const BoundaryFunction& field, const PadicNumber& coupling);

    MeasureValue measure(const Configuration& sigma) const;
    const PadicNumber& partition_function() const;
    long long level() const { return level_; }
    long long q_states() const { return q_states_; }

  private:
    PadicNumber weight(const Configuration& sigma) const;

    CayleyTree tree_;
    long long level_;
    BoundaryFunction field_;
    PadicNumber coupling_;
    long long q_states_;
    long long digits_;
    PadicNumber normalizer_;
    PadicNumber inverse_normalizer_;
};

// One-off convenience wrapper: builds the full ensemble (including the
// exhaustive normalizer) for a single query.
MeasureValue finite_volume_measure(const CayleyTree& tree,
                                   const Configuration& sigma,
                                   const BoundaryFunction& field,
                                   const PadicNumber& coupling);

// Residuals of the consistency identity between the shells at `level` and
// `level - 1`: for every configuration on the smaller ball, the measures of
// its one-shell extensions must sum to its own measure. One entry per parent
// configuration, in enumeration order: the certified vanishing order of the
// residual when it is indistinguishable from zero, or its exact valuation
// when it is not (which makes the pair incompatible).
struct CompatibilityReport {
    bool compatible;
    long long level;
    std::vector<long long> residual_valuations;
    long long min_residual_valuation;
};

CompatibilityReport check_compatibility(const CayleyTree& tree,
                                        const BoundaryFunction& field,
                                        const PadicNumber& coupling,
                                        long long level);

// The one-edge recursion on reduced fields: component i of the result is
//   ln_p( ((theta-1) e^{h_i} + sum_j e^{h_j} + 1) / (theta + sum_j e^{h_j}) ).
// A field assignment is consistent across shells precisely when the vector at
// each vertex equals the sum of this map over its children; for constant or
// level-periodic fields on an order-k tree that is h^(j) = k F(h^(j+1)).
std::vector<PadicNumber> tree_recursion_F(const std::vector<PadicNumber>& h,
                                          const PadicNumber& theta,
                                          long long q_states);

// Residuals z_i - (((theta-1) z_i + sum_j z_j + 1) / (theta + sum_j z_j))^3
// of the constant-field consistency system on the order-3 tree. A z-vector
// solves the system exactly when every residual vanishes.
std::vector<PadicNumber> z_system_residuals(const std::vector<PadicNumber>& z,
                                            const PadicNumber& theta);

// The five shapes a constant-field solution vector can take, classified by
// its pattern of equal entries: A is all-ones, B is a single repeated value,
// C is ones plus one repeated value, D is two repeated values, E is two
// repeated values plus ones.
enum class TiForm { A, B, C, D, E };

// Solves the constant-field consistency system for vectors of the given
// shape on the order-3 tree. The class sizes (m1, m2, m3) give the number of
// coordinates carrying each value: C/D need m1 + m2 = q_states - 1, E needs
// m1 + m2 + m3 = q_states - 1; A and B take no sizes. Coordinates are laid
// out class by class in the listed order (for C, the m1 ones come first).
// Each returned vector is re-verified against the consistency system before
// it is returned. Requires the standing regime 0 < |theta-1| < |q| < 1, with
// q_states divisible by the prime; a vanishing case-split denominator that
// blocks both branches of D/E raises degenerate_form_error.
std::vector<std::vector<PadicNumber>> ti_solve(TiForm form, long long q_states,
                                               const PadicNumber& theta,
                                               long long m1 = 0, long long m2 = 0,
                                               long long m3 = 0);

// Lifts an m-cycle of the one-parameter consistency map to a level-periodic
// boundary function. The cycle entries are ordered by tree level: entry j is
// the value at levels congruent to j, and must be the image of entry j+1
// (cyclically) under
//   G(z) = ( ((theta + a - 1) z + q - a) / (a z + theta + q - a - 1) )^3,
// a = alpha_size; violations raise not_a_cycle_error with the offending
// index. The returned field puts ln_p(cycle[j]) on the first alpha_size
// coordinates and zero on the rest. alpha_size must avoid the sizes that
// collapse |q/alpha| to norm one (inadmissible_alpha_error).
BoundaryFunction cycle_to_measure(const std::vector<PadicNumber>& cycle,
                                  long long alpha_size, long long q_states,
                                  const PadicNumber& theta);

// Counting floor for level-periodic boundary fields of period m at q states:
//   (2^(q-1) - sum_{i=1}^{q*-1} C(q-1, i p^l)) * 3^m,  q = q* p^l, p !| q*.
bigint hgm_lower_bound(long long m, long long q, long long p);

}  // namespace padic
