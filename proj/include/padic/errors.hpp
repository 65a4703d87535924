#pragma once

#include <stdexcept>
#include <string>

namespace padic {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// A modulus that is not a prime number was supplied.
struct not_prime_error : error {
    explicit not_prime_error(long long n)
        : error("not a prime: " + std::to_string(n)) {}
};

// An add/sub cancelled every known digit, or an operation needed a valuation
// that the tracked precision cannot determine.
struct precision_exhausted_error : error {
    explicit precision_exhausted_error(const std::string& what) : error(what) {}
};

struct division_by_zero_error : error {
    division_by_zero_error() : error("division by exact zero") {}
};

// Input outside the mathematical domain of the function (exp/ln radii, etc.).
struct out_of_domain_error : error {
    explicit out_of_domain_error(const std::string& what) : error(what) {}
};

struct hensel_hypothesis_error : error {
    explicit hensel_hypothesis_error(const std::string& what) : error(what) {}
};

// Root finding hit a residue class where f and f' vanish beyond the depth the
// splitter is willing to resolve.
struct multiplicity_unresolved_error : error {
    explicit multiplicity_unresolved_error(const std::string& what) : error(what) {}
};

// Parameters violate the standing assumptions of the model family.
struct out_of_regime_error : error {
    explicit out_of_regime_error(const std::string& what) : error(what) {}
};

// The rational map was evaluated at (or indistinguishably close to) its pole.
struct singular_input_error : error {
    explicit singular_input_error(const std::string& what) : error(what) {}
};

// Ball does not lie inside a region where the map acts as an exact scaling.
struct not_scaling_domain_error : error {
    explicit not_scaling_domain_error(const std::string& what) : error(what) {}
};

// Orbit left the invariant ball family while an itinerary was being read.
struct escapes_partition_error : error {
    int step;
    explicit escapes_partition_error(int step_)
        : error("orbit escapes the partition at step " + std::to_string(step_)),
          step(step_) {}
};

struct inadmissible_word_error : error {
    explicit inadmissible_word_error(const std::string& what) : error(what) {}
};

// Two symbol sequences agree on every symbol available to compare.
struct equal_to_horizon_error : error {
    equal_to_horizon_error() : error("sequences agree up to the comparison horizon") {}
};

struct bad_block_length_error : error {
    explicit bad_block_length_error(const std::string& what) : error(what) {}
};

struct inadmissible_alpha_error : error {
    explicit inadmissible_alpha_error(const std::string& what) : error(what) {}
};

struct not_a_cycle_error : error {
    int index;
    explicit not_a_cycle_error(int index_, const std::string& what)
        : error(what), index(index_) {}
};

struct degenerate_form_error : error {
    explicit degenerate_form_error(const std::string& what) : error(what) {}
};

struct partition_function_zero_error : error {
    explicit partition_function_zero_error(const std::string& what) : error(what) {}
};

// Requested enumeration is too large to run exhaustively.
struct infeasible_error : error {
    explicit infeasible_error(const std::string& what) : error(what) {}
};

struct parse_error : error {
    explicit parse_error(const std::string& what) : error(what) {}
};

struct config_error : error {
    explicit config_error(const std::string& what) : error(what) {}
};

}  // namespace padic
