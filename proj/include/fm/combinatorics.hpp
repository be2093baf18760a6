#ifndef FM_COMBINATORICS_HPP
#define FM_COMBINATORICS_HPP

#include <span>
#include <vector>

#include "fm/core.hpp"
#include "fm/normalize.hpp"

namespace fm {

/// S_0..S_t where S_k is the number of ways to pick exactly k of t children
/// and one product from each picked child: the elementary symmetric
/// polynomials of the children's product counts.
using SVector = std::vector<Count>;

struct Combinations {
    Count total;
    SVector s;
};

/// S by Newton's identities over the power sums of `counts`:
///
///     S_k = (1/k) * sum_{i=0}^{k-1} (-1)^i * S_{k-i-1} * sum_j p_j^{i+1}
///
/// and total = sum of S_k for k in [low, min(high, |counts|)]. The division
/// by k is checked to be exact; an inexact step throws InternalError.
Combinations combination_counts(std::span<const Count> counts, unsigned low, unsigned high);

/// Removes one child with count p from S (the inverse of extend_child).
/// The result is one entry shorter. Throws InternalError if p was not one of
/// the counts behind S (negative entry or nonzero residual).
SVector eliminate_child(const SVector& s, const Count& p);

/// S'_i = S_i + p * S_{i-1}: S for the same children plus one with count p.
SVector extend_child(const SVector& s, const Count& p);

/// Products of a group over children with the given counts:
/// mandatory prod p, optional prod (p+1), or prod (p+1) - 1, xor sum p.
Count closed_form_count(GroupKind kind, std::span<const Count> counts);

} // namespace fm

#endif // FM_COMBINATORICS_HPP
