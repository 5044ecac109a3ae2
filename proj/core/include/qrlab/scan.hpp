#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrlab/field.hpp"
#include "qrlab/rational.hpp"

namespace qrlab {

// Which coefficient vectors a statistic averages over: every polynomial of
// degree <= 4k-1, or only the squarefree degree-(4k-1) curve family.
enum class Conditioning { AllPolys, Hyperelliptic };

// Distribution of the character sum T = sum_{s in S} chi(f(s)) over an
// exhaustively enumerated ensemble. counts[T + n] is the number of included
// vectors with that sum; `included` is their total (equal to `scanned` when
// nothing is conditioned away). All derived statistics are exact rationals.
struct THist {
    std::int64_t n = 0;
    std::vector<std::int64_t> counts; // size 2n+1, index T+n
    std::int64_t included = 0;
    std::int64_t scanned = 0;

    std::int64_t count_t(std::int64_t t) const { return counts[static_cast<std::size_t>(t + n)]; }

    // Number of included vectors with |T| > t * sqrt(n), decided exactly by
    // comparing T^2 * den(t)^2 against num(t)^2 * n.
    std::int64_t hits_above(const Rational& t) const;
    Rational tail_probability(const Rational& t) const;

    // E[(T / sqrt(n))^j] over the included vectors; exact for even j, and
    // exactly zero for odd j by the T -> -T symmetry of the ensemble.
    Rational moment(unsigned j) const;
};

// Scans all q^{4k} coefficient vectors (a_0, ..., a_{4k-1}), accumulating the
// histogram of T over the evaluation set S. The scan walks coefficients in
// lexicographic order with the leading one varying fastest and maintains the
// n evaluation values incrementally, so each vector costs O(n) additions.
// Budgeted to q^{4k} <= 10^7. S must be distinct; jobs >= 1 workers split the
// index range deterministically.
THist exhaustive_t_histogram(const Field& F, unsigned k, std::span<const elem> S,
                             Conditioning cond, unsigned jobs = 1);

// Validates that S holds distinct element indices in [0, q).
void validate_subset(const Field& F, std::span<const elem> S);

} // namespace qrlab
