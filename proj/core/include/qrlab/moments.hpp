#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "qrlab/field.hpp"
#include "qrlab/rational.hpp"
#include "qrlab/scan.hpp"

namespace qrlab {

// Number of ways to split j labeled draws into m groups of even size >= 2,
// i.e. the multinomial weight sum over compositions of j into m even parts.
// Satisfies M(j, m) = sum over even h >= 2 of C(j, h) * M(j - h, m - 1).
BigInt composition_weight(unsigned j, unsigned m);

// j-th moment of the standard Gaussian for even j: j! / (2^{j/2} (j/2)!).
BigInt gaussian_moment(unsigned j);

// Exact j-th moment of T / sqrt(n), T = sum over an n-point set of
// chi(f(s)), with f uniform over all q^{4k} coefficient vectors:
// odd j vanish, even j equal
//   n^{-j/2} * sum_{m=1}^{j/2} (1 - 1/q)^m C(n, m) M(j, m).
// Requires 1 <= j <= 4k (higher moments see the coefficient map's
// dependence) and n <= q.
Rational exact_moment(unsigned j, std::uint64_t n, std::uint64_t q, unsigned k);

// Moments 1..4k bundled with their parameters. The fields are plain so tests
// and callers can also build synthetic tables (e.g. the n -> infinity limit).
struct MomentTable {
    std::uint64_t n = 0;
    std::uint64_t q = 0;
    unsigned k = 0;
    std::vector<Rational> values; // values[j-1] = E[(T/sqrt n)^j], j = 1..4k

    static MomentTable compute(std::uint64_t n, std::uint64_t q, unsigned k);

    const Rational& at(unsigned j) const;
    const Rational& e2k() const { return at(2 * k); }
    const Rational& e4k() const { return at(4 * k); }

    // The moment formulas hold for any n, but only n > 4k puts all of
    // 1..4k in the regime where they track the Gaussian limit.
    bool asymptotic_regime() const { return n > 4ull * k; }
};

// Limits of the even-moment Gaussian comparison as k grows:
// the 2k-th root of the Gaussian moment (2k-1)!! tends to sqrt(2k/e) times
// a subpolynomial factor, and the ratio G_{2k}^2 / G_{4k} tends to
// (sqrt(2 pi)/e)^3 * 2^{1/2 - 2k}.
struct AsymptoticConstants {
    long double root_bound;  // sqrt(2k / e)
    long double ratio_bound; // (sqrt(2 pi)/e)^3 * 2^{1/2 - 2k}
};
AsymptoticConstants asymptotic_constants(unsigned k);

// Exhaustive-enumeration moments over all q^{4k} vectors for j = 1..j_max,
// computed from the scan histogram. The independent check for exact_moment.
std::map<unsigned, Rational> brute_force_moments(const Field& F, unsigned k,
                                                 std::span<const elem> S, unsigned j_max,
                                                 unsigned jobs = 1);

} // namespace qrlab
