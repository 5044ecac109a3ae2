#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qrlab/field.hpp"
#include "qrlab/rational.hpp"

namespace qrlab {

// Dense coefficient vector over F_q: c[j] is the canonical index of the
// coefficient of x^j. Normalized so the highest stored coefficient is
// nonzero; the zero polynomial stores nothing and reports degree -1.
struct Poly {
    std::vector<elem> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    elem coeff(std::size_t j) const { return j < c.size() ? c[j] : 0; }
    bool operator==(const Poly&) const = default;
};

// Builds a normalized Poly, validating that every index is in [0, q).
Poly make_poly(const Field& F, std::span<const elem> coeffs);

elem evaluate(const Field& F, const Poly& f, elem x);
Poly derivative(const Field& F, const Poly& f);

// Remainder and monic gcd via the Euclidean algorithm. poly_divmod returns
// {quotient, remainder}; the divisor must be nonzero.
std::pair<Poly, Poly> poly_divmod(const Field& F, const Poly& a, const Poly& b);
Poly poly_mul(const Field& F, const Poly& a, const Poly& b);
Poly poly_gcd(const Field& F, Poly a, Poly b);

// True when f has no repeated roots in any extension, decided by
// gcd(f, f') being constant. A nonzero constant is squarefree; a vanishing
// derivative on positive degree (a p-th power) is not. Throws on the zero
// polynomial.
bool is_squarefree(const Field& F, const Poly& f);

// Membership in the degree-(4k-1) squarefree family that defines the curve
// ensemble y^2 = f(x).
bool is_hyperelliptic(const Field& F, const Poly& f, unsigned k);

// Counts of valid curves among all q^{4k} coefficient vectors. The closed
// form counts (q-1)(q^{4k-1} - q^{4k-2}) valid vectors; the enumerating
// variant recounts them one by one and is budgeted to q^{4k} <= 10^7.
struct CensusReport {
    std::uint64_t q = 0;
    unsigned k = 0;
    BigInt total_count;
    BigInt valid_count;
    BigInt failing_count;
    Rational failing_fraction;
    Rational scaled_failing_rate; // failing_fraction * q, equals 2 - 1/q
    bool enumerated = false;
};

CensusReport hyperelliptic_census(const Field& F, unsigned k);
CensusReport hyperelliptic_census_enumerate(const Field& F, unsigned k, unsigned jobs = 1);

// The q-scaled failing rate 2 - 1/q without building a field; k only enters
// validation since the rate is degree-independent.
Rational census_failing_rate(std::uint64_t q, unsigned k);

// Visits all q^{max_deg+1} coefficient vectors (a_0, ..., a_max_deg) in
// lexicographic order with a_0 as the most significant digit, passing each
// normalized Poly to fn. Budgeted to 10^7 vectors unless override_budget.
void enumerate_polys(const Field& F, unsigned max_deg,
                     const std::function<void(const Poly&)>& fn,
                     bool override_budget = false);

namespace detail {

// Allocation-free squarefree test for scan kernels. Works on a raw
// coefficient array of degree deg (deg >= 0, c[deg] != 0, deg <= 62).
// Uses a cross-multiplied Euclidean remainder sequence, which preserves
// gcd degrees without inversions.
struct PolyScratch {
    std::array<elem, 64> a, b, d;
};

bool squarefree_scan(const Field& F, const elem* c, int deg, PolyScratch& s);

} // namespace detail

} // namespace qrlab
