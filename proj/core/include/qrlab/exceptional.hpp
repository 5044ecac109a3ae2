#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qrlab/field.hpp"
#include "qrlab/poly.hpp"
#include "qrlab/rational.hpp"
#include "qrlab/rng.hpp"
#include "qrlab/stats.hpp"

namespace qrlab {

// Everything here works over the family of monic separable cubics
// f = x^3 + a x^2 + b x + c over a prime field F_p (p odd), the ensemble
// behind the exceptional-set experiments: for a size-n evaluation set S the
// "degree" of S counts family members whose character values on S are nearly
// all equal (|sum chi| >= n - 2m for a slack m), and beta measures how often
// that degree is a constant fraction of the family.

// Residue census of one cubic over the whole field: counts of quadratic
// residues, non-residues, and roots among f(x), x in F_p.
struct CubicProfile {
    std::int64_t n_qr = 0;
    std::int64_t n_nr = 0;
    std::int64_t n_zero = 0;

    std::int64_t char_sum() const { return n_qr - n_nr; }

    // Excess of the majority class over p/2; half-integral, and bounded by
    // sqrt(p) as a consequence of the char_sum and root-count bounds.
    double majority_excess() const {
        const std::int64_t s = char_sum();
        return ((s < 0 ? -s : s) - n_zero) / 2.0;
    }
};

// Number of monic separable cubics: p^3 - p^2.
BigInt cubic_family_size(std::uint64_t p);

// Discriminant test for x^3 + a x^2 + b x + c without gcd machinery:
// 18abc - 4a^3c + a^2b^2 - 4b^3 - 27c^2 != 0. The integer polynomial
// identity specializes correctly in every odd characteristic, including 3.
bool is_separable_cubic(const Field& F, elem a, elem b, elem c);

// Visits every monic separable cubic as (a, b, c), lexicographically.
// Budgeted to p^3 <= 10^9.
void for_each_cubic(const Field& F, const std::function<void(elem a, elem b, elem c)>& fn);

// Full-field residue census of a monic separable cubic. Rejects anything
// else with ValidationError.
CubicProfile cubic_profile(const Field& F, const Poly& f);

// Joint distribution of (root count z, char sum s) over the family,
// computed by a rotate-and-add pass over all (a, b, c). This is the compact
// summary from which family-wide degree statistics are exact: cubics with
// equal (z, s) have equal profiles since n_qr + n_nr = p - z.
struct ProfileCensus {
    std::uint64_t p = 0;
    std::int64_t total = 0;           // separable cubics seen
    std::vector<std::int64_t> counts; // index z * (2p+1) + (s + p), z in 0..3

    std::int64_t count(unsigned z, std::int64_t s) const;
    CubicProfile profile_at(unsigned z, std::int64_t s) const;
    BigInt total_exact_degree(unsigned n, unsigned m) const;
    BigInt total_degree_lower_bound(unsigned n, unsigned m) const;
};

ProfileCensus profile_census(const Field& F, unsigned jobs = 1);

// Checks the square-root bounds |sum chi| <= 2 sqrt(p) and
// majority_excess <= sqrt(p) over the family (all cubics, or `trials`
// uniformly sampled ones). A violation is an InternalError: it would mean
// the character machinery, not the input, is broken.
struct HasseAudit {
    std::int64_t audited = 0;
    double max_char_sum_ratio = 0;   // max |s| / (2 sqrt p)
    double max_majority_ratio = 0;   // max majority_excess / sqrt p
};

HasseAudit hasse_audit_all(const Field& F, unsigned jobs = 1);
HasseAudit hasse_audit_sample(const Field& F, std::int64_t trials, const RngSpec& rng,
                              unsigned jobs = 1);

// Number of size-n evaluation sets drawn from one profile's classes that
// witness near-unanimity: sum over a + b + c = n of
// C(n_qr, a) C(n_nr, b) C(n_zero, c) restricted to |a - b| >= n - 2m.
// Pure combinatorics; requires 2m <= n <= p.
BigInt exact_degree(const CubicProfile& profile, unsigned n, unsigned m);

// Closed-form lower bound on exact_degree: the majority class alone already
// contributes C(p - M, m) * C(M, n - m) sets, M = max(n_qr, n_nr).
BigInt degree_lower_bound(const CubicProfile& profile, unsigned n, unsigned m);

// Degree of a concrete evaluation set S: the number of separable cubics f
// with |sum_{s in S} chi(f(s))| >= |S| - 2m. Empty S counts everything.
std::int64_t subset_degree(const Field& F, std::span<const elem> S, unsigned m);

// P(chi(f(s)) != 0 and equal for all s in S) for f uniform over the family;
// exact ratio subset_degree(S, 0) / (p^3 - p^2). Empty S gives 1.
Rational all_residue_event_probability(const Field& F, std::span<const elem> S);

// Monte Carlo estimate of beta = P_S(subset_degree(S, m) >= alpha * #family)
// over uniform size-n subsets S. Runs in the graph regime n - 2m > sqrt(n).
struct BetaEstimate {
    std::int64_t samples = 0;
    std::int64_t qualifying = 0;
    Rational beta_hat;
    WilsonInterval ci; // 99% Wilson
    Rational alpha;
    BigInt degree_threshold; // smallest qualifying degree: ceil(alpha * #family)
};

BetaEstimate beta_estimate(const Field& F, unsigned n, unsigned m, const Rational& alpha,
                           std::int64_t samples, const RngSpec& rng, unsigned jobs = 1);

// The heuristic floor beta >= (C(n,m) 2^{-n} - alpha) / (1 - alpha), exact.
// Requires 0 < alpha < C(n,m) 2^{-n}.
Rational beta_lower_bound(unsigned n, unsigned m, const Rational& alpha);

} // namespace qrlab
