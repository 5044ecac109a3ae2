#include <doctest.h>

#include <cstdint>
#include <map>
#include <vector>

#include "qrlab/exceptional.hpp"

using namespace qrlab;

namespace {

Poly cubic(const Field& F, std::int64_t a, std::int64_t b, std::int64_t c) {
    return make_poly(F, std::vector<elem>{F.from_int(c), F.from_int(b), F.from_int(a), 1});
}

// Direct (z, s) histogram over the family, built one cubic at a time.
std::map<std::pair<unsigned, std::int64_t>, std::int64_t> direct_census(const Field& F) {
    std::map<std::pair<unsigned, std::int64_t>, std::int64_t> hist;
    for_each_cubic(F, [&](elem a, elem b, elem c) {
        unsigned z = 0;
        std::int64_t s = 0;
        for (elem x = 0; x < F.q(); ++x) {
            const elem v = F.add(F.mul(F.add(F.mul(F.add(x, a), x), b), x), c);
            const int ch = F.chi(v);
            s += ch;
            if (ch == 0) ++z;
        }
        ++hist[{z, s}];
    });
    return hist;
}

} // namespace

TEST_CASE("family size") {
    CHECK(cubic_family_size(3) == 18);
    CHECK(cubic_family_size(5) == 100);
    CHECK(cubic_family_size(13) == 2028);
    CHECK_THROWS_AS(cubic_family_size(2), ValidationError);
}

TEST_CASE("x^3 - x over F_5 has profile (2, 0, 3)") {
    const Field F = Field::make(5);
    const CubicProfile p = cubic_profile(F, cubic(F, 0, -1, 0));
    CHECK(p.n_qr == 2);
    CHECK(p.n_nr == 0);
    CHECK(p.n_zero == 3);
    CHECK(p.char_sum() == 2);
    CHECK(p.majority_excess() == doctest::Approx(-0.5));
}

TEST_CASE("profile input validation") {
    const Field F = Field::make(5);
    CHECK_THROWS_AS(cubic_profile(F, cubic(F, 0, 0, 0)), ValidationError); // x^3 inseparable
    CHECK_THROWS_AS(cubic_profile(F, make_poly(F, std::vector<elem>{0, 1})), ValidationError);
    CHECK_THROWS_AS(cubic_profile(F, make_poly(F, std::vector<elem>{1, 0, 0, 2})), ValidationError);
    const Field E = Field::make(3, 2);
    CHECK_THROWS_AS(cubic_profile(E, make_poly(E, std::vector<elem>{1, 0, 0, 1})), ValidationError);
}

TEST_CASE("discriminant separability matches the gcd route, all cubics, p in {3,5,13}") {
    for (std::uint64_t p : {3ull, 5ull, 13ull}) {
        const Field F = Field::make(p);
        for (elem a = 0; a < p; ++a) {
            for (elem b = 0; b < p; ++b) {
                for (elem c = 0; c < p; ++c) {
                    const Poly f = make_poly(F, std::vector<elem>{c, b, a, 1});
                    CHECK(is_separable_cubic(F, a, b, c) == is_squarefree(F, f));
                }
            }
        }
    }
}

TEST_CASE("for_each_cubic visits exactly the family") {
    const Field F = Field::make(13);
    std::int64_t seen = 0;
    for_each_cubic(F, [&](elem a, elem b, elem c) {
        ++seen;
        CHECK(is_separable_cubic(F, a, b, c));
    });
    CHECK(seen == 2028);

    const Field F5 = Field::make(5);
    std::int64_t seen5 = 0;
    for_each_cubic(F5, [&](elem, elem, elem) { ++seen5; });
    CHECK(seen5 == 100);
}

TEST_CASE("chi sums of x^3 vanish when cubing permutes the field") {
    for (std::uint64_t p : {5ull, 11ull, 17ull, 23ull}) {
        REQUIRE(p % 3 == 2);
        const Field F = Field::make(p);
        std::int64_t s = 0;
        for (elem x = 0; x < p; ++x) s += F.chi(F.mul(F.mul(x, x), x));
        CHECK(s == 0);
    }
}

TEST_CASE("profile census matches the direct pass at p=13") {
    const Field F = Field::make(13);
    const ProfileCensus pc = profile_census(F);
    CHECK(pc.p == 13);
    CHECK(pc.total == 2028);

    const auto direct = direct_census(F);
    std::int64_t direct_total = 0;
    for (const auto& [key, cnt] : direct) {
        CHECK(pc.count(key.first, key.second) == cnt);
        direct_total += cnt;
    }
    CHECK(direct_total == pc.total);
    // and no phantom buckets
    for (unsigned z = 0; z <= 3; ++z) {
        for (std::int64_t s = -13; s <= 13; ++s) {
            if (pc.count(z, s) != 0) CHECK(direct.count({z, s}) == 1);
        }
    }
}

TEST_CASE("profile census is deterministic across worker counts") {
    const Field F = Field::make(31);
    const ProfileCensus a = profile_census(F, 1);
    const ProfileCensus b = profile_census(F, 4);
    CHECK(a.counts == b.counts);
    CHECK(a.total == b.total);
}

TEST_CASE("census bucket reconstruction and range checks") {
    const Field F = Field::make(13);
    const ProfileCensus pc = profile_census(F);
    const CubicProfile pr = pc.profile_at(3, 2);
    CHECK(pr.n_zero == 3);
    CHECK(pr.n_qr - pr.n_nr == 2);
    CHECK(pr.n_qr + pr.n_nr == 10);
    CHECK_THROWS_AS(pc.count(4, 0), ValidationError);
    CHECK_THROWS_AS(pc.count(0, 14), ValidationError);
    CHECK_THROWS_AS(pc.profile_at(0, 0), ValidationError); // parity: p - z + s must be even
}

TEST_CASE("subset-count combinatorics of one profile") {
    const CubicProfile pr{2, 0, 3}; // x^3 - x over F_5
    CHECK(exact_degree(pr, 4, 1) == 3);
    CHECK(degree_lower_bound(pr, 4, 1) == 0); // C(3,1) * C(2,3)
    // m = n/2 makes the requirement vacuous: every size-n subset counts
    CHECK(exact_degree(pr, 4, 2) == 5); // C(5, 4)
    CHECK(exact_degree(pr, 2, 1) == 10); // C(5, 2)
    CHECK(degree_lower_bound(pr, 2, 1) == 6); // C(3,1) * C(2,1)
    CHECK(exact_degree(pr, 5, 0) == 0);
    CHECK_THROWS_AS(exact_degree(pr, 6, 1), ValidationError);  // n > p
    CHECK_THROWS_AS(exact_degree(pr, 3, 2), ValidationError);  // 2m > n
    CHECK_THROWS_AS(degree_lower_bound(pr, 6, 1), ValidationError);
}

TEST_CASE("lower bound never exceeds the exact subset count") {
    const Field F = Field::make(13);
    const ProfileCensus pc = profile_census(F);
    for (unsigned z = 0; z <= 3; ++z) {
        for (std::int64_t s = -13; s <= 13; ++s) {
            if (pc.count(z, s) == 0) continue;
            const CubicProfile pr = pc.profile_at(z, s);
            for (unsigned n : {3u, 4u, 6u}) {
                for (unsigned m = 0; 2 * m <= n; ++m) {
                    CHECK(degree_lower_bound(pr, n, m) <= exact_degree(pr, n, m));
                }
            }
        }
    }
}

TEST_CASE("family-wide subset counts equal the per-cubic sum at p=13") {
    const Field F = Field::make(13);
    const ProfileCensus pc = profile_census(F);

    BigInt direct = 0;
    for_each_cubic(F, [&](elem a, elem b, elem c) {
        const CubicProfile pr = cubic_profile(F, cubic(F, static_cast<std::int64_t>(a),
                                                        static_cast<std::int64_t>(b),
                                                        static_cast<std::int64_t>(c)));
        direct += exact_degree(pr, 4, 1);
    });
    CHECK(pc.total_exact_degree(4, 1) == direct);
    CHECK(pc.total_degree_lower_bound(4, 1) <= direct);
}

TEST_CASE("mean qualifying fraction approaches the sign-flip value as p grows") {
    // n = 4, m = 1: for a root-free profile the per-set probability is
    // 2 * (C(4,0) + C(4,1)) / 2^4 = 5/8; root-hitting sets drag the mean down,
    // and their share shrinks like 1/p.
    const unsigned n = 4, m = 1;
    const Rational limit(5, 8);
    const Rational floor_bound(binomial(n, m), ipow(2, n)); // 1/4
    Rational prev_err(1);
    for (std::uint64_t p : {13ull, 31ull, 61ull, 101ull}) {
        const Field F = Field::make(p);
        const ProfileCensus pc = profile_census(F);
        const Rational ratio(pc.total_exact_degree(n, m),
                             cubic_family_size(p) * binomial(p, n));
        CHECK(ratio >= floor_bound);
        const Rational err = ratio > limit ? ratio - limit : limit - ratio;
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < Rational(1, 20));
}

TEST_CASE("square-root bound audit over the whole family") {
    for (std::uint64_t p : {13ull, 101ull}) {
        const Field F = Field::make(p);
        const HasseAudit a = hasse_audit_all(F);
        CHECK(a.audited == static_cast<std::int64_t>(p * p * (p - 1)));
        CHECK(a.max_char_sum_ratio > 0.0);
        CHECK(a.max_char_sum_ratio <= 1.0);
        CHECK(a.max_majority_ratio <= 1.0);
    }
}

TEST_CASE("sampled audit is deterministic and respects its budget") {
    const Field F = Field::make(101);
    const RngSpec rng{77};
    const HasseAudit a = hasse_audit_sample(F, 500, rng, 1);
    const HasseAudit b = hasse_audit_sample(F, 500, rng, 3);
    CHECK(a.audited == 500);
    CHECK(a.max_char_sum_ratio == b.max_char_sum_ratio);
    CHECK(a.max_majority_ratio == b.max_majority_ratio);
    CHECK(a.max_char_sum_ratio <= 1.0);

    const Field big = Field::make(10007);
    CHECK_THROWS_AS(hasse_audit_sample(big, 100'000, rng), BudgetError);
    CHECK_THROWS_AS(hasse_audit_sample(F, 0, rng), ValidationError);
}

TEST_CASE("subset degree agrees with direct enumeration at p=5") {
    const Field F = Field::make(5);
    const std::vector<elem> S{0, 1, 2, 3, 4};
    for (unsigned m : {0u, 1u, 2u}) {
        const std::int64_t threshold = 5 - 2 * static_cast<std::int64_t>(m);
        std::int64_t direct = 0;
        for_each_cubic(F, [&](elem a, elem b, elem c) {
            std::int64_t T = 0;
            for (elem s : S) {
                const elem v = F.add(F.mul(F.add(F.mul(F.add(s, a), s), b), s), c);
                T += F.chi(v);
            }
            if (T >= threshold || -T >= threshold) ++direct;
        });
        CHECK(subset_degree(F, S, m) == direct);
    }
}

TEST_CASE("subset degree edge cases") {
    const Field F = Field::make(5);
    CHECK(subset_degree(F, std::vector<elem>{}, 0) == 100); // empty set: everything qualifies
    CHECK_THROWS_AS(subset_degree(F, std::vector<elem>{0, 1}, 2), ValidationError);
    const Field big = Field::make(1009);
    CHECK_THROWS_AS(subset_degree(big, std::vector<elem>{0, 1}, 0), BudgetError);
}

TEST_CASE("all-residue probability at a single point") {
    const Field F = Field::make(5);
    // f(0) = c must be nonzero: of the 16 separable cubics with c = 0,
    // none qualifies, so 84 of 100 do.
    CHECK(all_residue_event_probability(F, std::vector<elem>{0}) == Rational(21, 25));
    CHECK(all_residue_event_probability(F, std::vector<elem>{}) == 1);
}

TEST_CASE("beta heuristic floor") {
    CHECK(beta_lower_bound(6, 1, Rational(3, 64)) == Rational(3, 61));
    CHECK_THROWS_AS(beta_lower_bound(6, 1, Rational(3, 32)), ValidationError); // alpha = mass
    CHECK_THROWS_AS(beta_lower_bound(6, 1, Rational(0)), ValidationError);
    CHECK_THROWS_AS(beta_lower_bound(6, 4, Rational(1, 100)), ValidationError); // 2m > n
}

TEST_CASE("beta estimation runs, is deterministic, and validates") {
    const Field F = Field::make(31);
    const RngSpec rng{2718};
    const BetaEstimate a = beta_estimate(F, 6, 1, Rational(3, 64), 100, rng, 1);
    const BetaEstimate b = beta_estimate(F, 6, 1, Rational(3, 64), 100, rng, 2);
    CHECK(a.samples == 100);
    CHECK(a.qualifying == b.qualifying);
    CHECK(a.qualifying >= 0);
    CHECK(a.qualifying <= 100);
    CHECK(a.beta_hat == Rational(a.qualifying, 100));
    CHECK(a.ci.low == b.ci.low);
    // ceil(3/64 * 28830) = ceil(1351.40625)
    CHECK(a.degree_threshold == 1352);

    CHECK_THROWS_AS(beta_estimate(F, 4, 1, Rational(3, 64), 100, rng), ValidationError); // not graph regime
    CHECK_THROWS_AS(beta_estimate(F, 6, 1, Rational(3, 64), 99, rng), ValidationError);
    CHECK_THROWS_AS(beta_estimate(F, 40, 1, Rational(3, 64), 100, rng), ValidationError); // n > p
    const Field big = Field::make(331);
    CHECK_THROWS_AS(beta_estimate(big, 6, 1, Rational(3, 64), 100, rng), BudgetError);
}
