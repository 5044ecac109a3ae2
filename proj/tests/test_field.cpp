#include <doctest.h>

#include <cstdint>
#include <set>
#include <vector>

#include "qrlab/field.hpp"

using namespace qrlab;

namespace {

// Independent square table: chi(a) should be +1 exactly on {b*b : b != 0}.
std::set<elem> nonzero_squares(const Field& F) {
    std::set<elem> sq;
    for (elem b = 1; b < F.q(); ++b) sq.insert(F.mul(b, b));
    return sq;
}

} // namespace

TEST_CASE("prime field arithmetic in F_7") {
    const Field F = Field::make(7);
    CHECK(F.q() == 7);
    CHECK(F.p() == 7);
    CHECK(F.m() == 1);
    CHECK(F.rep() == FieldRep::PrimeModular);

    CHECK(F.add(3, 5) == 1);
    CHECK(F.sub(2, 5) == 4);
    CHECK(F.mul(3, 5) == 1);
    CHECK(F.inv(3) == 5);
    CHECK(F.pow(3, 3) == 6);
    CHECK(F.pow(3, 0) == 1);
    CHECK(F.neg(0) == 0);
    CHECK(F.from_int(-1) == 6);
    CHECK_THROWS_AS(F.inv(0), ValidationError);
}

TEST_CASE("rejected field parameters") {
    CHECK_THROWS_AS(Field::make(2), ValidationError);      // even characteristic
    CHECK_THROWS_AS(Field::make(2, 3), ValidationError);   // even characteristic extension
    CHECK_THROWS_AS(Field::make(4), ValidationError);      // not prime
    CHECK_THROWS_AS(Field::make(9), ValidationError);      // prime power passed as p
    CHECK_THROWS_AS(Field::make(1), ValidationError);
    CHECK_THROWS_AS(Field::make(0), ValidationError);
    CHECK_THROWS_AS(Field::make(7, 0), ValidationError);   // zero extension degree
    CHECK_THROWS_AS(Field::make(3, 13), ValidationError);  // 3^13 > 2^20
    CHECK_THROWS_AS(Field::make(1031, 2), ValidationError);
}

TEST_CASE("is_prime_u64 basics") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(3));
    CHECK(is_prime_u64(10007));
    CHECK(is_prime_u64((1ull << 31) - 1));
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64(0));
    CHECK_FALSE(is_prime_u64(10005));
    CHECK_FALSE(is_prime_u64(3215031751ull)); // strong pseudoprime to bases 2,3,5,7
}

TEST_CASE("F_9 log-table construction") {
    const Field F = Field::make(3, 2);
    CHECK(F.q() == 9);
    CHECK(F.rep() == FieldRep::LogTable);

    // The first packed candidate that works is x^2 + x + 2 (c_0=2, c_1=1):
    // x^2+1 has order-4 x, x^2+2 factors, x^2+x+1 gives order-3 x.
    REQUIRE(F.modulus_coeffs().size() == 2);
    CHECK(F.modulus_coeffs()[0] == 2);
    CHECK(F.modulus_coeffs()[1] == 1);

    // x generates all 8 nonzero elements.
    std::set<elem> orbit;
    elem g = F.generator();
    elem cur = 1;
    for (int s = 0; s < 8; ++s) {
        cur = F.mul(cur, g);
        orbit.insert(cur);
    }
    CHECK(orbit.size() == 8);
    CHECK(cur == 1); // g^8 = 1

    // Construction is deterministic.
    const Field F2 = Field::make(3, 2);
    CHECK(F2.modulus_coeffs() == F.modulus_coeffs());
}

TEST_CASE("field axioms, exhaustively for small fields") {
    for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{
             {3, 1}, {5, 1}, {7, 1}, {3, 2}, {3, 3}, {5, 2}, {7, 2}, {3, 4}}) {
        const Field F = Field::make(p, m);
        const std::uint64_t q = F.q();
        for (elem a = 0; a < q; ++a) {
            CHECK(F.add(a, 0) == a);
            CHECK(F.mul(a, 1) == a);
            CHECK(F.add(a, F.neg(a)) == 0);
            if (a != 0) CHECK(F.mul(a, F.inv(a)) == 1);
            for (elem b = 0; b < q; ++b) {
                CHECK(F.add(a, b) == F.add(b, a));
                CHECK(F.mul(a, b) == F.mul(b, a));
                for (elem c = 0; c < q; ++c) {
                    CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
                    CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
                    CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
                }
            }
        }
    }
}

TEST_CASE("pow matches repeated multiplication") {
    for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{{7, 1}, {3, 2}, {5, 2}}) {
        const Field F = Field::make(p, m);
        for (elem a = 0; a < F.q(); ++a) {
            elem acc = 1;
            for (unsigned e = 0; e <= 9; ++e) {
                CHECK(F.pow(a, e) == acc);
                acc = F.mul(acc, a);
            }
        }
    }
}

TEST_CASE("chi against an independent square table") {
    for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{
             {3, 1}, {7, 1}, {101, 1}, {3, 2}, {3, 4}, {5, 2}, {11, 2}, {3, 6}}) {
        const Field F = Field::make(p, m);
        const std::set<elem> sq = nonzero_squares(F);
        CHECK(F.chi(0) == 0);
        for (elem a = 1; a < F.q(); ++a) {
            const int expected = sq.count(a) ? 1 : -1;
            CHECK(F.chi(a) == expected);
        }
    }
}

TEST_CASE("chi specific values in F_7") {
    const Field F = Field::make(7);
    // squares mod 7 are {1, 2, 4}
    CHECK(F.chi(1) == 1);
    CHECK(F.chi(2) == 1);
    CHECK(F.chi(4) == 1);
    CHECK(F.chi(3) == -1);
    CHECK(F.chi(5) == -1);
    CHECK(F.chi(6) == -1);
}

TEST_CASE("chi(-1) = +1 in F_9 since 9 = 1 mod 4") {
    const Field F = Field::make(3, 2);
    CHECK(F.chi(F.from_int(-1)) == 1);
}

TEST_CASE("chi is multiplicative and balanced") {
    for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{
             {3, 1}, {7, 1}, {11, 1}, {101, 1}, {997, 1}, {3, 2}, {3, 3}, {5, 2}, {7, 2}, {3, 4}, {11, 2}}) {
        const Field F = Field::make(p, m);
        const std::uint64_t q = F.q();

        std::int64_t sum = 0, plus = 0;
        for (elem a = 0; a < q; ++a) {
            sum += F.chi(a);
            if (F.chi(a) == 1) ++plus;
        }
        CHECK(sum == 0);
        CHECK(plus == static_cast<std::int64_t>((q - 1) / 2));

        if (q <= 1000) {
            for (elem a = 1; a < q; ++a)
                for (elem b = 1; b < q; ++b) CHECK(F.chi(F.mul(a, b)) == F.chi(a) * F.chi(b));
        }
    }
}

TEST_CASE("table chi agrees with the Euler criterion for every odd prime < 1e4") {
    for (std::uint64_t p = 3; p < 10'000; p += 2) {
        if (!is_prime_u64(p)) continue;
        const Field F = Field::make(p);
        REQUIRE(F.has_chi_table());
        for (elem a = 0; a < p; ++a) {
            if (F.chi(a) != F.chi_euler(a)) {
                REQUIRE_MESSAGE(false, "chi mismatch at p=", p, " a=", a);
            }
        }
    }
}

TEST_CASE("chi table is present in both representations at kernel scales") {
    CHECK(Field::make(10007).has_chi_table());
    CHECK(Field::make(3, 4).has_chi_table());
    CHECK(Field::make(3, 4).chi_data() != nullptr);
}

TEST_CASE("Euler-route chi works above the table bound") {
    const Field F = Field::make((1ull << 31) - 1); // no table at this size
    CHECK_FALSE(F.has_chi_table());
    CHECK(F.chi(0) == 0);
    CHECK(F.chi(1) == 1);
    CHECK(F.chi(4) == 1);
    // chi(a^2 * b) = chi(b)
    const elem b = 7;
    CHECK(F.chi(F.mul(F.mul(12345, 12345), b)) == F.chi(b));
}

TEST_CASE("extension-field chi is the discrete-log parity") {
    const Field F = Field::make(3, 2);
    // generator g has chi(g) = -1, and signs alternate along the orbit
    const elem g = F.generator();
    elem cur = 1;
    int sign = 1;
    for (int s = 0; s < 8; ++s) {
        CHECK(F.chi(cur) == sign);
        cur = F.mul(cur, g);
        sign = -sign;
    }
}
