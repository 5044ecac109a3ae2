#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "qrlab/moments.hpp"
#include "qrlab/sampler.hpp"

using namespace qrlab;

namespace {

std::vector<elem> full_field(const Field& F) {
    std::vector<elem> S(F.q());
    for (elem a = 0; a < F.q(); ++a) S[a] = a;
    return S;
}

Poly P(const Field& F, std::initializer_list<std::int64_t> coeffs) {
    std::vector<elem> c;
    for (auto v : coeffs) c.push_back(F.from_int(v));
    return make_poly(F, c);
}

} // namespace

TEST_CASE("splitmix64 matches the published reference outputs for seed 0") {
    SplitMix64 g{0};
    CHECK(g.next() == 0xE220A8397B1DCDAFull);
    CHECK(g.next() == 0x6E789E6AA1B965F4ull);
    CHECK(g.next() == 0x06C45D188009454Full);
}

TEST_CASE("mix64 fixes 0 and next_below stays in range") {
    CHECK(mix64(0) == 0);
    SplitMix64 g{12345};
    for (int i = 0; i < 1000; ++i) {
        CHECK(g.next_below(7) < 7);
    }
    SplitMix64 h{12345};
    SplitMix64 h2{12345};
    for (int i = 0; i < 10; ++i) CHECK(h.next() == h2.next());
}

TEST_CASE("rng streams are decoupled from trial scheduling") {
    const RngSpec rng{99};
    SplitMix64 a = rng.stream(3);
    SplitMix64 b = rng.stream(7);
    CHECK(a.next() != b.next());
    // re-derived stream reproduces itself regardless of what ran before
    SplitMix64 a2 = rng.stream(3);
    CHECK(a2.next() == rng.stream(3).next());
}

TEST_CASE("wilson interval behavior") {
    const WilsonInterval mid = wilson99(50, 100);
    CHECK(mid.low > 0.3);
    CHECK(mid.high < 0.7);
    CHECK(mid.low + mid.high == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mid.half_width == doctest::Approx((mid.high - mid.low) / 2).epsilon(1e-12));

    const WilsonInterval zero = wilson99(0, 100);
    CHECK(zero.low == 0.0);
    CHECK(zero.high > 0.0);
    const WilsonInterval one = wilson99(100, 100);
    CHECK(one.high == 1.0);
    CHECK(one.low < 1.0);

    // z = 2.5758: for p_hat = 1/2, n = 100, center = (0.5 + z^2/200)/(1 + z^2/100)
    const double z2 = 2.5758 * 2.5758;
    const double center = (0.5 + z2 / 200.0) / (1.0 + z2 / 100.0);
    CHECK((mid.low + mid.high) / 2 == doctest::Approx(center).epsilon(1e-12));

    CHECK_THROWS_AS(wilson99(1, 0), ValidationError);
    CHECK_THROWS_AS(wilson99(-1, 10), ValidationError);
    CHECK_THROWS_AS(wilson99(11, 10), ValidationError);
}

TEST_CASE("char profile of x^3 - x over F_5") {
    const Field F = Field::make(5);
    const Poly f = P(F, {0, -1, 0, 1});
    const CharProfile p = char_profile(F, f, full_field(F));
    CHECK(p.n_zero == 3); // roots 0, 1, 4
    CHECK(p.n_qr == 2);   // f(2) = 1, f(3) = 4, both squares
    CHECK(p.n_nr == 0);
    CHECK(p.t_sum == 2);
}

TEST_CASE("subset validation rejects duplicates and range errors") {
    const Field F = Field::make(7);
    const Poly f = P(F, {1, 1});
    std::vector<elem> dup{1, 2, 1};
    CHECK_THROWS_AS(char_profile(F, f, dup), ValidationError);
    std::vector<elem> oob{1, 9};
    CHECK_THROWS_AS(char_profile(F, f, oob), ValidationError);
}

TEST_CASE("point counts by both methods agree and equal n + T") {
    for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{{7, 1}, {11, 1}, {3, 2}}) {
        const Field F = Field::make(p, m);
        const std::vector<elem> S = full_field(F);
        const RngSpec rng{7};
        for (std::uint64_t i = 0; i < 20; ++i) {
            SplitMix64 g = rng.stream(i);
            const Poly f = sample_poly(F, 1, g);
            const std::int64_t direct = point_count(F, f, S, PointCountMethod::Direct);
            const std::int64_t viachi = point_count(F, f, S, PointCountMethod::CharacterSum);
            CHECK(direct == viachi);
            const CharProfile prof = char_profile(F, f, S);
            CHECK(viachi == static_cast<std::int64_t>(S.size()) + prof.t_sum);
            CHECK(discrepancy(F, f, S) == (prof.t_sum < 0 ? -prof.t_sum : prof.t_sum));
        }
    }
}

TEST_CASE("sampled polynomials are uniform-shaped and deterministic") {
    const Field F = Field::make(7);
    SplitMix64 g = RngSpec{123}.stream(0);
    const Poly f = sample_poly(F, 2, g);
    CHECK(f.degree() <= 7);
    for (elem c : f.c) CHECK(c < 7);

    SplitMix64 g2 = RngSpec{123}.stream(0);
    CHECK(sample_poly(F, 2, g2) == f);
    CHECK_THROWS_AS(sample_poly(F, 0, g), ValidationError);
}

TEST_CASE("curve sampler lands in the squarefree top-degree family") {
    const Field F = Field::make(11);
    const RngSpec rng{5};
    for (std::uint64_t i = 0; i < 50; ++i) {
        SplitMix64 g = rng.stream(i);
        int attempts = 0;
        const Poly f = sample_curve(F, 1, g, &attempts);
        CHECK(attempts >= 1);
        CHECK(f.degree() == 3);
        CHECK(is_squarefree(F, f));
    }
}

TEST_CASE("exhaustive tail over all quartic vectors at q=3") {
    const Field F = Field::make(3);
    const std::vector<elem> S = full_field(F);
    const RngSpec rng{0};
    const TailEstimate est = tail_estimate(F, 1, S, Rational(1, 10), Conditioning::AllPolys,
                                           EstimateMode::Exhaustive, 0, rng);
    CHECK(est.trials == 81);
    CHECK(est.hits == 60);
    CHECK(est.p_hat == Rational(20, 27));
    CHECK_FALSE(est.ci.has_value());
}

TEST_CASE("exhaustive tail conditioned on the curve family at q=3") {
    const Field F = Field::make(3);
    const std::vector<elem> S = full_field(F);
    const RngSpec rng{0};
    const TailEstimate est = tail_estimate(F, 1, S, Rational(1, 10), Conditioning::Hyperelliptic,
                                           EstimateMode::Exhaustive, 0, rng);
    CHECK(est.trials == 36); // matches the census valid count
    CHECK(boost::multiprecision::denominator(est.p_hat) <= 36);
}

TEST_CASE("histogram boundary cases are decided exactly") {
    const Field F = Field::make(3);
    const std::vector<elem> S = full_field(F);
    const THist h = exhaustive_t_histogram(F, 1, S, Conditioning::AllPolys);
    CHECK(h.included == 81);
    CHECK(h.scanned == 81);
    CHECK(h.count_t(0) == 21);
    // t = 1: |T| > sqrt(3) keeps |T| in {2, 3}
    CHECK(h.hits_above(Rational(1)) ==
          h.count_t(2) + h.count_t(-2) + h.count_t(3) + h.count_t(-3));
    // negative thresholds catch everything
    CHECK(h.hits_above(Rational(-1)) == h.included);
    // symmetry of the ensemble
    for (std::int64_t t = 1; t <= 3; ++t) CHECK(h.count_t(t) == h.count_t(-t));
    CHECK(h.moment(1) == 0);
    CHECK(h.moment(3) == 0);
    CHECK(h.moment(2) == exact_moment(2, 3, 3, 1));
}

TEST_CASE("distribution histogram in exhaustive mode") {
    const Field F = Field::make(3);
    const std::vector<elem> S = full_field(F);
    const RngSpec rng{0};
    const auto hist = distribution_histogram(F, 1, S, Conditioning::AllPolys,
                                             EstimateMode::Exhaustive, 0, rng);
    std::int64_t total = 0;
    for (const auto& [t, c] : hist) {
        CHECK(t >= -3);
        CHECK(t <= 3);
        CHECK(c > 0);
        total += c;
    }
    CHECK(total == 81);
    CHECK(hist.at(0) == 21);
}

TEST_CASE("monte carlo estimate is deterministic across worker counts") {
    const Field F = Field::make(7);
    const std::vector<elem> S = full_field(F);
    const RngSpec rng{2026};
    const TailEstimate a = tail_estimate(F, 1, S, Rational(1, 2), Conditioning::AllPolys,
                                         EstimateMode::MonteCarlo, 500, rng, 1);
    const TailEstimate b = tail_estimate(F, 1, S, Rational(1, 2), Conditioning::AllPolys,
                                         EstimateMode::MonteCarlo, 500, rng, 4);
    CHECK(a.hits == b.hits);
    CHECK(a.p_hat == b.p_hat);
    REQUIRE(a.ci.has_value());
    REQUIRE(b.ci.has_value());
    CHECK(a.ci->low == b.ci->low);
    CHECK(a.ci->high == b.ci->high);
}

TEST_CASE("monte carlo estimate agrees with the exhaustive answer") {
    const Field F = Field::make(3);
    const std::vector<elem> S = full_field(F);
    const RngSpec rng{31337};
    const TailEstimate mc = tail_estimate(F, 1, S, Rational(1, 10), Conditioning::AllPolys,
                                          EstimateMode::MonteCarlo, 20'000, rng);
    const double exact = 20.0 / 27.0;
    const double est = to_float(mc.p_hat);
    // 20000 trials put the standard error near 0.0031; allow six of those
    CHECK(std::abs(est - exact) < 0.02);
    REQUIRE(mc.ci.has_value());
    CHECK(mc.ci->low < exact);
    CHECK(mc.ci->high > exact);
}

TEST_CASE("monte carlo mode validates the trial count") {
    const Field F = Field::make(3);
    const std::vector<elem> S = full_field(F);
    const RngSpec rng{0};
    CHECK_THROWS_AS(tail_estimate(F, 1, S, Rational(1, 10), Conditioning::AllPolys,
                                  EstimateMode::MonteCarlo, 99, rng),
                    ValidationError);
}

TEST_CASE("monte carlo histogram accumulates exactly trials samples") {
    const Field F = Field::make(7);
    const std::vector<elem> S{0, 1, 2, 3};
    const RngSpec rng{8};
    const auto hist = distribution_histogram(F, 1, S, Conditioning::Hyperelliptic,
                                             EstimateMode::MonteCarlo, 300, rng, 2);
    std::int64_t total = 0;
    for (const auto& [t, c] : hist) total += c;
    CHECK(total == 300);
}

TEST_CASE("seeded subsets are deterministic, distinct, in range") {
    const Field F = Field::make(10007);
    const RngSpec rng{424242};
    const std::vector<elem> S = seeded_subset(F, 100, rng);
    CHECK(S.size() == 100);
    std::set<elem> uniq(S.begin(), S.end());
    CHECK(uniq.size() == 100);
    for (elem s : S) CHECK(s < 10007);
    CHECK(seeded_subset(F, 100, rng) == S);
    CHECK(seeded_subset(F, 100, RngSpec{424243}) != S);
    // prefix property: a smaller request is a prefix of a larger one
    const std::vector<elem> S2 = seeded_subset(F, 40, rng);
    CHECK(std::equal(S2.begin(), S2.end(), S.begin()));
    CHECK_THROWS_AS(seeded_subset(F, 0, rng), ValidationError);
    CHECK_THROWS_AS(seeded_subset(F, 10008, rng), ValidationError);
}

TEST_CASE("exhaustive scan works in an extension field") {
    const Field F = Field::make(3, 2);
    std::vector<elem> S{0, 1, 2, 3, 4}; // mixed subfield and proper elements
    const THist h = exhaustive_t_histogram(F, 1, S, Conditioning::AllPolys);
    CHECK(h.scanned == 6561);
    CHECK(h.included == 6561);
    CHECK(h.moment(1) == 0);

    // cross-check one histogram cell against direct evaluation
    std::int64_t direct_zero = 0;
    std::vector<elem> c(4);
    for (std::uint64_t idx = 0; idx < 6561; ++idx) {
        std::uint64_t t = idx;
        for (int i = 0; i < 4; ++i) {
            c[static_cast<std::size_t>(i)] = t % 9;
            t /= 9;
        }
        const Poly f = make_poly(F, c);
        std::int64_t T = 0;
        for (elem s : S) T += F.chi(evaluate(F, f, s));
        if (T == 0) ++direct_zero;
    }
    CHECK(h.count_t(0) == direct_zero);
}

TEST_CASE("exhaustive scan is deterministic across worker counts") {
    const Field F = Field::make(5);
    std::vector<elem> S{0, 1, 2, 3, 4};
    const THist a = exhaustive_t_histogram(F, 1, S, Conditioning::Hyperelliptic, 1);
    const THist b = exhaustive_t_histogram(F, 1, S, Conditioning::Hyperelliptic, 3);
    CHECK(a.counts == b.counts);
    CHECK(a.included == b.included);
}

TEST_CASE("scan budget guard") {
    const Field F = Field::make(101);
    std::vector<elem> S{0, 1, 2};
    CHECK_THROWS_AS(exhaustive_t_histogram(F, 2, S, Conditioning::AllPolys), BudgetError);
}
